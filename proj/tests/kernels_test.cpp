#include <gtest/gtest.h>

#include <random>

#include <omp.h>

#include "maxrank/kernels.hpp"
#include "maxrank/link_rank.hpp"
#include "test_support.hpp"

namespace maxrank {
namespace {

class ThreadCount {
public:
    explicit ThreadCount(int n) : saved_(omp_get_max_threads()) { omp_set_num_threads(n); }
    ~ThreadCount() { omp_set_num_threads(saved_); }

private:
    int saved_;
};

TEST(Reductions, MatchSerialLoops) {
    std::mt19937_64 rng(2);
    const std::size_t n = 3 * kernels::kReductionBlock + 17;
    const auto a = testing::random_vector(n, -1, 1, rng);
    const auto b = testing::random_vector(n, -1, 1, rng);
    double s = 0.0, l1 = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += a[i];
        l1 += std::abs(a[i] - b[i]);
        sup = std::max(sup, std::abs(a[i] - b[i]));
    }
    EXPECT_NEAR(kernels::sum(a), s, 1e-12 * n);
    EXPECT_NEAR(kernels::l1_distance(a, b), l1, 1e-12 * l1);
    EXPECT_EQ(kernels::sup_distance(a, b), sup);
    EXPECT_EQ(kernels::sum(std::vector<double>{}), 0.0);
}

TEST(Reductions, IndependentOfThreadCount) {
    std::mt19937_64 rng(3);
    const auto a = testing::random_vector(5 * kernels::kReductionBlock + 3, -1, 1, rng);
    double reference;
    {
        ThreadCount one(1);
        reference = kernels::sum(a);
    }
    for (int t : {2, 3, 4, 7}) {
        ThreadCount guard(t);
        EXPECT_EQ(kernels::sum(a), reference) << t << " threads";
    }
}

TEST(PowerStep, PullMatchesPush) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 1 + rng() % 3000;
        const WebGraph g = testing::random_graph(n, 0, 10, rng);
        std::vector<PageId> seed{static_cast<PageId>(rng() % n)};
        const kernels::DampedChain chain(g, TeleportVector(n, seed).dense(), 0.85);
        auto cur = testing::random_vector(n, 0, 1, rng);
        const double total = kernels::sum(cur);
        for (double& x : cur) x /= total;
        std::vector<double> pull(n), push(n);
        kernels::power_step(chain, cur, pull);
        kernels::power_step_serial(chain, cur, push);
        EXPECT_LT(testing::max_abs_diff(pull, push), 1e-15);
        EXPECT_NEAR(kernels::sum(pull), 1.0, 1e-12);
    }
}

TEST(PowerStep, DeterministicAcrossThreadCounts) {
    std::mt19937_64 rng(5);
    const WebGraph g = testing::random_graph(20000, 0, 6, rng);
    const auto pr = [&] { return pagerank(g, TeleportVector::uniform(20000)).scores.values; };
    std::vector<double> reference;
    {
        ThreadCount one(1);
        reference = pr();
    }
    for (int t : {2, 4}) {
        ThreadCount guard(t);
        EXPECT_EQ(pr(), reference);
    }
}

TEST(JacobiSweep, ParallelEqualsSerialBitwise) {
    std::mt19937_64 rng(6);
    for (std::size_t n : {1u, 50u, 5000u}) {
        const WebGraph g = testing::random_graph(n, 0, 12, rng);
        const auto costs = testing::random_vector(n, -1, 1, rng);
        const BellmanOperator op(g, costs, MaxRankParams{});
        const auto v = testing::random_vector(n, -4, 4, rng);
        const double lambda = op.lambda(v);
        std::vector<double> serial(n), parallel(n);
        std::vector<std::size_t> kept_serial, kept_parallel;
        const double r1 = kernels::jacobi_sweep_serial(op, v, lambda, serial, &kept_serial);
        for (int t : {1, 3}) {
            ThreadCount guard(t);
            const double r2 = kernels::jacobi_sweep(op, v, lambda, parallel, &kept_parallel);
            EXPECT_EQ(serial, parallel);
            EXPECT_EQ(kept_serial, kept_parallel);
            EXPECT_EQ(r1, r2);
        }
        EXPECT_EQ(r1, testing::max_abs_diff(serial, v));
    }
}

TEST(GaussSeidelSweep, UsesFreshValues) {
    // 0 -> 1 -> 0 with the teleport term switched off by a large gamma.
    const WebGraph g = testing::two_cycle();
    const std::vector<double> costs{1.0, 0.0};
    MaxRankParams p;
    p.gamma = 100;
    const BellmanOperator op(g, costs, p);
    std::vector<double> v{0.0, 0.0};
    const double change = kernels::gauss_seidel_sweep(op, v, 0.0);
    EXPECT_DOUBLE_EQ(v[0], 1.0);
    EXPECT_DOUBLE_EQ(v[1], 0.85 * 1.0);
    EXPECT_DOUBLE_EQ(change, 1.0);
}

TEST(GaussSeidelSweep, MatchesHandWrittenLoop) {
    std::mt19937_64 rng(8);
    const std::size_t n = 400;
    const WebGraph g = testing::random_graph(n, 0, 6, rng);
    const auto costs = testing::random_vector(n, -1, 1, rng);
    const BellmanOperator op(g, costs, MaxRankParams{});
    auto v = testing::random_vector(n, -2, 2, rng);
    auto expected = v;
    const double lambda = op.lambda(v);
    std::vector<double> scratch;
    for (PageId i = 0; i < n; ++i) expected[i] = op.update_page(i, expected, lambda, scratch).value;
    kernels::gauss_seidel_sweep(op, v, lambda);
    EXPECT_EQ(v, expected);
}

TEST(Kernels, RejectWrongLengths) {
    const WebGraph g = testing::two_cycle();
    const kernels::DampedChain chain(g, {0.5, 0.5}, 0.85);
    std::vector<double> one(1), two(2);
    EXPECT_THROW(kernels::power_step(chain, one, two), std::invalid_argument);
    EXPECT_THROW(kernels::DampedChain(g, {1.0}, 0.85), std::invalid_argument);
    EXPECT_THROW(kernels::l1_distance(one, two), std::invalid_argument);
}

}  // namespace
}  // namespace maxrank
