#include "maxrank/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxrank::kernels {
namespace {

std::size_t num_blocks(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

template <class BlockFn>
double blocked_sum(std::size_t n, BlockFn&& block_fn) {
    const auto blocks = static_cast<std::ptrdiff_t>(num_blocks(n));
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        partial[static_cast<std::size_t>(b)] = block_fn(lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void check_sizes(std::size_t expected, std::size_t a, std::size_t b) {
    if (a != expected || b != expected) throw std::invalid_argument("vector length does not match the graph");
}

}  // namespace

double sum(std::span<const double> x) {
    return blocked_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        return s;
    });
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), a.size(), b.size());
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::abs(a[i] - b[i]);
        return s;
    });
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), a.size(), b.size());
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

DampedChain::DampedChain(const WebGraph& graph, std::vector<double> teleport, double alpha)
    : graph_(&graph), in_links_(reverse_graph(graph)), teleport_(std::move(teleport)), alpha_(alpha) {
    const std::size_t n = graph.num_pages();
    if (teleport_.size() != n) throw std::invalid_argument("teleport vector length does not match the graph");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0,1)");
    inv_out_degree_.assign(n, 0.0);
    for (PageId i = 0; i < n; ++i) {
        const std::size_t d = graph.out_degree(i);
        if (d == 0) dangling_.push_back(i);
        else inv_out_degree_[i] = 1.0 / static_cast<double>(d);
    }
}

void power_step(const DampedChain& chain, std::span<const double> cur, std::span<double> next) {
    const std::size_t n = chain.num_pages();
    check_sizes(n, cur.size(), next.size());
    const auto dangling = chain.dangling();
    const double dangling_mass = blocked_sum(dangling.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += cur[dangling[k]];
        return s;
    });
    const double alpha = chain.alpha();
    const double teleport_scale = alpha * dangling_mass + (1.0 - alpha);
    const auto z = chain.teleport();
    const auto inv_deg = chain.inv_out_degree();
    const WebGraph& in = chain.in_links();

#pragma omp parallel for schedule(dynamic, 1024)
    for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(n); ++jj) {
        const auto j = static_cast<PageId>(jj);
        double link_mass = 0.0;
        for (PageId i : in.out_links(j)) link_mass += cur[i] * inv_deg[i];
        next[j] = alpha * link_mass + teleport_scale * z[j];
    }
}

void power_step_serial(const DampedChain& chain, std::span<const double> cur, std::span<double> next) {
    const std::size_t n = chain.num_pages();
    check_sizes(n, cur.size(), next.size());
    const WebGraph& g = chain.graph();
    const double alpha = chain.alpha();
    std::fill(next.begin(), next.end(), 0.0);
    double dangling_mass = 0.0;
    for (PageId i = 0; i < n; ++i) {
        const auto links = g.out_links(i);
        if (links.empty()) {
            dangling_mass += cur[i];
            continue;
        }
        const double share = alpha * cur[i] / static_cast<double>(links.size());
        for (PageId j : links) next[j] += share;
    }
    const double teleport_scale = alpha * dangling_mass + (1.0 - alpha);
    const auto z = chain.teleport();
    for (std::size_t j = 0; j < n; ++j) next[j] += teleport_scale * z[j];
}

double jacobi_sweep(const BellmanOperator& op, std::span<const double> v, double lambda, std::span<double> out,
                    std::vector<std::size_t>* kept) {
    const std::size_t n = op.num_pages();
    check_sizes(n, v.size(), out.size());
    if (kept) kept->assign(n, 0);
    double residual = 0.0;
#pragma omp parallel reduction(max : residual)
    {
        std::vector<double> scratch;
#pragma omp for schedule(dynamic, 1024)
        for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
            const auto i = static_cast<PageId>(ii);
            const PageUpdate u = op.update_page(i, v, lambda, scratch);
            out[i] = u.value;
            if (kept) (*kept)[i] = u.kept_degree;
            residual = std::max(residual, std::abs(u.value - v[i]));
        }
    }
    return residual;
}

double jacobi_sweep_serial(const BellmanOperator& op, std::span<const double> v, double lambda,
                           std::span<double> out, std::vector<std::size_t>* kept) {
    const std::size_t n = op.num_pages();
    check_sizes(n, v.size(), out.size());
    if (kept) kept->assign(n, 0);
    std::vector<double> scratch;
    double residual = 0.0;
    for (PageId i = 0; i < n; ++i) {
        const PageUpdate u = op.update_page(i, v, lambda, scratch);
        out[i] = u.value;
        if (kept) (*kept)[i] = u.kept_degree;
        residual = std::max(residual, std::abs(u.value - v[i]));
    }
    return residual;
}

double gauss_seidel_sweep(const BellmanOperator& op, std::span<double> v, double lambda) {
    const std::size_t n = op.num_pages();
    check_sizes(n, v.size(), v.size());
    std::vector<double> scratch;
    double change = 0.0;
    for (PageId i = 0; i < n; ++i) {
        const double updated = op.update_page(i, v, lambda, scratch).value;
        change = std::max(change, std::abs(updated - v[i]));
        v[i] = updated;
    }
    return change;
}

}  // namespace maxrank::kernels
