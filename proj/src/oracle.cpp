#include "maxrank/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>

#include <omp.h>

namespace maxrank::oracle {
namespace {

std::string describe(char constraint, std::size_t d, std::size_t j, const std::string& what) {
    return std::string("constraint (") + constraint + ") violated at d=" + std::to_string(d) +
           ", j=" + std::to_string(j) + ": " + what;
}

MembershipResult violation(char constraint, std::size_t index, std::string message) {
    return {false, constraint, index, std::move(message)};
}

/// All subsets of `items` in increasing bitmask order.
std::vector<std::vector<PageId>> all_subsets(std::span<const PageId> items) {
    if (items.size() >= 32) throw std::invalid_argument("too many out-links to enumerate subsets");
    std::vector<std::vector<PageId>> out;
    const std::uint32_t count = std::uint32_t{1} << items.size();
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        std::vector<PageId> s;
        for (std::size_t b = 0; b < items.size(); ++b)
            if (mask & (std::uint32_t{1} << b)) s.push_back(items[b]);
        out.push_back(std::move(s));
    }
    return out;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // r * (n - k + i) / i stays integral at every step.
        const std::uint64_t num = saturating_mul(r, n - k + i);
        if (num == std::numeric_limits<std::uint64_t>::max()) return num;
        r = num / i;
    }
    return r;
}

struct PageActionTable {
    std::vector<ExplicitAction> actions;
    std::vector<double> rows;  // actions.size() x n, full transition rows
    std::vector<double> costs;
    std::vector<std::uint64_t> support;  // bitmask of positive row entries
};

/// True when some state is reachable from every state, i.e. the chain has a
/// single closed class.
bool single_closed_class(std::vector<std::uint64_t>& reach) {
    const std::size_t n = reach.size();
    for (std::size_t x = 0; x < n; ++x) reach[x] |= std::uint64_t{1} << x;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t x = 0; x < n; ++x)
            if (reach[x] >> k & 1U) reach[x] |= reach[k];
    std::uint64_t common = ~std::uint64_t{0};
    for (std::uint64_t r : reach) common &= r;
    return common != 0;
}

}  // namespace

std::vector<double> uniform_on(std::size_t n, std::span<const PageId> set) {
    std::vector<double> z(n, 0.0);
    if (set.empty()) return z;
    const double w = 1.0 / static_cast<double>(set.size());
    for (PageId i : set) z.at(i) = w;
    return z;
}

std::vector<double> click_distribution(std::size_t n, const ExplicitAction& a) {
    return a.kept_set.empty() ? uniform_on(n, a.teleport_set) : uniform_on(n, a.kept_set);
}

double action_cost(const WebGraph& g, std::span<const double> c_prime, double gamma, const ExplicitAction& a) {
    const std::size_t degree = g.out_degree(a.page);
    if (degree == 0) return c_prime[a.page];
    return c_prime[a.page] +
           gamma * static_cast<double>(degree - a.kept_set.size()) / static_cast<double>(degree);
}

PolytopeWitness action_to_witness(const ExplicitAction& a, const WebGraph& g) {
    const std::size_t n = g.num_pages();
    const std::size_t degree = g.out_degree(a.page);
    const std::size_t kept = a.kept_set.size();
    if (kept > degree) throw std::invalid_argument("kept set larger than the page's out-degree");

    PolytopeWitness wit;
    wit.sigma.assign(degree + 1, 0.0);
    wit.sigma[kept] = 1.0;
    wit.nu = click_distribution(n, a);
    wit.w.assign(degree + 1, std::vector<double>(n, 0.0));
    wit.w[kept] = wit.nu;
    return wit;
}

MembershipResult check_membership(const PolytopeWitness& wit, PageId x, const WebGraph& g,
                                  std::size_t teleport_count) {
    const std::size_t n = g.num_pages();
    if (x >= n) throw std::invalid_argument("page out of range");
    const std::size_t degree = g.out_degree(x);
    if (wit.sigma.size() != degree + 1 || wit.w.size() != degree + 1 || wit.nu.size() != n)
        throw std::invalid_argument("witness dimensions do not match page " + std::to_string(x));
    for (const auto& layer : wit.w)
        if (layer.size() != n) throw std::invalid_argument("witness layer has the wrong length");
    if (teleport_count == 0 || teleport_count > n) throw std::invalid_argument("teleport set size must lie in [1, n]");

    constexpr double tol = kMembershipTolerance;
    const auto& sigma = wit.sigma;
    const auto& w = wit.w;

    double total = 0.0;
    for (double s : sigma) total += s;
    if (std::abs(total - 1.0) > tol) return violation('a', 0, "constraint (a) violated: sum of sigma is " + std::to_string(total));

    for (std::size_t d = 0; d <= degree; ++d)
        if (sigma[d] < -tol) return violation('b', d, describe('b', d, 0, "sigma is negative"));

    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t d = 0; d <= degree; ++d) s += w[d][j];
        if (std::abs(wit.nu[j] - s) > tol) return violation('c', j, describe('c', 0, j, "nu differs from sum of w"));
    }

    for (std::size_t d = 0; d <= degree; ++d) {
        double s = 0.0;
        for (double value : w[d]) s += value;
        if (std::abs(s - sigma[d]) > tol) return violation('d', d, describe('d', d, 0, "layer mass differs from sigma"));
    }

    const double cap0 = sigma[0] / static_cast<double>(teleport_count);
    for (std::size_t j = 0; j < n; ++j)
        if (w[0][j] < -tol || w[0][j] > cap0 + tol)
            return violation('e', j, describe('e', 0, j, "teleport layer outside [0, sigma^0/N]"));

    const auto links = g.out_links(x);
    for (std::size_t d = 1; d <= degree; ++d)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::binary_search(links.begin(), links.end(), static_cast<PageId>(j)) && std::abs(w[d][j]) > tol)
                return violation('f', j, describe('f', d, j, "mass on a page that is not linked"));

    for (std::size_t d = 1; d <= degree; ++d) {
        const double cap = sigma[d] / static_cast<double>(d);
        for (PageId j : links)
            if (w[d][j] < -tol || w[d][j] > cap + tol)
                return violation('g', j, describe('g', d, j, "link layer outside [0, sigma^d/d]"));
    }
    return {};
}

std::vector<std::vector<PageId>> k_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<PageId>> out;
    if (k > n) return out;
    std::vector<PageId> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = static_cast<PageId>(i);
    while (true) {
        out.push_back(cur);
        // Advance the rightmost position that still has room.
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::vector<ExplicitAction> enumerate_actions(const WebGraph& g, PageId x, std::size_t teleport_count) {
    std::vector<ExplicitAction> out;
    const auto teleports = k_subsets(g.num_pages(), teleport_count);
    const auto kept_sets = all_subsets(g.out_links(x));
    for (const auto& i_set : teleports)
        for (const auto& j_set : kept_sets) out.push_back({x, i_set, j_set});
    return out;
}

std::vector<double> enumerate_bellman(std::span<const double> v, const WebGraph& g, const CostAssignment& costs,
                                      const MaxRankParams& p) {
    const std::size_t n = g.num_pages();
    if (v.size() != n || costs.size() != n) throw std::invalid_argument("vector length does not match the graph");
    const std::size_t teleport_count = p.teleport_count(n);
    std::vector<double> out(n);
    for (PageId x = 0; x < n; ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : enumerate_actions(g, x, teleport_count)) {
            // A dangling page has the single link set J = {} with no penalty.
            const auto nu = click_distribution(n, a);
            double expected = 0.0;
            for (std::size_t y = 0; y < n; ++y) expected += nu[y] * v[y];
            best = std::min(best, action_cost(g, costs.costs, p.gamma, a) + p.alpha * expected);
        }
        out[x] = best;
    }
    return out;
}

std::uint64_t count_policies(const WebGraph& g, std::size_t teleport_count) {
    const std::uint64_t teleports = binomial(g.num_pages(), teleport_count);
    std::uint64_t total = 1;
    for (PageId x = 0; x < g.num_pages(); ++x) {
        const std::size_t degree = g.out_degree(x);
        const std::uint64_t links = degree >= 64 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << degree;
        total = saturating_mul(total, saturating_mul(teleports, links));
    }
    return total;
}

PolicySearchResult enumerate_policies(const WebGraph& g, const CostAssignment& costs, const MaxRankParams& p,
                                      std::uint64_t limit) {
    p.validate();
    const std::size_t n = g.num_pages();
    if (n == 0) throw std::invalid_argument("graph has no pages");
    if (costs.size() != n) throw std::invalid_argument("cost vector does not match the graph");
    if (n > 64) throw std::invalid_argument("policy enumeration is limited to 64 pages");
    const std::size_t teleport_count = p.teleport_count(n);
    const std::uint64_t total = count_policies(g, teleport_count);
    if (total > limit)
        throw std::invalid_argument("instance has " + std::to_string(total) + " policies, above the limit of " +
                                    std::to_string(limit));

    std::vector<PageActionTable> tables(n);
    for (PageId x = 0; x < n; ++x) {
        auto& t = tables[x];
        t.actions = enumerate_actions(g, x, teleport_count);
        for (const auto& a : t.actions) {
            const auto nu = click_distribution(n, a);
            const auto z = uniform_on(n, a.teleport_set);
            std::uint64_t support = 0;
            for (std::size_t y = 0; y < n; ++y) {
                const double value = p.alpha * nu[y] + (1.0 - p.alpha) * z[y];
                t.rows.push_back(value);
                if (value > 0.0) support |= std::uint64_t{1} << y;
            }
            t.support.push_back(support);
            t.costs.push_back(action_cost(g, costs.costs, p.gamma, a));
        }
    }

    // Policies are numbered in mixed radix with page 0 most significant, so
    // index order is lexicographic order of the per-page action choices.
    const int max_threads = omp_get_max_threads();
    std::vector<double> best_lambda(static_cast<std::size_t>(max_threads), std::numeric_limits<double>::infinity());
    std::vector<std::uint64_t> best_index(static_cast<std::size_t>(max_threads), 0);
    std::vector<std::uint64_t> skipped(static_cast<std::size_t>(max_threads), 0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(max_threads));

#pragma omp parallel
    {
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
        const auto workers = static_cast<std::uint64_t>(omp_get_num_threads());
        const std::uint64_t lo = total * tid / workers;
        const std::uint64_t hi = total * (tid + 1) / workers;

        std::vector<std::size_t> digit(n, 0);
        std::uint64_t rest = lo;
        for (std::size_t x = n; x-- > 0;) {
            const std::uint64_t radix = tables[x].actions.size();
            digit[x] = static_cast<std::size_t>(rest % radix);
            rest /= radix;
        }

        std::vector<double> a(n * n);
        std::vector<double> b(n);
        std::vector<std::uint64_t> reach(n);
        auto advance = [&] {
            for (std::size_t x = n; x-- > 0;) {
                if (++digit[x] < tables[x].actions.size()) break;
                digit[x] = 0;
            }
        };
        for (std::uint64_t k = lo; k < hi; ++k, advance()) {
            for (std::size_t x = 0; x < n; ++x) reach[x] = tables[x].support[digit[x]];
            if (!single_closed_class(reach)) {
                ++skipped[tid];
                continue;
            }
            // Balance equations pi_y = sum_x pi_x P[x][y], last one replaced by sum pi = 1.
            for (std::size_t x = 0; x < n; ++x) {
                const double* row = tables[x].rows.data() + digit[x] * n;
                for (std::size_t y = 0; y + 1 < n; ++y) a[y * n + x] = row[y];
                a[(n - 1) * n + x] = 1.0;
            }
            for (std::size_t y = 0; y + 1 < n; ++y) a[y * n + y] -= 1.0;
            std::fill(b.begin(), b.end(), 0.0);
            b[n - 1] = 1.0;
            try {
                solve_dense(a, b, n);
            } catch (...) {
                errors[tid] = std::current_exception();
                break;
            }

            double lambda = 0.0;
            for (std::size_t x = 0; x < n; ++x) lambda += b[x] * tables[x].costs[digit[x]];
            if (lambda < best_lambda[tid]) {
                best_lambda[tid] = lambda;
                best_index[tid] = k;
            }
        }
    }

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    PolicySearchResult result;
    result.best_lambda = std::numeric_limits<double>::infinity();
    std::uint64_t winner = 0;
    for (std::size_t t = 0; t < best_lambda.size(); ++t) {
        if (best_lambda[t] < result.best_lambda || (best_lambda[t] == result.best_lambda && best_index[t] < winner)) {
            result.best_lambda = best_lambda[t];
            winner = best_index[t];
        }
    }
    if (result.best_lambda == std::numeric_limits<double>::infinity())
        throw std::logic_error("no policy with a single closed class");
    std::uint64_t rest = winner;
    result.best_policy.resize(n);
    for (std::size_t x = n; x-- > 0;) {
        const std::uint64_t radix = tables[x].actions.size();
        result.best_policy[x] = tables[x].actions[static_cast<std::size_t>(rest % radix)];
        rest /= radix;
    }
    result.multichain_skipped = 0;
    for (std::uint64_t k : skipped) result.multichain_skipped += k;
    result.policies_evaluated = total - result.multichain_skipped;
    return result;
}

void solve_dense(std::span<double> a, std::span<double> b, std::size_t n) {
    if (a.size() != n * n || b.size() != n) throw std::invalid_argument("dense system has the wrong shape");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (std::abs(a[pivot * n + col]) < 1e-14) throw std::domain_error("singular linear system");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
        b[r] = s / a[r * n + r];
    }
}

std::vector<double> dense_stationary(std::span<const double> transition, std::size_t n) {
    if (transition.size() != n * n) throw std::invalid_argument("transition matrix has the wrong shape");
    std::vector<double> a(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) a[y * n + x] = transition[x * n + y] - (x == y ? 1.0 : 0.0);
    for (std::size_t x = 0; x < n; ++x) a[(n - 1) * n + x] = 1.0;
    std::vector<double> b(n, 0.0);
    b[n - 1] = 1.0;
    solve_dense(a, b, n);
    return b;
}

std::vector<double> bias_linear_oracle(const WebGraph& g, std::span<const double> c_prime, double alpha) {
    const std::size_t n = g.num_pages();
    if (c_prime.size() != n) throw std::invalid_argument("cost vector does not match the graph");
    if (n > 2000) throw std::invalid_argument("dense bias oracle is limited to 2000 pages");
    std::vector<double> a(n * n, 0.0);
    for (PageId i = 0; i < n; ++i) {
        const auto links = g.out_links(i);
        if (links.empty()) throw std::invalid_argument("page " + std::to_string(i) + " has no out-link");
        a[i * n + i] += 1.0;
        for (PageId j : links) a[i * n + j] -= alpha / static_cast<double>(links.size());
    }
    std::vector<double> v(c_prime.begin(), c_prime.end());
    solve_dense(a, v, n);
    return v;
}

MonteCarloEstimate monte_carlo_bias(const WebGraph& g, std::span<const double> c_prime, double alpha, PageId page,
                                    std::size_t walks, std::uint64_t rng_seed) {
    if (walks == 0) throw std::invalid_argument("monte carlo needs at least one walk");
    if (page >= g.num_pages() || c_prime.size() != g.num_pages())
        throw std::invalid_argument("page or cost vector does not match the graph");
    for (PageId i = 0; i < g.num_pages(); ++i)
        if (g.out_degree(i) == 0) throw std::invalid_argument("page " + std::to_string(i) + " has no out-link");

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t w = 0; w < walks; ++w) {
        PageId x = page;
        double total = 0.0;
        while (true) {
            total += c_prime[x];
            if (coin(rng) >= alpha) break;
            const auto links = g.out_links(x);
            std::uniform_int_distribution<std::size_t> pick(0, links.size() - 1);
            x = links[pick(rng)];
        }
        sum += total;
        sum_sq += total * total;
    }
    const double count = static_cast<double>(walks);
    MonteCarloEstimate est;
    est.mean = sum / count;
    if (walks > 1) {
        const double variance = std::max(0.0, (sum_sq - count * est.mean * est.mean) / (count - 1.0));
        est.standard_error = std::sqrt(variance / count);
    }
    return est;
}

}  // namespace maxrank::oracle
