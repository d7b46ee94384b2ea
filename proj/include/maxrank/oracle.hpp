#pragma once

// Brute-force verifiers for small MaxRank instances. Nothing here calls into
// the solver: actions are enumerated explicitly and Markov chains are solved
// densely, so the results can be used to check the solver.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxrank/bellman.hpp"
#include "maxrank/costs.hpp"
#include "maxrank/web_graph.hpp"

namespace maxrank::oracle {

/// One explicit control at a page: teleport set I (|I| = N) and kept links J.
struct ExplicitAction {
    PageId page = 0;
    std::vector<PageId> teleport_set;
    std::vector<PageId> kept_set;

    friend bool operator==(const ExplicitAction&, const ExplicitAction&) = default;
};

/// A point (sigma, nu) of the occupation polytope of a page together with the
/// lifting w that certifies membership. w[d][j] for d in 0..D, j in 0..n-1.
struct PolytopeWitness {
    std::vector<double> sigma;
    std::vector<double> nu;
    std::vector<std::vector<double>> w;
};

struct MembershipResult {
    bool ok = true;
    /// 'a'..'g' naming the first violated constraint group, 0 when ok.
    char constraint = 0;
    /// Offending d or j (whichever the constraint is indexed by).
    std::size_t index = 0;
    std::string message;
};

inline constexpr double kMembershipTolerance = 1e-12;

/// The uniform distribution on a set, as a dense length-n vector.
std::vector<double> uniform_on(std::size_t n, std::span<const PageId> set);

/// Link-click distribution of an action: uniform on J, or on I when J is empty.
std::vector<double> click_distribution(std::size_t n, const ExplicitAction& a);

/// Instantaneous cost c'_x + gamma (D_x - |J|) / D_x (just c'_x when D_x = 0).
double action_cost(const WebGraph& g, std::span<const double> c_prime, double gamma, const ExplicitAction& a);

/// Lifts an action to the vertex (sigma(J), nu(I,J)) of the page's polytope.
PolytopeWitness action_to_witness(const ExplicitAction& a, const WebGraph& g);

/// Tests the seven constraint groups of the polytope of page x in order
/// (a) sum sigma = 1, (b) sigma >= 0, (c) nu = sum_d w^d, (d) sum_j w^d_j = sigma^d,
/// (e) 0 <= w^0_j <= sigma^0 / N, (f) w^d_j = 0 off F_x for d >= 1,
/// (g) 0 <= w^d_j <= sigma^d / d on F_x, and reports the first violation.
/// Throws std::invalid_argument if the witness dimensions do not match.
MembershipResult check_membership(const PolytopeWitness& wit, PageId x, const WebGraph& g, std::size_t teleport_count);

/// All k-element subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<PageId>> k_subsets(std::size_t n, std::size_t k);

/// Every admissible action of page x: all I with |I| = N times all J within F_x.
std::vector<ExplicitAction> enumerate_actions(const WebGraph& g, PageId x, std::size_t teleport_count);

/// T(v) computed by minimising c(x, I, J) + alpha * nu(I, J) . v over every
/// explicit action of every page.
std::vector<double> enumerate_bellman(std::span<const double> v, const WebGraph& g, const CostAssignment& costs,
                                      const MaxRankParams& p);

struct PolicySearchResult {
    double best_lambda = 0.0;
    std::vector<ExplicitAction> best_policy;
    std::uint64_t policies_evaluated = 0;
    /// Policies whose chain has more than one closed class. Their average
    /// cost depends on the start page; they are skipped, which leaves the
    /// optimum unchanged because any page can teleport into the best class.
    std::uint64_t multichain_skipped = 0;
};

inline constexpr std::uint64_t kMaxEnumeratedPolicies = 10'000'000;

/// Number of deterministic stationary policies: prod_x C(n, N) 2^{D_x}
/// (C(n, N) for pages without links). Saturates at UINT64_MAX.
std::uint64_t count_policies(const WebGraph& g, std::size_t teleport_count);

/// Minimum long-run average cost over every deterministic stationary policy
/// with a single closed class, each evaluated through a dense solve of its
/// stationary distribution.
/// Ties are broken towards the lexicographically first policy. Throws
/// std::invalid_argument when the instance has more than `limit` policies or
/// more than 64 pages.
PolicySearchResult enumerate_policies(const WebGraph& g, const CostAssignment& costs, const MaxRankParams& p,
                                      std::uint64_t limit = kMaxEnumeratedPolicies);

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// A is row-major n x n and is destroyed. Throws std::domain_error if A is
/// numerically singular.
void solve_dense(std::span<double> a, std::span<double> b, std::size_t n);

/// Stationary distribution of a row-stochastic dense matrix (row-major),
/// obtained by replacing one balance equation with the normalisation.
std::vector<double> dense_stationary(std::span<const double> transition, std::size_t n);

/// Solution of v = c' + alpha S v with S the uniform link matrix. Requires
/// every page to have an out-link and n <= 2000.
std::vector<double> bias_linear_oracle(const WebGraph& g, std::span<const double> c_prime, double alpha);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Average of sum_t c'(X_t) over `walks` random surfs from `page` that follow
/// uniform out-links and stop with probability 1 - alpha after each visit.
MonteCarloEstimate monte_carlo_bias(const WebGraph& g, std::span<const double> c_prime, double alpha, PageId page,
                                    std::size_t walks, std::uint64_t rng_seed);

}  // namespace maxrank::oracle
