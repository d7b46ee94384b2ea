#pragma once

#include <cstddef>
#include <vector>

#include "maxrank/bellman.hpp"
#include "maxrank/costs.hpp"
#include "maxrank/link_rank.hpp"
#include "maxrank/web_graph.hpp"

namespace maxrank {

/**
Transition law of a stationary MaxRank policy:

    row(x) = alpha * nu(x) + (1 - alpha) * z,

with z uniform on the teleport set and nu(x) uniform on the kept links of x,
or equal to z when x keeps no link.
*/
class PolicyChain {
public:
    PolicyChain(std::size_t n, std::vector<std::vector<PageId>> kept_links, std::vector<PageId> teleport_set,
                double alpha);

    std::size_t num_pages() const noexcept { return kept_graph_.num_pages(); }
    double alpha() const noexcept { return alpha_; }

    /// Graph restricted to the kept links.
    const WebGraph& kept_graph() const noexcept { return kept_graph_; }
    const TeleportVector& teleport() const noexcept { return teleport_; }

    /// Dense transition row of page x.
    std::vector<double> row(PageId x) const;

private:
    WebGraph kept_graph_;
    TeleportVector teleport_;
    double alpha_;
};

struct MaxRankSolution {
    /// Fixed point of the Bellman operator (kind Real).
    ScoreVector bias;
    /// Optimal average cost, (1 - alpha) * mean of the N smallest bias entries.
    double lambda = 0.0;
    std::vector<std::size_t> kept_degree;
    /// Per page, its kept_degree[i] out-neighbours of smallest bias, ascending by id.
    std::vector<std::vector<PageId>> kept_links;
    /// The N pages of smallest bias, ascending by id.
    std::vector<PageId> teleport_set;
    /// Stationary distribution of the optimal chain (the MaxRank vector).
    ScoreVector stationary;

    /// ||bias - T(bias)||_inf at the returned bias.
    double residual = 0.0;
    std::size_t sweeps = 0;
    bool converged = false;

    double stationary_residual = 0.0;
    std::size_t stationary_iterations = 0;
    bool stationary_converged = false;
};

/// Power iteration for the stationary distribution of a policy chain,
/// starting from the teleport distribution.
PowerIterationResult stationary_distribution(const PolicyChain& chain, double eps, std::size_t max_iters);

/// Optimal link/teleport policy for a given bias: d* from the Bellman
/// minimisation, the d* smallest-bias neighbours, and the N smallest-bias pages.
void extract_policy(const BellmanOperator& op, MaxRankSolution& solution);

/**
Value iteration for the MaxRank ergodic control problem, starting from v = 0.

Each sweep freezes lambda at the pre-sweep v. In GaussSeidel mode pages are
then updated in place in id order; in Jacobi mode v <- T(v). Iteration stops
when the Jacobi residual ||v - T(v)||_inf < eps or after max_iters sweeps.
The optimal policy and its stationary distribution are extracted from the
final v.
*/
MaxRankSolution value_iteration(const WebGraph& g, const CostAssignment& costs, const MaxRankParams& p);

}  // namespace maxrank
