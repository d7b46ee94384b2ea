#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maxrank/costs.hpp"
#include "maxrank/web_graph.hpp"

namespace maxrank {

enum class SweepMode { GaussSeidel, Jacobi };

struct MaxRankParams {
    double alpha = 0.85;
    /// Penalty for removing every link of a page; removing k of D links costs gamma*k/D.
    double gamma = 4.0;
    /// Teleport set size is N = max(1, round(teleport_fraction * n)).
    double teleport_fraction = 0.89;
    /// Stop once the sup-norm residual ||v - T(v)|| drops below eps.
    double eps = 1e-8;
    std::size_t max_iters = 1000;
    SweepMode mode = SweepMode::GaussSeidel;
    /// l1 tolerance for the stationary distribution of the optimal chain.
    double stationary_eps = 1e-10;

    std::size_t teleport_count(std::size_t n) const;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Optimal value of one page's Bellman minimisation and the number of links
/// kept by the minimiser.
struct PageUpdate {
    double value = 0.0;
    std::size_t kept_degree = 0;
};

/**
The MaxRank dynamic programming operator

    T_i(v) = min_{d in 0..D_i} w_i^d,
    w_i^0 = c'_i + gamma + alpha * min_{|I|=N} mean(v_I),
    w_i^d = c'_i + gamma (D_i - d) / D_i + (alpha / d) * (sum of the d smallest v_j, j in F_i).

It is alpha-contracting in the sup norm. Pages without out-links only have
the teleport action, with no penalty. The object borrows the graph and costs.
*/
class BellmanOperator {
public:
    BellmanOperator(const WebGraph& graph, std::span<const double> costs, const MaxRankParams& params);

    const WebGraph& graph() const noexcept { return *graph_; }
    std::span<const double> costs() const noexcept { return costs_; }
    double alpha() const noexcept { return alpha_; }
    double gamma() const noexcept { return gamma_; }
    std::size_t teleport_count() const noexcept { return teleport_count_; }
    std::size_t num_pages() const noexcept { return graph_->num_pages(); }

    /// (1 - alpha) times the mean of the N smallest entries of v.
    double lambda(std::span<const double> v) const;

    /// One page of the operator. `lambda` must be this->lambda(v) for the v
    /// snapshot the caller has in mind; `scratch` is reused between calls.
    PageUpdate update_page(PageId page, std::span<const double> v, double lambda,
                           std::vector<double>& scratch) const;

private:
    const WebGraph* graph_;
    std::span<const double> costs_;
    double alpha_;
    double gamma_;
    std::size_t teleport_count_;
};

/// (1 - alpha)/N times the sum of the N smallest entries of v.
double teleport_lambda(std::span<const double> v, std::size_t teleport_count, double alpha);

PageUpdate bellman_update_page(PageId page, std::span<const double> v, double lambda, const WebGraph& g,
                               const CostAssignment& costs, const MaxRankParams& p);

/// Jacobi application of the operator: lambda is taken from v once and every
/// page is updated against the unmodified v.
std::vector<double> apply_T(std::span<const double> v, const WebGraph& g, const CostAssignment& costs,
                            const MaxRankParams& p);

/// Indices of the N smallest entries of v, ties broken by smaller id, in
/// increasing (value, id) order.
std::vector<PageId> smallest_entries(std::span<const double> v, std::size_t count);

}  // namespace maxrank
