#include "maxrank/solver.hpp"

#include <algorithm>
#include <stdexcept>

#include "maxrank/kernels.hpp"

namespace maxrank {
namespace {

WebGraph graph_from_rows(std::size_t n, const std::vector<std::vector<PageId>>& rows) {
    if (rows.size() != n) throw std::invalid_argument("one kept-link row per page is required");
    std::vector<std::pair<PageId, PageId>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (PageId j : rows[i]) edges.emplace_back(static_cast<PageId>(i), j);
    return WebGraph::from_edges(n, std::move(edges));
}

}  // namespace

PolicyChain::PolicyChain(std::size_t n, std::vector<std::vector<PageId>> kept_links,
                         std::vector<PageId> teleport_set, double alpha)
    : kept_graph_(graph_from_rows(n, kept_links)), teleport_(n, std::move(teleport_set)), alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0,1)");
}

std::vector<double> PolicyChain::row(PageId x) const {
    std::vector<double> z = teleport_.dense();
    std::vector<double> r(num_pages(), 0.0);
    const auto links = kept_graph_.out_links(x);
    for (std::size_t y = 0; y < r.size(); ++y) r[y] = (links.empty() ? 1.0 : 1.0 - alpha_) * z[y];
    for (PageId y : links) r[y] += alpha_ / static_cast<double>(links.size());
    return r;
}

PowerIterationResult stationary_distribution(const PolicyChain& chain, double eps, std::size_t max_iters) {
    // A page without kept links jumps to z, which is exactly the dangling-row
    // convention of the damped chain.
    kernels::DampedChain damped(chain.kept_graph(), chain.teleport().dense(), chain.alpha());
    return power_iterate(damped, eps, max_iters);
}

void extract_policy(const BellmanOperator& op, MaxRankSolution& s) {
    const std::vector<double>& v = s.bias.values;
    const WebGraph& g = op.graph();
    const std::size_t n = g.num_pages();

    s.lambda = op.lambda(v);
    std::vector<double> tv(n);
    s.residual = kernels::jacobi_sweep(op, v, s.lambda, tv, &s.kept_degree);

    s.kept_links.assign(n, {});
    std::vector<PageId> order;
    for (PageId i = 0; i < n; ++i) {
        const auto links = g.out_links(i);
        order.assign(links.begin(), links.end());
        std::stable_sort(order.begin(), order.end(), [&](PageId a, PageId b) { return v[a] < v[b]; });
        order.resize(s.kept_degree[i]);
        std::sort(order.begin(), order.end());
        s.kept_links[i] = order;
    }

    s.teleport_set = smallest_entries(v, op.teleport_count());
    std::sort(s.teleport_set.begin(), s.teleport_set.end());
}

MaxRankSolution value_iteration(const WebGraph& g, const CostAssignment& costs, const MaxRankParams& p) {
    const BellmanOperator op(g, costs.costs, p);
    const std::size_t n = g.num_pages();

    MaxRankSolution s;
    std::vector<double> v(n, 0.0);
    std::vector<double> tv(n);
    while (true) {
        const double lambda = op.lambda(v);
        const double residual = kernels::jacobi_sweep(op, v, lambda, tv, nullptr);
        if (residual < p.eps) {
            s.converged = true;
            break;
        }
        if (s.sweeps == p.max_iters) break;
        if (p.mode == SweepMode::Jacobi) v.swap(tv);
        else kernels::gauss_seidel_sweep(op, v, lambda);
        ++s.sweeps;
    }

    s.bias = {std::move(v), ScoreKind::Real};
    extract_policy(op, s);

    const PolicyChain chain(n, s.kept_links, s.teleport_set, p.alpha);
    PowerIterationResult pi = stationary_distribution(chain, p.stationary_eps, p.max_iters);
    s.stationary = std::move(pi.scores);
    s.stationary_residual = pi.residual;
    s.stationary_iterations = pi.iterations;
    s.stationary_converged = pi.converged;
    return s;
}

}  // namespace maxrank
