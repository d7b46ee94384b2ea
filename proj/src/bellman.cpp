#include "maxrank/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "maxrank/kernels.hpp"

namespace maxrank {

std::size_t MaxRankParams::teleport_count(std::size_t n) const {
    const auto rounded = static_cast<std::size_t>(std::llround(teleport_fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(rounded, 1, std::max<std::size_t>(n, 1));
}

void MaxRankParams::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0,1)");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite and >= 0");
    if (!(teleport_fraction > 0.0 && teleport_fraction <= 1.0))
        throw std::invalid_argument("teleport fraction must lie in (0,1]");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (!(stationary_eps > 0.0)) throw std::invalid_argument("stationary eps must be > 0");
    if (max_iters == 0) throw std::invalid_argument("max_iters must be >= 1");
}

BellmanOperator::BellmanOperator(const WebGraph& graph, std::span<const double> costs, const MaxRankParams& params)
    : graph_(&graph),
      costs_(costs),
      alpha_(params.alpha),
      gamma_(params.gamma),
      teleport_count_(params.teleport_count(graph.num_pages())) {
    params.validate();
    if (graph.num_pages() == 0) throw std::invalid_argument("graph has no pages");
    if (costs.size() != graph.num_pages())
        throw std::invalid_argument("cost vector has " + std::to_string(costs.size()) + " entries for " +
                                    std::to_string(graph.num_pages()) + " pages");
    for (double c : costs)
        if (!std::isfinite(c)) throw std::invalid_argument("a-priori costs must be finite");
}

double BellmanOperator::lambda(std::span<const double> v) const {
    return teleport_lambda(v, teleport_count_, alpha_);
}

PageUpdate BellmanOperator::update_page(PageId page, std::span<const double> v, double lambda,
                                        std::vector<double>& scratch) const {
    const double base = costs_[page];
    // alpha * min_z z.v, written through lambda = (1 - alpha) min_z z.v.
    const double teleport_term = alpha_ == 0.0 ? 0.0 : alpha_ / (1.0 - alpha_) * lambda;
    const auto links = graph_->out_links(page);
    const std::size_t degree = links.size();
    if (degree == 0) return {base + teleport_term, 0};

    scratch.resize(degree);
    for (std::size_t k = 0; k < degree; ++k) scratch[k] = v[links[k]];
    std::sort(scratch.begin(), scratch.end());

    PageUpdate best{base + gamma_ + teleport_term, 0};
    const double inv_degree = 1.0 / static_cast<double>(degree);
    double prefix = 0.0;
    for (std::size_t d = 1; d <= degree; ++d) {
        prefix += scratch[d - 1];
        const double removed = static_cast<double>(degree - d) * inv_degree;
        const double w = base + gamma_ * removed + alpha_ / static_cast<double>(d) * prefix;
        if (w < best.value) best = {w, d};
    }
    return best;
}

double teleport_lambda(std::span<const double> v, std::size_t teleport_count, double alpha) {
    if (teleport_count == 0 || teleport_count > v.size())
        throw std::invalid_argument("teleport set size must lie in [1, n]");
    std::vector<double> values(v.begin(), v.end());
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(teleport_count);
    if (teleport_count < values.size()) std::nth_element(values.begin(), nth - 1, values.end());
    std::sort(values.begin(), nth);
    const double sum = std::accumulate(values.begin(), nth, 0.0);
    return (1.0 - alpha) * sum / static_cast<double>(teleport_count);
}

PageUpdate bellman_update_page(PageId page, std::span<const double> v, double lambda, const WebGraph& g,
                               const CostAssignment& costs, const MaxRankParams& p) {
    BellmanOperator op(g, costs.costs, p);
    std::vector<double> scratch;
    return op.update_page(page, v, lambda, scratch);
}

std::vector<double> apply_T(std::span<const double> v, const WebGraph& g, const CostAssignment& costs,
                            const MaxRankParams& p) {
    BellmanOperator op(g, costs.costs, p);
    if (v.size() != g.num_pages()) throw std::invalid_argument("value vector length does not match the graph");
    std::vector<double> out(v.size());
    kernels::jacobi_sweep(op, v, op.lambda(v), out, nullptr);
    return out;
}

std::vector<PageId> smallest_entries(std::span<const double> v, std::size_t count) {
    if (count > v.size()) throw std::invalid_argument("cannot select more entries than the vector holds");
    std::vector<PageId> ids(v.size());
    std::iota(ids.begin(), ids.end(), PageId{0});
    auto less = [&](PageId a, PageId b) { return v[a] < v[b] || (v[a] == v[b] && a < b); };
    auto mid = ids.begin() + static_cast<std::ptrdiff_t>(count);
    std::partial_sort(ids.begin(), mid, ids.end(), less);
    ids.resize(count);
    return ids;
}

}  // namespace maxrank
