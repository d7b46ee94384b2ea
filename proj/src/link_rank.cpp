#include "maxrank/link_rank.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "maxrank/kernels.hpp"

namespace maxrank {

TeleportVector::TeleportVector(std::size_t n, std::vector<PageId> support) : n_(n), support_(std::move(support)) {
    if (support_.empty()) throw std::invalid_argument("teleport support must be nonempty");
    std::sort(support_.begin(), support_.end());
    support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
    if (support_.back() >= n)
        throw std::invalid_argument("teleport page " + std::to_string(support_.back()) + " out of range [0," +
                                    std::to_string(n) + ")");
}

TeleportVector TeleportVector::uniform(std::size_t n) {
    std::vector<PageId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<PageId>(i);
    return TeleportVector(n, std::move(all));
}

std::vector<double> TeleportVector::dense() const {
    std::vector<double> z(n_, 0.0);
    const double w = 1.0 / static_cast<double>(support_.size());
    for (PageId i : support_) z[i] = w;
    return z;
}

PowerIterationResult power_iterate(const kernels::DampedChain& chain, double eps, std::size_t max_iters) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    PowerIterationResult result;
    std::vector<double> cur(chain.teleport().begin(), chain.teleport().end());
    std::vector<double> next(cur.size());
    result.residual = std::numeric_limits<double>::infinity();
    while (result.iterations < max_iters) {
        kernels::power_step(chain, cur, next);
        ++result.iterations;
        result.residual = kernels::l1_distance(cur, next);
        cur.swap(next);
        if (result.residual <= eps) {
            result.converged = true;
            break;
        }
    }
    result.scores = {std::move(cur), ScoreKind::Distribution};
    return result;
}

PowerIterationResult pagerank(const WebGraph& g, const TeleportVector& z, const PowerIterationOptions& opt) {
    if (z.num_pages() != g.num_pages()) throw std::invalid_argument("teleport vector does not match the graph");
    kernels::DampedChain chain(g, z.dense(), opt.alpha);
    return power_iterate(chain, opt.eps, opt.max_iters);
}

PowerIterationResult trustrank(const WebGraph& g, std::vector<PageId> trusted, const PowerIterationOptions& opt) {
    if (trusted.empty()) throw std::invalid_argument("trustrank needs a nonempty trusted seed");
    return pagerank(g, TeleportVector(g.num_pages(), std::move(trusted)), opt);
}

PowerIterationResult antitrustrank(const WebGraph& g, std::vector<PageId> spam, const PowerIterationOptions& opt) {
    if (spam.empty()) throw std::invalid_argument("antitrustrank needs a nonempty spam seed");
    return trustrank(reverse_graph(g), std::move(spam), opt);
}

}  // namespace maxrank
