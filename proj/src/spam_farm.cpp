#include "maxrank/spam_farm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace maxrank {

SyntheticInstance generate_spam_farm(const SpamFarmConfig& config, double cost_spam, double cost_nonspam) {
    const std::size_t honest = config.nonspam_pages;
    const std::size_t spam = config.spam_pages;
    if (honest < 2) throw std::invalid_argument("need at least two nonspam pages");
    if (config.farms == 0 || spam < 2 * config.farms) throw std::invalid_argument("each farm needs at least two pages");
    if (config.nonspam_out_degree >= honest) throw std::invalid_argument("nonspam out-degree must be below the page count");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
        throw std::invalid_argument("train fraction must lie in (0,1)");

    const std::size_t n = honest + spam;
    std::mt19937_64 rng(config.seed);
    auto uniform = [&rng](std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng); };
    auto coin = [&rng](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };

    // Internal layout: honest pages 0..honest-1, farm f occupies a contiguous
    // block of spam ids whose first page is the target.
    std::vector<std::pair<PageId, PageId>> edges;
    for (std::size_t i = 0; i < honest; ++i) {
        for (std::size_t k = 0; k < config.nonspam_out_degree; ++k) {
            std::size_t j = uniform(honest - 1);
            if (j >= i) ++j;
            edges.emplace_back(static_cast<PageId>(i), static_cast<PageId>(j));
        }
    }

    std::vector<std::size_t> farm_start(config.farms + 1);
    for (std::size_t f = 0; f <= config.farms; ++f) farm_start[f] = honest + f * spam / config.farms;
    for (std::size_t f = 0; f < config.farms; ++f) {
        const std::size_t target = farm_start[f];
        for (std::size_t i = target + 1; i < farm_start[f + 1]; ++i) {
            edges.emplace_back(static_cast<PageId>(i), static_cast<PageId>(target));
            edges.emplace_back(static_cast<PageId>(target), static_cast<PageId>(i));
            for (std::size_t j = target + 1; j < farm_start[f + 1]; ++j)
                if (j != i && coin(config.farm_density))
                    edges.emplace_back(static_cast<PageId>(i), static_cast<PageId>(j));
        }
        for (std::size_t i = target; i < farm_start[f + 1]; ++i)
            for (std::size_t k = 0; k < config.camouflage_links; ++k)
                edges.emplace_back(static_cast<PageId>(i), static_cast<PageId>(uniform(honest)));
    }
    for (std::size_t i = 0; i < honest; ++i) {
        if (coin(config.hijack_probability))
            edges.emplace_back(static_cast<PageId>(i), static_cast<PageId>(farm_start[uniform(config.farms)]));
    }

    std::vector<PageId> relabel(n);
    std::iota(relabel.begin(), relabel.end(), PageId{0});
    std::shuffle(relabel.begin(), relabel.end(), rng);
    for (auto& [a, b] : edges) {
        a = relabel[a];
        b = relabel[b];
    }

    SyntheticInstance inst;
    inst.graph = WebGraph::from_edges(n, std::move(edges));

    CostAssignment& labels = inst.labels;
    labels.costs.assign(n, 0.0);
    labels.labels.assign(n, Label::Unknown);
    labels.split.assign(n, Split::Test);
    auto assign_class = [&](std::size_t lo, std::size_t hi, Label label, double cost) {
        std::vector<PageId> members;
        for (std::size_t i = lo; i < hi; ++i) members.push_back(relabel[i]);
        std::shuffle(members.begin(), members.end(), rng);
        const auto train = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(members.size()))));
        for (std::size_t k = 0; k < members.size(); ++k) {
            const PageId page = members[k];
            labels.labels[page] = label;
            if (k < train) {
                labels.split[page] = Split::Train;
                labels.costs[page] = cost;
            }
        }
    };
    assign_class(0, honest, Label::NonSpam, cost_nonspam);
    assign_class(honest, n, Label::Spam, cost_spam);
    return inst;
}

}  // namespace maxrank
