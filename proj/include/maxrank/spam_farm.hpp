#pragma once

#include <cstddef>
#include <cstdint>

#include "maxrank/costs.hpp"
#include "maxrank/web_graph.hpp"

namespace maxrank {

/// Parameters of the planted link-farm generator.
struct SpamFarmConfig {
    std::size_t nonspam_pages = 900;
    std::size_t spam_pages = 100;
    /// Out-links of each honest page, drawn among honest pages.
    std::size_t nonspam_out_degree = 6;
    /// Spam pages are split into this many farms, each boosting one target.
    std::size_t farms = 5;
    /// Probability of each intra-farm link between two non-target farm pages.
    double farm_density = 0.3;
    /// Links from each spam page to random honest pages (camouflage).
    std::size_t camouflage_links = 1;
    /// Probability that an honest page carries one link into a farm target.
    double hijack_probability = 0.03;
    /// Fraction of each class whose label is put in the Train split.
    double train_fraction = 0.1;
    std::uint64_t seed = 20121;
};

struct SyntheticInstance {
    WebGraph graph;
    /// Every page is labelled; costs follow load_costs' default mapping.
    CostAssignment labels;
};

/**
Random web graph with planted spam farms.

Honest pages link to uniformly chosen honest pages. Every farm page links to
its farm's target and to farm-mates with probability farm_density; the target
links back to all of its farm. A few honest pages link into farm targets.
Page ids are shuffled so that classes are not contiguous. Output depends only
on the config.
*/
SyntheticInstance generate_spam_farm(const SpamFarmConfig& config, double cost_spam = 1.0,
                                     double cost_nonspam = -0.2);

}  // namespace maxrank
