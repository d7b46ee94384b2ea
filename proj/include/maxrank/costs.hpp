#pragma once

#include <cstddef>
#include <istream>
#include <vector>

#include "maxrank/web_graph.hpp"

namespace maxrank {

enum class Label { Unknown, Spam, NonSpam };
enum class Split { None, Train, Test };

/// A-priori page costs together with the labels they were derived from.
struct CostAssignment {
    std::vector<double> costs;
    std::vector<Label> labels;
    std::vector<Split> split;

    std::size_t size() const noexcept { return costs.size(); }

    /// Pages carrying `label` in `split`, ascending.
    std::vector<PageId> pages_with(Label label, Split split) const;

    /// All-unknown assignment with explicit costs (labels Unknown, split None).
    static CostAssignment from_costs(std::vector<double> costs);
};

/// Reads "page_id label split" lines (label in {spam, nonspam}, split in
/// {train, test}). Train spam pages cost `cost_spam`, train nonspam pages
/// cost `cost_nonspam`, everything else costs 0. A page listed twice is an
/// error.
CostAssignment load_costs(std::istream& in, std::size_t n, double cost_spam, double cost_nonspam);

void write_labels(std::ostream& out, const CostAssignment& labels);

}  // namespace maxrank
