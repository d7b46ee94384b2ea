#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxrank {

using PageId = std::uint32_t;

/// Error raised while reading one of the text input formats. The message is
/// prefixed with "line N: " when a line number is known.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    explicit ParseError(const std::string& what);

    /// 0 when the error is not tied to a specific line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/**
Immutable directed graph in compressed adjacency (CSR) form.

Pages are dense ids 0..n-1. Out-neighbours of a page are stored sorted and
without duplicates; self-loops are allowed.
*/
class WebGraph {
public:
    WebGraph() = default;

    /// Builds from an arbitrary edge list. Parallel edges are merged.
    /// Throws std::invalid_argument if an endpoint is >= n.
    static WebGraph from_edges(std::size_t n, std::vector<std::pair<PageId, PageId>> edges);

    /// Builds from already-validated CSR arrays. Throws std::invalid_argument
    /// if the invariants do not hold.
    static WebGraph from_csr(std::vector<std::size_t> offsets, std::vector<PageId> targets);

    std::size_t num_pages() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return targets_.size(); }

    std::size_t out_degree(PageId page) const noexcept {
        return offsets_[page + 1] - offsets_[page];
    }

    std::span<const PageId> out_links(PageId page) const noexcept {
        return {targets_.data() + offsets_[page], out_degree(page)};
    }

    bool has_edge(PageId from, PageId to) const noexcept;

    std::span<const std::size_t> offsets() const noexcept { return offsets_; }
    std::span<const PageId> targets() const noexcept { return targets_; }

    friend bool operator==(const WebGraph&, const WebGraph&) = default;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<PageId> targets_;
};

/// Reads the edge-list format: header "n m", then m lines "src dst".
/// '#' starts a comment that runs to the end of the line; blank lines are
/// ignored.
WebGraph load_graph(std::istream& in);

/// Writes `g` in the format accepted by load_graph.
void write_graph(std::ostream& out, const WebGraph& g);

/// Graph with every arc reversed.
WebGraph reverse_graph(const WebGraph& g);

}  // namespace maxrank
