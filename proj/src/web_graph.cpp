#include "maxrank/web_graph.hpp"

#include <algorithm>
#include <ostream>

#include "line_reader.hpp"

namespace maxrank {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

ParseError::ParseError(const std::string& what) : std::runtime_error(what) {}

WebGraph WebGraph::from_edges(std::size_t n, std::vector<std::pair<PageId, PageId>> edges) {
    for (const auto& [src, dst] : edges) {
        if (src >= n || dst >= n)
            throw std::invalid_argument("edge (" + std::to_string(src) + "," + std::to_string(dst) +
                                        ") out of range [0," + std::to_string(n) + ")");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    WebGraph g;
    g.offsets_.assign(n + 1, 0);
    g.targets_.reserve(edges.size());
    for (const auto& [src, dst] : edges) {
        ++g.offsets_[src + 1];
        g.targets_.push_back(dst);
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    return g;
}

WebGraph WebGraph::from_csr(std::vector<std::size_t> offsets, std::vector<PageId> targets) {
    if (offsets.empty() || offsets.front() != 0 || offsets.back() != targets.size())
        throw std::invalid_argument("CSR offsets must start at 0 and end at the edge count");
    const std::size_t n = offsets.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (offsets[i] > offsets[i + 1]) throw std::invalid_argument("CSR offsets must be nondecreasing");
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            if (targets[k] >= n) throw std::invalid_argument("CSR target out of range");
            if (k > offsets[i] && targets[k - 1] >= targets[k])
                throw std::invalid_argument("CSR targets must be strictly increasing per row");
        }
    }
    WebGraph g;
    g.offsets_ = std::move(offsets);
    g.targets_ = std::move(targets);
    return g;
}

bool WebGraph::has_edge(PageId from, PageId to) const noexcept {
    auto links = out_links(from);
    return std::binary_search(links.begin(), links.end(), to);
}

WebGraph load_graph(std::istream& in) {
    detail::LineReader reader(in);
    std::vector<std::string_view> tok;
    if (!reader.next(tok)) throw ParseError("empty graph stream: missing header \"n m\"");
    if (tok.size() != 2) throw ParseError(reader.line(), "malformed header, expected \"n m\"");
    const std::size_t n = detail::parse_count(tok[0], reader.line());
    const std::size_t m = detail::parse_count(tok[1], reader.line());
    if (n > std::size_t{1} << 32) throw ParseError(reader.line(), "page count exceeds 2^32");

    std::vector<std::pair<PageId, PageId>> edges;
    edges.reserve(m);
    while (reader.next(tok)) {
        const std::size_t line = reader.line();
        if (edges.size() == m) throw ParseError(line, "more edges than the " + std::to_string(m) + " declared");
        if (tok.size() != 2) throw ParseError(line, "expected \"src dst\"");
        const std::size_t src = detail::parse_count(tok[0], line);
        const std::size_t dst = detail::parse_count(tok[1], line);
        for (std::size_t id : {src, dst}) {
            if (id >= n)
                throw ParseError(line, "node id " + std::to_string(id) + " out of range [0," + std::to_string(n) + ")");
        }
        edges.emplace_back(static_cast<PageId>(src), static_cast<PageId>(dst));
    }
    if (edges.size() != m)
        throw ParseError(reader.line(), "truncated stream: " + std::to_string(edges.size()) + " of " +
                                            std::to_string(m) + " edges read");
    return WebGraph::from_edges(n, std::move(edges));
}

void write_graph(std::ostream& out, const WebGraph& g) {
    out << g.num_pages() << ' ' << g.num_edges() << '\n';
    for (PageId i = 0; i < g.num_pages(); ++i)
        for (PageId j : g.out_links(i)) out << i << ' ' << j << '\n';
}

WebGraph reverse_graph(const WebGraph& g) {
    const std::size_t n = g.num_pages();
    std::vector<std::size_t> offsets(n + 1, 0);
    for (PageId j : g.targets()) ++offsets[j + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];

    // Scanning sources in increasing order keeps each reversed row sorted.
    std::vector<PageId> targets(g.num_edges());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (PageId i = 0; i < n; ++i)
        for (PageId j : g.out_links(i)) targets[cursor[j]++] = i;
    return WebGraph::from_csr(std::move(offsets), std::move(targets));
}

}  // namespace maxrank
