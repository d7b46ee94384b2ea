#include "maxrank/costs.hpp"

#include <ostream>
#include <string>

#include "line_reader.hpp"

namespace maxrank {

std::vector<PageId> CostAssignment::pages_with(Label label, Split which) const {
    std::vector<PageId> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label && split[i] == which) out.push_back(static_cast<PageId>(i));
    return out;
}

CostAssignment CostAssignment::from_costs(std::vector<double> costs) {
    CostAssignment a;
    a.labels.assign(costs.size(), Label::Unknown);
    a.split.assign(costs.size(), Split::None);
    a.costs = std::move(costs);
    return a;
}

CostAssignment load_costs(std::istream& in, std::size_t n, double cost_spam, double cost_nonspam) {
    CostAssignment a;
    a.costs.assign(n, 0.0);
    a.labels.assign(n, Label::Unknown);
    a.split.assign(n, Split::None);

    detail::LineReader reader(in);
    std::vector<std::string_view> tok;
    while (reader.next(tok)) {
        const std::size_t line = reader.line();
        if (tok.size() != 3) throw ParseError(line, "expected \"page_id label split\"");
        const std::size_t id = detail::parse_count(tok[0], line);
        if (id >= n)
            throw ParseError(line, "node id " + std::to_string(id) + " out of range [0," + std::to_string(n) + ")");
        if (a.labels[id] != Label::Unknown) throw ParseError(line, "duplicate page id " + std::to_string(id));

        Label label;
        if (tok[1] == "spam") label = Label::Spam;
        else if (tok[1] == "nonspam") label = Label::NonSpam;
        else throw ParseError(line, "unknown label '" + std::string(tok[1]) + "'");

        Split split;
        if (tok[2] == "train") split = Split::Train;
        else if (tok[2] == "test") split = Split::Test;
        else throw ParseError(line, "unknown split '" + std::string(tok[2]) + "'");

        a.labels[id] = label;
        a.split[id] = split;
        if (split == Split::Train) a.costs[id] = label == Label::Spam ? cost_spam : cost_nonspam;
    }
    return a;
}

void write_labels(std::ostream& out, const CostAssignment& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels.labels[i] == Label::Unknown || labels.split[i] == Split::None) continue;
        out << i << ' ' << (labels.labels[i] == Label::Spam ? "spam" : "nonspam") << ' '
            << (labels.split[i] == Split::Train ? "train" : "test") << '\n';
    }
}

}  // namespace maxrank
