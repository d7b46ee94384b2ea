#include "maxrank/score_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "line_reader.hpp"

namespace maxrank {

std::string format_real(double x) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(len));
}

double parse_real(std::string_view token, std::size_t line) {
    const std::string text(token);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty())
        throw ParseError(line, "expected a real number, got '" + text + "'");
    if (errno == ERANGE && std::isinf(value)) throw ParseError(line, "real number out of range: '" + text + "'");
    return value;
}

void write_scores(std::ostream& out, const ScoreVector& scores) {
    for (std::size_t i = 0; i < scores.size(); ++i) out << i << ' ' << format_real(scores[i]) << '\n';
}

ScoreVector read_scores(std::istream& in, std::size_t expected_pages) {
    detail::LineReader reader(in);
    std::vector<std::string_view> tok;
    std::vector<double> values;
    std::vector<bool> seen;
    while (reader.next(tok)) {
        const std::size_t line = reader.line();
        if (tok.size() != 2) throw ParseError(line, "expected \"page_id score\"");
        const std::size_t id = detail::parse_count(tok[0], line);
        if (expected_pages != 0 && id >= expected_pages)
            throw ParseError(line, "node id " + std::to_string(id) + " out of range [0," +
                                       std::to_string(expected_pages) + ")");
        if (id >= values.size()) {
            values.resize(id + 1, 0.0);
            seen.resize(id + 1, false);
        }
        if (seen[id]) throw ParseError(line, "duplicate page id " + std::to_string(id));
        seen[id] = true;
        values[id] = parse_real(tok[1], line);
    }
    if (expected_pages != 0 && values.size() != expected_pages)
        throw ParseError("score file covers " + std::to_string(values.size()) + " pages, expected " +
                         std::to_string(expected_pages));
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw ParseError("score file has no entry for page " + std::to_string(i));
    return {std::move(values), ScoreKind::Real};
}

}  // namespace maxrank
