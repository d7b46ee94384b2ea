#pragma once

#include <charconv>
#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "maxrank/web_graph.hpp"

namespace maxrank::detail {

/// Iterates over the significant lines of a text stream: comments ('#' to end
/// of line) are stripped and blank lines skipped. Tracks 1-based line numbers.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Fills `tokens` with the whitespace-separated fields of the next
    /// significant line. Returns false at end of stream.
    bool next(std::vector<std::string_view>& tokens) {
        while (std::getline(in_, buffer_)) {
            ++line_;
            std::string_view view(buffer_);
            if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
            tokens.clear();
            split(view, tokens);
            if (!tokens.empty()) return true;
        }
        if (in_.bad()) throw ParseError(line_, "read error");
        return false;
    }

    std::size_t line() const noexcept { return line_; }

private:
    static void split(std::string_view s, std::vector<std::string_view>& out) {
        std::size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && is_space(s[i])) ++i;
            std::size_t j = i;
            while (j < s.size() && !is_space(s[j])) ++j;
            if (j > i) out.push_back(s.substr(i, j - i));
            i = j;
        }
    }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

    std::istream& in_;
    std::string buffer_;
    std::size_t line_ = 0;
};

/// Parses a non-negative decimal integer token, rejecting signs and trailing
/// characters.
inline std::size_t parse_count(std::string_view token, std::size_t line) {
    std::size_t value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range)
        throw ParseError(line, "integer out of range: '" + std::string(token) + "'");
    if (ec != std::errc() || ptr != last)
        throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
    return value;
}

}  // namespace maxrank::detail
