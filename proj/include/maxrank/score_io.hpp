#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "maxrank/link_rank.hpp"

namespace maxrank {

/// Decimal form with 17 significant digits; parse_real reads it back exactly.
std::string format_real(double x);

/// Parses a real written by format_real (or any decimal/scientific literal).
double parse_real(std::string_view token, std::size_t line);

/// "page_id score" per line, in page id order.
void write_scores(std::ostream& out, const ScoreVector& scores);

/// Reads a score file. Every page 0..n-1 must appear exactly once, where n is
/// one more than the largest id in the file; `expected_pages` is checked when
/// nonzero. The kind of the result is Real.
ScoreVector read_scores(std::istream& in, std::size_t expected_pages = 0);

}  // namespace maxrank
