#include "maxrank/spam_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "line_reader.hpp"
#include "maxrank/score_io.hpp"

namespace maxrank {
namespace {

/// Splits CSV data lines into fields after checking the header.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string_view header) : in_(in) {
        std::string first;
        if (!std::getline(in_, first)) throw ParseError("empty CSV stream: missing header");
        ++line_;
        if (!first.empty() && first.back() == '\r') first.pop_back();
        if (first != header) throw ParseError(1, "expected header \"" + std::string(header) + "\"");
    }

    bool next(std::vector<std::string_view>& fields, std::size_t expected) {
        while (std::getline(in_, buffer_)) {
            ++line_;
            if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
            if (buffer_.empty()) continue;
            fields.clear();
            std::string_view rest(buffer_);
            while (true) {
                const auto comma = rest.find(',');
                fields.push_back(rest.substr(0, comma));
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
            if (fields.size() != expected)
                throw ParseError(line_, "expected " + std::to_string(expected) + " comma-separated fields");
            return true;
        }
        if (in_.bad()) throw ParseError(line_, "read error");
        return false;
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::string buffer_;
    std::size_t line_ = 0;
};

void check_written(std::ostream& out) {
    if (!out) throw std::runtime_error("write failed");
}

}  // namespace

PrecisionRecallCurve precision_recall(const ScoreVector& scores, const CostAssignment& labels, Label target,
                                      Direction direction, bool include_train) {
    if (scores.size() != labels.size()) throw std::invalid_argument("score vector does not match the label set");
    if (target == Label::Unknown) throw std::invalid_argument("target label must be spam or nonspam");

    std::vector<PageId> pages;
    std::size_t relevant = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels.labels[i] == Label::Unknown) continue;
        const bool evaluated = labels.split[i] == Split::Test || (include_train && labels.split[i] == Split::Train);
        if (!evaluated) continue;
        pages.push_back(static_cast<PageId>(i));
        if (labels.labels[i] == target) ++relevant;
    }
    if (relevant == 0) throw std::invalid_argument("no evaluated page carries the target label");

    // Retrieval starts from the end of the scale where the target lives.
    const bool spam_side = target == Label::Spam;
    const bool descending = spam_side == (direction == Direction::HigherIsSpam);
    std::stable_sort(pages.begin(), pages.end(), [&](PageId a, PageId b) {
        return descending ? scores[a] > scores[b] : scores[a] < scores[b];
    });

    PrecisionRecallCurve curve;
    curve.direction = direction;
    curve.target = target;
    std::size_t retrieved = 0;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < pages.size();) {
        const double threshold = scores[pages[k]];
        while (k < pages.size() && scores[pages[k]] == threshold) {
            ++retrieved;
            if (labels.labels[pages[k]] == target) ++hits;
            ++k;
        }
        curve.points.push_back({threshold, static_cast<double>(hits) / static_cast<double>(retrieved),
                                static_cast<double>(hits) / static_cast<double>(relevant)});
    }
    return curve;
}

double trapezoid_auc(const PrecisionRecallCurve& curve) {
    if (curve.points.empty()) return 0.0;
    double area = curve.points.front().recall * curve.points.front().precision;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const PrPoint& a = curve.points[k - 1];
        const PrPoint& b = curve.points[k];
        area += 0.5 * (b.recall - a.recall) * (a.precision + b.precision);
    }
    return area;
}

double precision_at_recall(const PrecisionRecallCurve& curve, double recall) {
    double best = 0.0;
    for (const PrPoint& p : curve.points)
        if (p.recall >= recall) best = std::max(best, p.precision);
    return best;
}

DemotionTable demotion_table(const ScoreVector& candidate, const ScoreVector& pagerank, DemotionVariant variant) {
    if (candidate.size() != pagerank.size()) throw std::invalid_argument("score vectors have different lengths");
    DemotionTable table;
    table.variant = variant;
    for (std::size_t i = 0; i < pagerank.size(); ++i) {
        if (pagerank[i] > 0.0) {
            const double ratio = candidate[i] / pagerank[i];
            if (!std::isfinite(ratio)) throw std::invalid_argument("non-finite demotion ratio at page " + std::to_string(i));
            table.entries.push_back({static_cast<PageId>(i), ratio});
        }
    }
    if (table.entries.empty()) throw std::invalid_argument("no page has positive PageRank");

    if (variant == DemotionVariant::MeanNormalized) {
        double mean = 0.0;
        for (const auto& e : table.entries) mean += e.ratio;
        mean /= static_cast<double>(table.entries.size());
        if (mean == 0.0) throw std::invalid_argument("mean demotion ratio is zero");
        for (auto& e : table.entries) e.ratio /= mean;
    }
    std::stable_sort(table.entries.begin(), table.entries.end(),
                     [](const DemotionEntry& a, const DemotionEntry& b) { return a.ratio < b.ratio; });
    return table;
}

void export_curve(std::ostream& out, const PrecisionRecallCurve& curve) {
    out << "threshold,precision,recall\n";
    for (const PrPoint& p : curve.points)
        out << format_real(p.threshold) << ',' << format_real(p.precision) << ',' << format_real(p.recall) << '\n';
    check_written(out);
}

PrecisionRecallCurve import_curve(std::istream& in) {
    CsvReader reader(in, "threshold,precision,recall");
    PrecisionRecallCurve curve;
    std::vector<std::string_view> f;
    while (reader.next(f, 3))
        curve.points.push_back(
            {parse_real(f[0], reader.line()), parse_real(f[1], reader.line()), parse_real(f[2], reader.line())});
    return curve;
}

void export_demotion(std::ostream& out, const DemotionTable& table) {
    out << "page_id,ratio\n";
    for (const DemotionEntry& e : table.entries) out << e.page << ',' << format_real(e.ratio) << '\n';
    check_written(out);
}

DemotionTable import_demotion(std::istream& in) {
    CsvReader reader(in, "page_id,ratio");
    DemotionTable table;
    std::vector<std::string_view> f;
    while (reader.next(f, 2))
        table.entries.push_back({static_cast<PageId>(detail::parse_count(f[0], reader.line())),
                                 parse_real(f[1], reader.line())});
    return table;
}

}  // namespace maxrank
