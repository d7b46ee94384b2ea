#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "maxrank/costs.hpp"
#include "maxrank/link_rank.hpp"

namespace maxrank {

/// Which end of a score scale indicates spam.
enum class Direction { HigherIsSpam, LowerIsSpam };

struct PrPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;

    friend bool operator==(const PrPoint&, const PrPoint&) = default;
};

/// Precision/recall pairs obtained by loosening the threshold one distinct
/// score value at a time, so recall is nondecreasing along `points`.
struct PrecisionRecallCurve {
    std::vector<PrPoint> points;
    Direction direction = Direction::HigherIsSpam;
    Label target = Label::Spam;
};

/**
Precision/recall curve of `scores` for retrieving pages labelled `target`.

Only labelled Test pages are evaluated (Train pages too when include_train is
set). A threshold retrieves every evaluated page on the target's side of the
scale: at or above it when looking for spam with HigherIsSpam, at or below it
for nonspam, and mirrored for LowerIsSpam. Tied pages are retrieved together.
Throws std::invalid_argument when no evaluated page carries the target label.
*/
PrecisionRecallCurve precision_recall(const ScoreVector& scores, const CostAssignment& labels, Label target,
                                      Direction direction, bool include_train = false);

/// Trapezoid area under precision(recall), extended flat from recall 0 to the
/// first point.
double trapezoid_auc(const PrecisionRecallCurve& curve);

/// Best precision among points with recall >= `recall`; 0 if none.
double precision_at_recall(const PrecisionRecallCurve& curve, double recall);

enum class DemotionVariant { Raw, MeanNormalized };

struct DemotionEntry {
    PageId page = 0;
    double ratio = 0.0;

    friend bool operator==(const DemotionEntry&, const DemotionEntry&) = default;
};

/// Per-page candidate/PageRank ratios, ascending (ties by page id).
struct DemotionTable {
    std::vector<DemotionEntry> entries;
    DemotionVariant variant = DemotionVariant::Raw;
};

/// Ratios candidate_i / pagerank_i over pages with pagerank_i > 0. The
/// MeanNormalized variant divides every ratio by their mean. Throws
/// std::invalid_argument on length mismatch or when no page has positive
/// PageRank.
DemotionTable demotion_table(const ScoreVector& candidate, const ScoreVector& pagerank, DemotionVariant variant);

/// CSV "threshold,precision,recall" with 17 significant digits.
void export_curve(std::ostream& out, const PrecisionRecallCurve& curve);
/// Inverse of export_curve; direction and target are not stored and keep their defaults.
PrecisionRecallCurve import_curve(std::istream& in);

/// CSV "page_id,ratio" with 17 significant digits.
void export_demotion(std::ostream& out, const DemotionTable& table);
DemotionTable import_demotion(std::istream& in);

}  // namespace maxrank
