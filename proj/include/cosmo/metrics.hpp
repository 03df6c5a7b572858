#pragma once

#include "cosmo/graph.hpp"

#include <json.hpp>

#include <string>

namespace cosmo {

/// Arc-level disagreement between a predicted and a true graph.
///
/// A true arc u->v that the prediction holds only as v->u counts once as
/// reversed. A true arc absent in both directions is missing. Any other
/// predicted arc that is not a true arc is extra.
struct StructuralErrors {
  std::size_t missing = 0;
  std::size_t extra = 0;
  std::size_t reversed = 0;
};

StructuralErrors structural_errors(const BinaryAdjacency& pred, const BinaryAdjacency& truth);

/// (missing + extra + reversed) / d.
double nhd(const BinaryAdjacency& pred, const BinaryAdjacency& truth);

struct Rates {
  double tpr = 0.0;
  double fpr = 0.0;
};

/// TP / P and FP / N over ordered off-diagonal pairs. Throws
/// std::invalid_argument when the truth has no positives or no negatives.
Rates tpr_fpr(const BinaryAdjacency& pred, const BinaryAdjacency& truth);

/// Area under the ROC curve of |W(u, v)| as a score for truth(u, v), over
/// ordered off-diagonal pairs. Mann-Whitney rank statistic with midranks for
/// ties. Throws std::invalid_argument when the truth has no positives or no
/// negatives.
double roc_auc(const WeightedAdjacency& scores, const BinaryAdjacency& truth);

struct EvalReport {
  double omega = 0.3;
  double nhd = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double auc = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t missing = 0;
  std::size_t extra = 0;
  std::size_t reversed = 0;
  std::size_t predicted_arcs = 0;
  std::size_t true_arcs = 0;
  std::size_t d = 0;
  bool acyclic = false;
};

/// Thresholds `learned` at omega and scores it against `truth`.
EvalReport evaluate(const WeightedAdjacency& learned, const BinaryAdjacency& truth, double omega);

nlohmann::ordered_json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

/// Header and row of the single-line CSV form (same field order as JSON).
std::string eval_csv_header();
std::string eval_csv_row(const EvalReport& report);

}  // namespace cosmo
