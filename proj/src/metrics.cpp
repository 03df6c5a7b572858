#include "cosmo/metrics.hpp"

#include "cosmo/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cosmo {

namespace {

void require_same_shape(const BinaryAdjacency& a, const BinaryAdjacency& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("metrics: graphs must be square and of equal size");
  }
}

struct PairCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

PairCounts count_pairs(const BinaryAdjacency& truth) {
  const auto d = static_cast<std::size_t>(truth.rows());
  PairCounts c;
  c.positives = static_cast<std::size_t>(truth.count()) -
                static_cast<std::size_t>(truth.diagonal().count());
  c.negatives = d * (d > 0 ? d - 1 : 0) - c.positives;
  if (c.positives == 0 || c.negatives == 0) {
    throw std::invalid_argument("metrics: truth needs both positive and negative pairs");
  }
  return c;
}

}  // namespace

StructuralErrors structural_errors(const BinaryAdjacency& pred, const BinaryAdjacency& truth) {
  require_same_shape(pred, truth);
  const Eigen::Index d = pred.rows();
  StructuralErrors e;
  for (Eigen::Index u = 0; u < d; ++u) {
    for (Eigen::Index v = 0; v < d; ++v) {
      if (u == v) continue;
      if (truth(u, v) && !pred(u, v)) {
        if (pred(v, u)) {
          ++e.reversed;
        } else {
          ++e.missing;
        }
      }
      if (pred(u, v) && !truth(u, v)) {
        const bool covers_reversal = truth(v, u) && !pred(v, u);
        if (!covers_reversal) ++e.extra;
      }
    }
  }
  return e;
}

double nhd(const BinaryAdjacency& pred, const BinaryAdjacency& truth) {
  const auto e = structural_errors(pred, truth);
  if (pred.rows() == 0) return 0.0;
  return static_cast<double>(e.missing + e.extra + e.reversed) / static_cast<double>(pred.rows());
}

Rates tpr_fpr(const BinaryAdjacency& pred, const BinaryAdjacency& truth) {
  require_same_shape(pred, truth);
  const auto counts = count_pairs(truth);
  std::size_t tp = 0, fp = 0;
  for (Eigen::Index u = 0; u < pred.rows(); ++u) {
    for (Eigen::Index v = 0; v < pred.cols(); ++v) {
      if (u == v || !pred(u, v)) continue;
      if (truth(u, v)) {
        ++tp;
      } else {
        ++fp;
      }
    }
  }
  return {static_cast<double>(tp) / static_cast<double>(counts.positives),
          static_cast<double>(fp) / static_cast<double>(counts.negatives)};
}

double roc_auc(const WeightedAdjacency& scores, const BinaryAdjacency& truth) {
  if (scores.rows() != truth.rows() || scores.cols() != truth.cols()) {
    throw std::invalid_argument("roc_auc: score and truth shapes differ");
  }
  require_same_shape(truth, truth);
  const auto counts = count_pairs(truth);

  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(counts.positives + counts.negatives);
  for (Eigen::Index u = 0; u < truth.rows(); ++u) {
    for (Eigen::Index v = 0; v < truth.cols(); ++v) {
      if (u != v) items.push_back({std::abs(scores(u, v)), truth(u, v)});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.score < b.score; });

  // Sum of midranks (1-based) over positives.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    std::size_t tied_positives = 0;
    while (j < items.size() && items[j].score == items[i].score) {
      tied_positives += items[j].positive ? 1 : 0;
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += midrank * static_cast<double>(tied_positives);
    i = j;
  }
  const double p = static_cast<double>(counts.positives);
  const double n = static_cast<double>(counts.negatives);
  return (positive_rank_sum - 0.5 * p * (p + 1.0)) / (p * n);
}

EvalReport evaluate(const WeightedAdjacency& learned, const BinaryAdjacency& truth, double omega) {
  const BinaryAdjacency pred = threshold(learned, omega);
  require_same_shape(pred, truth);
  const auto errors = structural_errors(pred, truth);
  const auto rates = tpr_fpr(pred, truth);

  EvalReport r;
  r.omega = omega;
  r.d = static_cast<std::size_t>(truth.rows());
  r.nhd = static_cast<double>(errors.missing + errors.extra + errors.reversed) / static_cast<double>(r.d);
  r.tpr = rates.tpr;
  r.fpr = rates.fpr;
  r.auc = roc_auc(learned, truth);
  r.missing = errors.missing;
  r.extra = errors.extra;
  r.reversed = errors.reversed;
  r.true_arcs = static_cast<std::size_t>(truth.count() - truth.diagonal().count());
  r.predicted_arcs = static_cast<std::size_t>(pred.count() - pred.diagonal().count());
  r.true_positives = static_cast<std::size_t>((pred.array() && truth.array()).count());
  r.false_positives = r.predicted_arcs - r.true_positives;
  r.acyclic = is_dag(pred);
  return r;
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  return {
      {"omega", r.omega},
      {"nhd", r.nhd},
      {"tpr", r.tpr},
      {"fpr", r.fpr},
      {"auc", r.auc},
      {"true_positives", r.true_positives},
      {"false_positives", r.false_positives},
      {"missing", r.missing},
      {"extra", r.extra},
      {"reversed", r.reversed},
      {"predicted_arcs", r.predicted_arcs},
      {"true_arcs", r.true_arcs},
      {"d", r.d},
      {"acyclic", r.acyclic},
  };
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.omega = j.at("omega").get<double>();
  r.nhd = j.at("nhd").get<double>();
  r.tpr = j.at("tpr").get<double>();
  r.fpr = j.at("fpr").get<double>();
  r.auc = j.at("auc").get<double>();
  r.true_positives = j.at("true_positives").get<std::size_t>();
  r.false_positives = j.at("false_positives").get<std::size_t>();
  r.missing = j.at("missing").get<std::size_t>();
  r.extra = j.at("extra").get<std::size_t>();
  r.reversed = j.at("reversed").get<std::size_t>();
  r.predicted_arcs = j.at("predicted_arcs").get<std::size_t>();
  r.true_arcs = j.at("true_arcs").get<std::size_t>();
  r.d = j.at("d").get<std::size_t>();
  r.acyclic = j.at("acyclic").get<bool>();
  return r;
}

std::string eval_csv_header() {
  return "omega,nhd,tpr,fpr,auc,true_positives,false_positives,missing,extra,reversed,"
         "predicted_arcs,true_arcs,d,acyclic";
}

std::string eval_csv_row(const EvalReport& r) {
  std::string row;
  for (double v : {r.omega, r.nhd, r.tpr, r.fpr, r.auc}) {
    row += format_double(v);
    row += ',';
  }
  for (std::size_t v : {r.true_positives, r.false_positives, r.missing, r.extra, r.reversed,
                        r.predicted_arcs, r.true_arcs, r.d}) {
    row += std::to_string(v);
    row += ',';
  }
  row += r.acyclic ? "1" : "0";
  return row;
}

}  // namespace cosmo
