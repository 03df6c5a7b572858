#include "cosmo/metrics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cosmo;

namespace {

BinaryAdjacency arcs(std::size_t d, std::initializer_list<std::pair<int, int>> list) {
  BinaryAdjacency a = BinaryAdjacency::Constant(d, d, false);
  for (auto [u, v] : list) a(u, v) = true;
  return a;
}

BinaryAdjacency random_truth(std::size_t d, Rng& rng) {
  while (true) {
    auto a = oracle::random_digraph(d, rng.uniform(0.1, 0.6), rng);
    const auto pos = a.count();
    if (pos > 0 && pos < static_cast<Eigen::Index>(d * (d - 1))) return a;
  }
}

}  // namespace

TEST(StructuralErrors, Identity) {
  const auto t = arcs(3, {{0, 1}, {1, 2}});
  const auto e = structural_errors(t, t);
  EXPECT_EQ(e.missing + e.extra + e.reversed, 0u);
}

TEST(StructuralErrors, PureReversal) {
  const auto e = structural_errors(arcs(2, {{1, 0}}), arcs(2, {{0, 1}}));
  EXPECT_EQ(e.missing, 0u);
  EXPECT_EQ(e.extra, 0u);
  EXPECT_EQ(e.reversed, 1u);
}

TEST(StructuralErrors, HandCountedExample) {
  // truth 1->2, 2->3; pred 1->2, 3->2, 1->3 (1-based)
  const auto truth = arcs(3, {{0, 1}, {1, 2}});
  const auto pred = arcs(3, {{0, 1}, {2, 1}, {0, 2}});
  const auto e = structural_errors(pred, truth);
  EXPECT_EQ(e.missing, 0u);
  EXPECT_EQ(e.extra, 1u);
  EXPECT_EQ(e.reversed, 1u);
  EXPECT_NEAR(nhd(pred, truth), 2.0 / 3.0, 1e-15);
}

TEST(StructuralErrors, BothDirectionsPredicted) {
  // Truth u->v held in both directions: no reversal, v->u is extra.
  const auto e = structural_errors(arcs(2, {{0, 1}, {1, 0}}), arcs(2, {{0, 1}}));
  EXPECT_EQ(e.reversed, 0u);
  EXPECT_EQ(e.extra, 1u);
}

TEST(StructuralErrors, SizeMismatchThrows) {
  EXPECT_THROW(structural_errors(arcs(2, {}), arcs(3, {})), std::invalid_argument);
}

TEST(Nhd, EmptyPredictionCountsAllMissing) {
  Rng rng(1);
  const auto perm = rng.permutation(10);
  BinaryAdjacency truth = BinaryAdjacency::Constant(10, 10, false);
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10 && j <= i + 2; ++j) truth(perm[i], perm[j]) = true;
  }
  const double k = static_cast<double>(truth.count()) / 10.0;
  EXPECT_DOUBLE_EQ(nhd(BinaryAdjacency::Constant(10, 10, false), truth), k);
}

TEST(Nhd, RelabelingInvariantAndBounded) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.below(10);
    const auto truth = oracle::random_digraph(d, 0.3, rng);
    const auto pred = oracle::random_digraph(d, 0.3, rng);
    const auto perm = rng.permutation(d);
    BinaryAdjacency tp(d, d), pp(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        tp(i, j) = truth(perm[i], perm[j]);
        pp(i, j) = pred(perm[i], perm[j]);
      }
    }
    const double a = nhd(pred, truth);
    EXPECT_DOUBLE_EQ(a, nhd(pp, tp));
    EXPECT_GE(a, 0.0);
    // Every ordered off-diagonal pair contributes at most one error.
    EXPECT_LE(a, static_cast<double>(d - 1));
  }
}

TEST(Rates, Cases) {
  const auto truth = arcs(3, {{0, 1}, {1, 2}});
  const auto r = tpr_fpr(truth, truth);
  EXPECT_EQ(r.tpr, 1.0);
  EXPECT_EQ(r.fpr, 0.0);
  const auto e = tpr_fpr(arcs(3, {}), truth);
  EXPECT_EQ(e.tpr, 0.0);
  EXPECT_EQ(e.fpr, 0.0);
  // Two nodes, truth 0->1, prediction 1->0: no hits, one of one negative.
  const auto f = tpr_fpr(arcs(2, {{1, 0}}), arcs(2, {{0, 1}}));
  EXPECT_EQ(f.tpr, 0.0);
  EXPECT_EQ(f.fpr, 1.0);
  EXPECT_THROW(tpr_fpr(arcs(2, {}), arcs(2, {})), std::invalid_argument);
  EXPECT_THROW(tpr_fpr(arcs(2, {}), arcs(2, {{0, 1}, {1, 0}})), std::invalid_argument);
}

TEST(RocAuc, PerfectAndTied) {
  const auto truth = arcs(4, {{0, 1}, {1, 2}, {0, 3}});
  EXPECT_EQ(roc_auc(truth.cast<double>(), truth), 1.0);
  EXPECT_EQ(roc_auc(Matrix::Constant(4, 4, 0.7), truth), 0.5);
  EXPECT_EQ(roc_auc(1.0 - truth.cast<double>().array(), truth), 0.0);
  EXPECT_THROW(roc_auc(Matrix::Zero(4, 4), arcs(4, {})), std::invalid_argument);
}

TEST(RocAuc, MatchesThresholdSweep) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 2 + rng.below(7);
    const auto truth = random_truth(d, rng);
    Matrix w = oracle::random_matrix(d, d, rng);
    // Quantize half the instances to create ties.
    if (trial % 2) w = (w * 2.0).array().round() / 2.0;
    EXPECT_NEAR(roc_auc(w, truth), oracle::auc_by_sweep(w, truth), 1e-12);
  }
}

TEST(RocAuc, InvariantToMonotoneTransforms) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 3 + rng.below(6);
    const auto truth = random_truth(d, rng);
    const Matrix w = oracle::random_matrix(d, d, rng).cwiseAbs();
    const double base = roc_auc(w, truth);
    EXPECT_EQ(base, roc_auc(w.array().cube().matrix(), truth));
    EXPECT_EQ(base, roc_auc(2.0 * w, truth));
  }
}

TEST(RocAuc, IgnoresDiagonal) {
  const auto truth = arcs(3, {{0, 1}});
  Matrix w = truth.cast<double>();
  w.diagonal().setConstant(100.0);
  EXPECT_EQ(roc_auc(w, truth), 1.0);
}

TEST(Evaluate, ReportIsConsistent) {
  const auto truth = arcs(4, {{0, 1}, {1, 2}, {2, 3}});
  Matrix w = Matrix::Zero(4, 4);
  w(0, 1) = 1.0;   // hit
  w(2, 1) = -0.8;  // reversal of 1->2
  w(0, 3) = 0.5;   // extra
  w(3, 0) = 0.2;   // below threshold
  const auto r = evaluate(w, truth, 0.3);
  EXPECT_EQ(r.true_positives, 1u);
  EXPECT_EQ(r.false_positives, 2u);
  EXPECT_EQ(r.predicted_arcs, 3u);
  EXPECT_EQ(r.true_arcs, 3u);
  EXPECT_EQ(r.missing, 1u);
  EXPECT_EQ(r.reversed, 1u);
  EXPECT_EQ(r.extra, 1u);
  EXPECT_DOUBLE_EQ(r.nhd, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.tpr, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.fpr, 2.0 / 9.0);
  EXPECT_TRUE(r.acyclic);
  EXPECT_EQ(r.d, 4u);

  const auto j = to_json(r);
  const auto back = report_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.nhd, r.nhd);
  EXPECT_EQ(back.auc, r.auc);
  EXPECT_EQ(back.reversed, r.reversed);
  EXPECT_EQ(back.acyclic, r.acyclic);
  const std::string header = eval_csv_header(), row = eval_csv_row(r);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(row.substr(0, 4), "0.3,");
}
