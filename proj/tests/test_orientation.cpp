#include "cosmo/orientation.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cosmo;

namespace {

PriorityVector figure_priorities() {
  PriorityVector p(5);
  p << 4.2, 4.1, 2.0, -0.4, 1.9;
  return p;
}

// Loss used by gradient checks: L(W) = sum(C o W) + 0.5 * sum((W o W)), with
// a fixed random C. dL/dW = C + W.
struct ToyLoss {
  Matrix c;
  double value(const Matrix& w) const { return (c.cwiseProduct(w)).sum() + 0.5 * w.squaredNorm(); }
  Matrix grad(const Matrix& w) const { return c + w; }
};

}  // namespace

TEST(TemperedSigmoid, ReferenceValues) {
  EXPECT_DOUBLE_EQ(tempered_sigmoid(0.01, 0.3, 0.01), 0.5);
  // 1 / (1 + exp(0.01 / 0.45)) = 0.494444673056840364 (30-digit evaluation)
  EXPECT_NEAR(tempered_sigmoid(0.0, 0.45, 0.01), 0.494444673056840364, 1e-15);
  EXPECT_NEAR(tempered_sigmoid(0.0, 0.45, 0.01), 0.494445, 5e-7);
  EXPECT_NEAR(tempered_sigmoid(0.01 + 10 * 0.2, 0.2, 0.01), 0.9999546, 5e-8);
}

TEST(TemperedSigmoid, ExtremeArgumentsSaturate) {
  const double hi = tempered_sigmoid(1e4, 1.0, 1e-3);
  const double lo = tempered_sigmoid(-1e4, 1.0, 1e-3);
  EXPECT_TRUE(std::isfinite(hi));
  EXPECT_EQ(hi, 1.0);
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(lo, 1e-300);
  EXPECT_EQ(logistic(-800.0), 0.0);
  EXPECT_EQ(logistic(800.0), 1.0);
}

TEST(TemperedSigmoid, RejectsBadConfig) {
  EXPECT_THROW(tempered_sigmoid(0.0, 0.0, 0.01), std::invalid_argument);
  EXPECT_THROW(tempered_sigmoid(0.0, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(tempered_sigmoid(0.0, -1.0, 0.01), std::invalid_argument);
  EXPECT_THROW((OrientationConfig{0.01, std::nan("")}.validate()), std::invalid_argument);
}

TEST(HardOrientation, FigurePriorities) {
  const auto t = hard_orientation(figure_priorities(), 0.01);
  // 1-based arcs 4->{1,2,3,5}, 5->{1,2,3}, 3->{1,2}, 2->1.
  BinaryAdjacency expected = BinaryAdjacency::Constant(5, 5, false);
  for (int v : {0, 1, 2, 4}) expected(3, v) = true;
  for (int v : {0, 1, 2}) expected(4, v) = true;
  for (int v : {0, 1}) expected(2, v) = true;
  expected(1, 0) = true;
  EXPECT_EQ(t, expected);
}

TEST(HardOrientation, ConstantPrioritiesGiveEmptyGraph) {
  EXPECT_EQ(hard_orientation(PriorityVector::Constant(6, 1.5), 0.01).count(), 0);
}

TEST(HardOrientation, PermutationConstructionIsTransitiveTournament) {
  Rng rng(1);
  const double eps = 1.0 / 64.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng.below(30);
    const auto perm = rng.permutation(d);
    PriorityVector p(d);
    // A power of two keeps every difference exact.
    for (std::size_t i = 0; i < d; ++i) p(perm[i]) = eps * static_cast<double>(i);
    const auto t = hard_orientation(p, eps);
    EXPECT_EQ(static_cast<std::size_t>(t.count()), d * (d - 1) / 2);
    EXPECT_TRUE(is_dag(t));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) EXPECT_TRUE(t(perm[i], perm[j]));
    }
  }
}

TEST(HardOrientation, AlwaysAcyclic) {
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + rng.below(100);
    const double eps = std::exp(rng.uniform(std::log(1e-4), std::log(1.0)));
    PriorityVector p(d);
    // Coarse grid so many pairs sit exactly on the boundary.
    for (std::size_t i = 0; i < d; ++i) p(i) = eps * static_cast<double>(rng.below(6));
    EXPECT_FALSE(oracle::has_cycle(hard_orientation(p, eps)));
  }
}

TEST(SmoothOrientation, DiagonalAndZeroDifferences) {
  const OrientationConfig cfg{0.02, 0.3};
  const Matrix s = smooth_orientation(PriorityVector::Zero(2), cfg);
  const double alpha = diagonal_value(cfg);
  EXPECT_DOUBLE_EQ(alpha, 1.0 / (1.0 + std::exp(0.02 / 0.3)));
  EXPECT_TRUE((s.array() == alpha).all());
}

TEST(SmoothOrientation, PairSumBelowOne) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const OrientationConfig cfg{rng.uniform(1e-3, 0.1), rng.uniform(1e-2, 1.0)};
    const std::size_t d = 2 + rng.below(10);
    const PriorityVector p = oracle::random_matrix(d, 1, rng, 0.5);
    const Matrix s = smooth_orientation(p, cfg);
    const double alpha = diagonal_value(cfg);
    EXPECT_LT(2 * alpha, 1.0);
    for (Eigen::Index u = 0; u < s.rows(); ++u) {
      for (Eigen::Index v = 0; v < s.cols(); ++v) {
        // 1 - S(u,v) - S(v,u) = sig((x + eps)/t) - sig((x - eps)/t) > 0, x = p(v) - p(u).
        const long double x = p(v) - p(u), e = cfg.eps, t = cfg.temperature;
        const long double gap = 1 / (1 + std::exp(-(x + e) / t)) - 1 / (1 + std::exp(-(x - e) / t));
        EXPECT_LE(s(u, v) + s(v, u), 1.0);
        EXPECT_NEAR(1.0 - (s(u, v) + s(v, u)), static_cast<double>(gap), 1e-14);
        EXPECT_LE(s(u, v) * s(v, u), alpha * alpha * (1 + 1e-12));
      }
    }
  }
}

TEST(SmoothOrientation, LowTemperatureMatchesHardOrientation) {
  const OrientationConfig cfg{0.01, 1e-6};
  const auto p = figure_priorities();
  const Matrix s = smooth_orientation(p, cfg);
  const auto t = hard_orientation(p, cfg.eps);
  EXPECT_EQ(BinaryAdjacency(s.array() > 0.5), t);
  for (Eigen::Index u = 0; u < 5; ++u) {
    for (Eigen::Index v = 0; v < 5; ++v) {
      if (std::abs(p(v) - p(u) - cfg.eps) > 1e-4) {
        EXPECT_LT(std::abs(s(u, v) - (t(u, v) ? 1.0 : 0.0)), 1e-3);
      }
    }
  }
}

TEST(Compose, BasicCases) {
  const OrientationConfig cfg{0.01, 0.45};
  const Matrix s = smooth_orientation(PriorityVector::Constant(3, 2.0), cfg);
  EXPECT_TRUE(compose(Matrix::Ones(3, 3), s).isApprox(Matrix::Constant(3, 3, diagonal_value(cfg))));
  EXPECT_TRUE(compose(Matrix::Zero(3, 3), s).isZero(0.0));
  EXPECT_THROW(compose(Matrix::Zero(2, 2), s), std::invalid_argument);
}

TEST(Compose, ThresholdedLowTemperatureIsAcyclic) {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + rng.below(20);
    const OrientationConfig cfg{rng.uniform(5e-3, 2e-2), 1e-6};
    const Matrix h = oracle::random_matrix(d, d, rng, 2.0);
    const PriorityVector p = oracle::random_matrix(d, 1, rng, 0.05);
    const Matrix w = compose(h, smooth_orientation(p, cfg));
    const double omega = diagonal_value(cfg) * h.cwiseAbs().maxCoeff() + 1e-12;
    EXPECT_FALSE(oracle::has_cycle(threshold(w, omega)));
  }
}

TEST(PriorityGradient, ZeroDirectMatrix) {
  const OrientationConfig cfg{0.01, 0.3};
  Rng rng(8);
  const PriorityVector p = oracle::random_matrix(4, 1, rng);
  const Vector g = priority_gradient(Matrix::Zero(4, 4), p, cfg, oracle::random_matrix(4, 4, rng));
  EXPECT_TRUE(g.isZero(0.0));
}

TEST(PriorityGradient, MatchesFiniteDifferences) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.below(6);
    const double t = std::array{0.45, 0.3, 0.1, 0.01}[trial % 4];
    const OrientationConfig cfg{rng.uniform(5e-3, 2e-2), t};
    const Matrix h = oracle::random_matrix(d, d, rng);
    PriorityVector p = oracle::random_matrix(d, 1, rng, 2.0 * t);
    const ToyLoss loss{oracle::random_matrix(d, d, rng)};
    const Matrix w = compose(h, smooth_orientation(p, cfg));
    const Vector g = priority_gradient(h, p, cfg, loss.grad(w));
    const Matrix gh = direct_gradient(smooth_orientation(p, cfg), loss.grad(w));
    for (Eigen::Index u = 0; u < p.size(); ++u) {
      const double fd = oracle::central_difference(
          [&] { return loss.value(compose(h, smooth_orientation(p, cfg))); }, p(u), 1e-6 * t);
      EXPECT_TRUE(oracle::close(g(u), fd, 1e-5, 1e-8)) << "p[" << u << "] t=" << t << " " << g(u) << " vs " << fd;
    }
    Matrix hh = h;
    for (Eigen::Index i = 0; i < hh.size(); ++i) {
      const double fd = oracle::central_difference(
          [&] { return loss.value(compose(hh, smooth_orientation(p, cfg))); }, hh.data()[i], 1e-6);
      EXPECT_TRUE(oracle::close(gh.data()[i], fd, 1e-6, 1e-8));
    }
  }
}

TEST(PriorityGradient, VanishesWhenSaturated) {
  const OrientationConfig cfg{0.01, 1e-4};
  PriorityVector p(4);
  p << 0.0, 0.1, 0.2, 0.3;  // all |dp - eps| >= 10 t
  Rng rng(10);
  const Vector g = priority_gradient(oracle::random_matrix(4, 4, rng), p, cfg, oracle::random_matrix(4, 4, rng));
  EXPECT_LT(g.norm(), 1e-30);
}

TEST(AcyclicityBound, ReferenceValue) {
  const OrientationConfig cfg{0.01, 0.45};
  EXPECT_NEAR(diagonal_value(cfg), 0.494444673056840364, 1e-15);
  // exp(3 * 0.494444673...) - 1 = 3.40761628848795334 (30-digit evaluation)
  EXPECT_NEAR(acyclicity_upper_bound(cfg, 3), 3.40761628848795334, 1e-13);
}

TEST(AcyclicityBound, VanishesAsShiftOverTemperatureGrows) {
  EXPECT_LT(acyclicity_upper_bound({1.0, 1e-3}, 50), 1e-300);
}

TEST(AcyclicityBound, NondecreasingInTemperature) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const double eps = rng.uniform(1e-3, 0.05);
    const std::size_t d = 1 + rng.below(50);
    double prev = 0.0;
    for (double t = 1e-4; t < 2.0; t *= 1.3) {
      const double b = acyclicity_upper_bound({eps, t}, d);
      EXPECT_GE(b, prev);
      prev = b;
    }
  }
}

TEST(AcyclicityBound, HoldsForRandomPriorities) {
  Rng rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + rng.below(20);
    const OrientationConfig cfg{rng.uniform(5e-3, 2e-2), rng.uniform(5e-4, 1.0)};
    const PriorityVector p = oracle::random_matrix(d, 1, rng, rng.uniform(1e-3, 1.0));
    const Matrix s = smooth_orientation(p, cfg);
    EXPECT_LE(notears_h(s), acyclicity_upper_bound(cfg, d) + 1e-9);
  }
}

TEST(CycleProduct, BoundedByAlphaPower) {
  Rng rng(14);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = 2 + rng.below(10);
    const OrientationConfig cfg{rng.uniform(5e-3, 2e-2), rng.uniform(5e-4, 1.0)};
    const PriorityVector p = oracle::random_matrix(d, 1, rng, rng.uniform(1e-3, 0.5));
    const Matrix s = smooth_orientation(p, cfg);
    const std::size_t len = 1 + rng.below(std::min<std::size_t>(6, d));
    auto nodes = rng.permutation(d);
    nodes.resize(len);
    double product = 1.0;
    for (std::size_t i = 0; i < len; ++i) product *= s(nodes[i], nodes[(i + 1) % len]);
    EXPECT_LE(product, std::pow(diagonal_value(cfg), static_cast<double>(len)) * (1 + 1e-12));
  }
}

TEST(InitPriorities, DifferenceVarianceIsEpsSquared) {
  Rng rng(15);
  const double eps = 0.02;
  const auto p = init_priorities(20000, eps, rng);
  const double mean = p.mean();
  const double var = (p.array() - mean).square().sum() / static_cast<double>(p.size() - 1);
  // Var(p) = eps^2 / 2; sample variance has relative sd sqrt(2/n) = 1%.
  EXPECT_NEAR(var / (eps * eps / 2), 1.0, 0.05);
  EXPECT_NEAR(mean, 0.0, 5 * eps / std::sqrt(2.0 * 20000));
}
