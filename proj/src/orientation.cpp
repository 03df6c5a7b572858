#include "cosmo/orientation.hpp"

#include <cmath>
#include <stdexcept>

namespace cosmo {

void OrientationConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("orientation config: eps must be positive and finite");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("orientation config: temperature must be positive and finite");
  }
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double tempered_sigmoid(double x, double t, double eps) {
  OrientationConfig{eps, t}.validate();
  return logistic((x - eps) / t);
}

double diagonal_value(const OrientationConfig& cfg) {
  cfg.validate();
  return logistic(-cfg.eps / cfg.temperature);
}

BinaryAdjacency hard_orientation(const PriorityVector& p, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("hard_orientation: eps must be positive");
  const Eigen::Index d = p.size();
  BinaryAdjacency t(d, d);
  for (Eigen::Index v = 0; v < d; ++v) {
    for (Eigen::Index u = 0; u < d; ++u) {
      t(u, v) = p(v) - p(u) >= eps;
    }
  }
  return t;
}

Matrix smooth_orientation(const PriorityVector& p, const OrientationConfig& cfg) {
  cfg.validate();
  const Eigen::Index d = p.size();
  const double inv_t = 1.0 / cfg.temperature;
  Matrix s(d, d);
  for (Eigen::Index v = 0; v < d; ++v) {
    const double shifted = p(v) - cfg.eps;
    for (Eigen::Index u = 0; u < d; ++u) {
      s(u, v) = logistic((shifted - p(u)) * inv_t);
    }
  }
  return s;
}

WeightedAdjacency compose(const WeightedAdjacency& direct, const Matrix& orientation) {
  if (direct.rows() != orientation.rows() || direct.cols() != orientation.cols()) {
    throw std::invalid_argument("compose: dimension mismatch");
  }
  return direct.cwiseProduct(orientation);
}

Vector priority_gradient_from_orientation(const Matrix& orientation,
                                          const OrientationConfig& cfg,
                                          const Matrix& d_orientation) {
  cfg.validate();
  if (orientation.rows() != d_orientation.rows() || orientation.cols() != d_orientation.cols()) {
    throw std::invalid_argument("priority_gradient: dimension mismatch");
  }
  const Matrix g = (d_orientation.array() * orientation.array() * (1.0 - orientation.array()) /
                    cfg.temperature)
                       .matrix();
  return g.colwise().sum().transpose() - g.rowwise().sum();
}

Vector priority_gradient(const WeightedAdjacency& direct, const PriorityVector& p,
                         const OrientationConfig& cfg, const Matrix& d_weights) {
  if (direct.rows() != p.size() || direct.cols() != p.size()) {
    throw std::invalid_argument("priority_gradient: H and p disagree on d");
  }
  const Matrix s = smooth_orientation(p, cfg);
  return priority_gradient_from_orientation(s, cfg, d_weights.cwiseProduct(direct));
}

Matrix direct_gradient(const Matrix& orientation, const Matrix& d_weights) {
  return d_weights.cwiseProduct(orientation);
}

double acyclicity_upper_bound(const OrientationConfig& cfg, std::size_t d) {
  return std::expm1(static_cast<double>(d) * diagonal_value(cfg));
}

PriorityVector init_priorities(std::size_t d, double eps, Rng& rng) {
  const double stddev = eps / std::sqrt(2.0);
  PriorityVector p(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = rng.normal(0.0, stddev);
  return p;
}

}  // namespace cosmo
