#include "cosmo/linear_model.hpp"

#include <cmath>
#include <stdexcept>

namespace cosmo {

namespace {

void check_shapes(const Matrix& direct, const Vector& p, const Matrix& x_batch) {
  const auto d = p.size();
  if (direct.rows() != d || direct.cols() != d) {
    throw std::invalid_argument("linear model: H must be d x d with d = len(p)");
  }
  if (x_batch.cols() != d) throw std::invalid_argument("linear model: batch has wrong width");
  if (x_batch.rows() == 0) throw std::invalid_argument("linear model: empty batch");
}

Matrix sign_of(const Matrix& m) {
  return m.unaryExpr([](double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); });
}

// Data-fit part shared by both orientations: returns the loss and fills dL/dW.
double fit_loss(const Matrix& x_batch, const WeightedAdjacency& w, Matrix& d_weights) {
  const double inv_b = 1.0 / static_cast<double>(x_batch.rows());
  Matrix residual = x_batch * w;
  residual -= x_batch;
  d_weights.noalias() = x_batch.transpose() * residual;
  d_weights *= inv_b;
  return 0.5 * inv_b * residual.squaredNorm();
}

void add_regularization(const Matrix& direct, const Vector& p, const RegWeights& reg,
                        LinearGrads& out) {
  out.loss += regularization(direct, p, reg);
  if (reg.l1 != 0.0) out.d_direct += reg.l1 * sign_of(direct);
  if (reg.l2 != 0.0) out.d_direct += (2.0 * reg.l2) * direct;
  if (reg.lp != 0.0) out.d_priority += (2.0 * reg.lp) * p;
}

}  // namespace

void RegWeights::validate() const {
  if (!(l1 >= 0.0) || !(l2 >= 0.0) || !(lp >= 0.0)) {
    throw std::invalid_argument("regularization weights must be non-negative");
  }
}

CosmoParams init_linear_params(std::size_t d, const OrientationConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto dd = static_cast<Eigen::Index>(d);
  return CosmoParams{Matrix::Zero(dd, dd), init_priorities(d, cfg.eps, rng), cfg};
}

WeightedAdjacency learned_weights(const CosmoParams& params) {
  return compose(params.direct, smooth_orientation(params.priority, params.cfg));
}

Matrix predict(const CosmoParams& params, const Matrix& x_batch) {
  if (x_batch.cols() != params.priority.size()) {
    throw std::invalid_argument("predict: batch has wrong width");
  }
  return x_batch * learned_weights(params);
}

double reconstruction_loss(const Matrix& x_batch, const WeightedAdjacency& w) {
  const Matrix residual = x_batch - x_batch * w;
  return 0.5 * residual.squaredNorm() / static_cast<double>(x_batch.rows());
}

double regularization(const Matrix& direct, const Vector& priority, const RegWeights& reg) {
  return reg.l1 * direct.cwiseAbs().sum() + reg.l2 * direct.squaredNorm() +
         reg.lp * priority.squaredNorm();
}

LinearGrads loss_and_grads(const CosmoParams& params, const Matrix& x_batch, const RegWeights& reg) {
  check_shapes(params.direct, params.priority, x_batch);
  const Matrix s = smooth_orientation(params.priority, params.cfg);
  const WeightedAdjacency w = params.direct.cwiseProduct(s);

  LinearGrads out;
  Matrix d_weights;
  out.loss = fit_loss(x_batch, w, d_weights);
  out.d_direct = direct_gradient(s, d_weights);
  out.d_priority =
      priority_gradient_from_orientation(s, params.cfg, d_weights.cwiseProduct(params.direct));
  add_regularization(params.direct, params.priority, reg, out);
  return out;
}

Matrix relu_orientation(const PriorityVector& p) {
  const auto d = p.size();
  Matrix r(d, d);
  for (Eigen::Index v = 0; v < d; ++v) {
    for (Eigen::Index u = 0; u < d; ++u) r(u, v) = std::max(0.0, p(v) - p(u));
  }
  return r;
}

WeightedAdjacency nocurlu_weights(const Matrix& direct, const PriorityVector& p) {
  return compose(direct, relu_orientation(p));
}

LinearGrads nocurlu_loss_and_grads(const Matrix& direct, const PriorityVector& p,
                                   const Matrix& x_batch, const RegWeights& reg) {
  check_shapes(direct, p, x_batch);
  const Matrix r = relu_orientation(p);
  const WeightedAdjacency w = direct.cwiseProduct(r);

  LinearGrads out;
  Matrix d_weights;
  out.loss = fit_loss(x_batch, w, d_weights);
  out.d_direct = d_weights.cwiseProduct(r);

  // dW(u,v)/dp(v) = H(u,v) and dW(u,v)/dp(u) = -H(u,v) wherever p(v) > p(u).
  const Matrix active = (r.array() > 0.0).cast<double>().matrix();
  const Matrix g = d_weights.cwiseProduct(direct).cwiseProduct(active);
  out.d_priority = g.colwise().sum().transpose() - g.rowwise().sum();
  add_regularization(direct, p, reg, out);
  return out;
}

}  // namespace cosmo
