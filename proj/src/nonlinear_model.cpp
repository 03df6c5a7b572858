#include "cosmo/nonlinear_model.hpp"

#include <cmath>
#include <stdexcept>

namespace cosmo {

namespace {

Eigen::Index width(const NonlinearParams& params) {
  return static_cast<Eigen::Index>(params.hidden);
}

void check_shapes(const NonlinearParams& params, const Matrix& mask, const Matrix& x_batch) {
  const auto d = params.priority.size();
  const auto dh = d * width(params);
  if (params.hidden == 0) throw std::invalid_argument("nonlinear model: hidden width must be >= 1");
  if (params.first_layer.rows() != d || params.first_layer.cols() != dh ||
      params.hidden_bias.size() != dh || params.output_weights.size() != dh ||
      params.output_bias.size() != d) {
    throw std::invalid_argument("nonlinear model: parameter shapes disagree");
  }
  if (mask.rows() != d || mask.cols() != d) throw std::invalid_argument("nonlinear model: bad mask shape");
  if (x_batch.cols() != d) throw std::invalid_argument("nonlinear model: batch has wrong width");
  if (x_batch.rows() == 0) throw std::invalid_argument("nonlinear model: empty batch");
}

// Repeats column v of `mask` h times, giving the d x (d*h) broadcast mask.
Matrix broadcast_mask(const Matrix& mask, Eigen::Index h) {
  Matrix out(mask.rows(), mask.cols() * h);
  for (Eigen::Index v = 0; v < mask.cols(); ++v) {
    out.middleCols(v * h, h) = mask.col(v).replicate(1, h);
  }
  return out;
}

struct Forward {
  Matrix hidden;  // B x (d*h), post-activation
  Matrix output;  // B x d
};

Forward forward(const NonlinearParams& params, const Matrix& wide_mask, const Matrix& x_batch) {
  const Eigen::Index h = width(params);
  const Eigen::Index d = params.priority.size();
  Forward f;
  f.hidden.noalias() = x_batch * params.first_layer.cwiseProduct(wide_mask);
  f.hidden.rowwise() += params.hidden_bias.transpose();
  f.hidden = f.hidden.unaryExpr([](double a) { return logistic(a); });
  f.output.resize(x_batch.rows(), d);
  for (Eigen::Index v = 0; v < d; ++v) {
    f.output.col(v) = f.hidden.middleCols(v * h, h) * params.output_weights.segment(v * h, h);
    f.output.col(v).array() += params.output_bias(v);
  }
  return f;
}

}  // namespace

NonlinearParams init_nonlinear_params(std::size_t d, std::size_t hidden,
                                      const OrientationConfig& cfg, Rng& rng) {
  cfg.validate();
  if (hidden == 0) throw std::invalid_argument("nonlinear model: hidden width must be >= 1");
  NonlinearParams params;
  params.hidden = hidden;
  params.cfg = cfg;
  const auto dd = static_cast<Eigen::Index>(d);
  const auto dh = dd * static_cast<Eigen::Index>(hidden);
  params.first_layer.resize(dd, dh);
  for (Eigen::Index c = 0; c < dh; ++c) {
    for (Eigen::Index r = 0; r < dd; ++r) params.first_layer(r, c) = rng.normal(0.0, 0.1);
  }
  params.hidden_bias = Vector::Zero(dh);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  params.output_weights.resize(dh);
  for (Eigen::Index i = 0; i < dh; ++i) params.output_weights(i) = rng.uniform(-bound, bound);
  params.output_bias = Vector::Zero(dd);
  params.priority = init_priorities(d, cfg.eps, rng);
  pin_self_inputs(params);
  return params;
}

void pin_self_inputs(NonlinearParams& params) {
  const Eigen::Index h = width(params);
  for (Eigen::Index v = 0; v < params.first_layer.rows(); ++v) {
    params.first_layer.block(v, v * h, 1, h).setZero();
  }
}

Matrix nl_predict_masked(const NonlinearParams& params, const Matrix& mask, const Matrix& x_batch) {
  check_shapes(params, mask, x_batch);
  return forward(params, broadcast_mask(mask, width(params)), x_batch).output;
}

Matrix nl_predict(const NonlinearParams& params, const Matrix& x_batch) {
  return nl_predict_masked(params, smooth_orientation(params.priority, params.cfg), x_batch);
}

NonlinearGrads nl_loss_and_grads_masked(const NonlinearParams& params, const Matrix& mask,
                                        const Matrix& x_batch, const RegWeights& reg) {
  check_shapes(params, mask, x_batch);
  const Eigen::Index h = width(params);
  const Eigen::Index d = params.priority.size();
  const double inv_b = 1.0 / static_cast<double>(x_batch.rows());

  const Matrix wide_mask = broadcast_mask(mask, h);
  const Forward f = forward(params, wide_mask, x_batch);

  NonlinearGrads g;
  const Matrix residual = f.output - x_batch;
  g.loss = 0.5 * inv_b * residual.squaredNorm();
  const Matrix d_output = residual * inv_b;

  g.d_output_bias = d_output.colwise().sum().transpose();
  g.d_output_weights.resize(d * h);
  Matrix d_pre(x_batch.rows(), d * h);
  for (Eigen::Index v = 0; v < d; ++v) {
    const auto z = f.hidden.middleCols(v * h, h);
    g.d_output_weights.segment(v * h, h) = z.transpose() * d_output.col(v);
    // dL/dz = dL/dy * w2, then through the sigmoid: z (1 - z).
    d_pre.middleCols(v * h, h) =
        (d_output.col(v) * params.output_weights.segment(v * h, h).transpose()).array() *
        z.array() * (1.0 - z.array());
  }
  g.d_hidden_bias = d_pre.colwise().sum().transpose();

  const Matrix d_masked = x_batch.transpose() * d_pre;  // d x (d*h)
  g.d_first_layer = d_masked.cwiseProduct(wide_mask);
  const Matrix weighted = d_masked.cwiseProduct(params.first_layer);
  g.d_mask.resize(d, d);
  for (Eigen::Index v = 0; v < d; ++v) {
    g.d_mask.col(v) = weighted.middleCols(v * h, h).rowwise().sum();
  }

  g.loss += reg.l1 * params.first_layer.cwiseAbs().sum() + reg.l2 * params.first_layer.squaredNorm();
  if (reg.l1 != 0.0) {
    g.d_first_layer += reg.l1 * params.first_layer.unaryExpr(
                                    [](double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); });
  }
  if (reg.l2 != 0.0) g.d_first_layer += (2.0 * reg.l2) * params.first_layer;
  return g;
}

NonlinearGrads nl_loss_and_grads(const NonlinearParams& params, const Matrix& x_batch,
                                 const RegWeights& reg) {
  const Matrix s = smooth_orientation(params.priority, params.cfg);
  NonlinearGrads g = nl_loss_and_grads_masked(params, s, x_batch, reg);
  g.d_priority = priority_gradient_from_orientation(s, params.cfg, g.d_mask);
  g.loss += reg.lp * params.priority.squaredNorm();
  if (reg.lp != 0.0) g.d_priority += (2.0 * reg.lp) * params.priority;
  return g;
}

WeightedAdjacency nl_learned_weights(const NonlinearParams& params) {
  const Eigen::Index h = width(params);
  const Eigen::Index d = params.priority.size();
  const Matrix s = smooth_orientation(params.priority, params.cfg);
  WeightedAdjacency w(d, d);
  for (Eigen::Index v = 0; v < d; ++v) {
    w.col(v) = params.first_layer.middleCols(v * h, h).rowwise().norm();
  }
  return w.cwiseProduct(s);
}

}  // namespace cosmo
