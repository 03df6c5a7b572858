#pragma once

#include "cosmo/linear_model.hpp"

namespace cosmo {

/// Per-variable two-layer networks whose first-layer weights are masked by
/// the smooth orientation.
///
/// The first-layer tensor H (d x d x h) is stored flattened as a d x (d*h)
/// matrix: `first_layer(u, v*h + i)` is the weight from input variable u into
/// hidden unit i of the network predicting variable v. Masking scales that
/// weight by S(u, v), i.e. the orientation is broadcast over hidden units.
struct NonlinearParams {
  std::size_t hidden = 10;
  Matrix first_layer;     // d x (d*h)
  Vector hidden_bias;     // d*h
  Vector output_weights;  // d*h
  Vector output_bias;     // d
  PriorityVector priority;
  OrientationConfig cfg;

  std::size_t dim() const { return static_cast<std::size_t>(priority.size()); }
};

struct NonlinearGrads {
  double loss = 0.0;
  Matrix d_first_layer;
  Vector d_hidden_bias;
  Vector d_output_weights;
  Vector d_output_bias;
  Matrix d_mask;  // dL/d(mask), d x d
  Vector d_priority;
};

/// First layer i.i.d. N(0, 0.01) with self-inputs zeroed, output weights
/// uniform on (-1/sqrt(h), 1/sqrt(h)), biases zero, p ~ N(0, eps^2 / 2).
NonlinearParams init_nonlinear_params(std::size_t d, std::size_t hidden,
                                      const OrientationConfig& cfg, Rng& rng);

/// Sets first_layer(v, v*h + i) = 0 for all v and i.
void pin_self_inputs(NonlinearParams& params);

/// Network outputs (B x d) under an explicit d x d mask.
Matrix nl_predict_masked(const NonlinearParams& params, const Matrix& mask, const Matrix& x_batch);

/// Network outputs under the smooth orientation S(p).
Matrix nl_predict(const NonlinearParams& params, const Matrix& x_batch);

/// Loss and gradients for a fixed mask. d_priority is left empty and the
/// priority penalty is not included.
NonlinearGrads nl_loss_and_grads_masked(const NonlinearParams& params, const Matrix& mask,
                                        const Matrix& x_batch, const RegWeights& reg);

/// Full objective 1/(2B)||X - f(X)||^2 + l1||H||_1 + l2||H||^2 + lp||p||^2
/// with gradients for every block.
NonlinearGrads nl_loss_and_grads(const NonlinearParams& params, const Matrix& x_batch,
                                 const RegWeights& reg);

/// Effective adjacency for scoring: W(u, v) = S(u, v) * ||H(u, v, :)||_2.
WeightedAdjacency nl_learned_weights(const NonlinearParams& params);

}  // namespace cosmo
