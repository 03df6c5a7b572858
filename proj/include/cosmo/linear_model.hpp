#pragma once

#include "cosmo/orientation.hpp"

namespace cosmo {

/// Regularization coefficients: L1 and squared-L2 on the direct matrix H,
/// squared-L2 on the priority vector.
struct RegWeights {
  double l1 = 5.5e-4;
  double l2 = 3e-3;
  double lp = 2e-3;

  void validate() const;
};

/// Trainable state of the linear learner. The temperature inside `cfg` is
/// driven by the annealing schedule; eps stays fixed.
struct CosmoParams {
  Matrix direct;            // H, d x d, zero diagonal
  PriorityVector priority;  // p
  OrientationConfig cfg;
};

struct LinearGrads {
  double loss = 0.0;
  Matrix d_direct;
  Vector d_priority;
};

/// H = 0 and p ~ N(0, eps^2 / 2).
CosmoParams init_linear_params(std::size_t d, const OrientationConfig& cfg, Rng& rng);

/// W = H o S(p).
WeightedAdjacency learned_weights(const CosmoParams& params);

/// X_batch * W.
Matrix predict(const CosmoParams& params, const Matrix& x_batch);

/// 1/(2B) ||X - X W||_F^2 for a fixed weight matrix.
double reconstruction_loss(const Matrix& x_batch, const WeightedAdjacency& w);

/// l1 ||H||_1 + l2 ||H||_2^2 + lp ||p||_2^2.
double regularization(const Matrix& direct, const Vector& priority, const RegWeights& reg);

/// Objective value and exact gradients with respect to H and p. The L1
/// subgradient at zero is taken as zero.
LinearGrads loss_and_grads(const CosmoParams& params, const Matrix& x_batch, const RegWeights& reg);

/// Baseline orientation ReLU(p(v) - p(u)).
Matrix relu_orientation(const PriorityVector& p);

/// W = H o ReLU(p(v) - p(u)).
WeightedAdjacency nocurlu_weights(const Matrix& direct, const PriorityVector& p);

/// Same objective with the sigmoid orientation replaced by the ReLU one.
/// The ReLU derivative at zero is taken as zero.
LinearGrads nocurlu_loss_and_grads(const Matrix& direct, const PriorityVector& p,
                                   const Matrix& x_batch, const RegWeights& reg);

}  // namespace cosmo
