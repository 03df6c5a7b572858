#pragma once

#include "cosmo/graph.hpp"
#include "cosmo/rng.hpp"

namespace cosmo {

/// Node priorities. Node u may feed node v only if p(v) - p(u) >= eps.
using PriorityVector = Eigen::VectorXd;

/// Sigmoid shift `eps` and temperature `temperature`, both strictly positive.
struct OrientationConfig {
  double eps = 1.25e-2;
  double temperature = 0.45;

  /// Throws std::invalid_argument unless both values are positive and finite.
  void validate() const;
};

/// Plain logistic function, evaluated in the overflow-free branch form.
double logistic(double x);

/// 1 / (1 + exp(-(x - eps) / t)).
double tempered_sigmoid(double x, double t, double eps);

/// sigma(-eps / t): the diagonal of every smooth orientation and the base of
/// the acyclicity bound.
double diagonal_value(const OrientationConfig& cfg);

/// T(u, v) = [p(v) - p(u) >= eps]. Always acyclic.
BinaryAdjacency hard_orientation(const PriorityVector& p, double eps);

/// S(u, v) = tempered_sigmoid(p(v) - p(u)). Entries lie in (0, 1) and the
/// diagonal equals diagonal_value(cfg).
Matrix smooth_orientation(const PriorityVector& p, const OrientationConfig& cfg);

/// Elementwise product H o S. Throws on shape mismatch.
WeightedAdjacency compose(const WeightedAdjacency& direct, const Matrix& orientation);

/// Gradient of a loss with respect to p, given its gradient with respect to
/// the orientation matrix S (which must be smooth_orientation(p, cfg)).
///
/// With G(u, v) = dL/dS(u, v) * S(u, v) * (1 - S(u, v)) / t, the result is
/// dL/dp(u) = sum_v G(v, u) - G(u, v).
Vector priority_gradient_from_orientation(const Matrix& orientation,
                                          const OrientationConfig& cfg,
                                          const Matrix& d_orientation);

/// dL/dp for W = H o S(p), given dL/dW.
Vector priority_gradient(const WeightedAdjacency& direct, const PriorityVector& p,
                         const OrientationConfig& cfg, const Matrix& d_weights);

/// dL/dH for W = H o S(p), given dL/dW.
Matrix direct_gradient(const Matrix& orientation, const Matrix& d_weights);

/// exp(d * alpha) - 1 with alpha = sigma(-eps / t). Upper bound on
/// tr(exp(S)) - d for every smooth orientation S of d nodes.
double acyclicity_upper_bound(const OrientationConfig& cfg, std::size_t d);

/// Initial priorities drawn i.i.d. from N(0, eps^2 / 2), so that pairwise
/// differences are N(0, eps^2).
PriorityVector init_priorities(std::size_t d, double eps, Rng& rng);

}  // namespace cosmo
