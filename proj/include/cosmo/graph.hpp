#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <variant>
#include <vector>

namespace cosmo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense arc weights: W(u, v) is the weight of arc u -> v, zero when absent.
using WeightedAdjacency = Eigen::MatrixXd;

/// Dense arc indicator: A(u, v) is true iff arc u -> v is present.
using BinaryAdjacency = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Nodes that could not be peeled because every one of them lies on, or
/// downstream of, a directed cycle.
struct CycleReport {
  std::vector<std::size_t> remaining;
};

/// A topological order of the nodes (position i holds the i-th node).
using TopologicalOrder = std::vector<std::size_t>;

bool is_dag(const BinaryAdjacency& adj);

/// Kahn peeling. Ties are broken by smallest node index, so the result is
/// deterministic.
std::variant<TopologicalOrder, CycleReport> topological_order(const BinaryAdjacency& adj);

/// tr(exp(M)) - d for a square matrix, via scaling-and-squaring around an
/// adaptive Taylor series (terms are summed until their max-norm drops
/// below 1e-14 relative to the running sum). Throws std::invalid_argument on
/// non-finite input.
double trace_exp_minus_dim(const Matrix& m);

/// The acyclicity functional tr(exp(W o W)) - d. Zero iff W is acyclic.
double notears_h(const WeightedAdjacency& w);

/// A(u, v) = |W(u, v)| > omega. Throws if omega <= 0.
BinaryAdjacency threshold(const WeightedAdjacency& w, double omega);

/// Support of W (nonzero entries).
BinaryAdjacency support(const WeightedAdjacency& w);

}  // namespace cosmo
