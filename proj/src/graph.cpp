#include "cosmo/graph.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

namespace cosmo {

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

}  // namespace

std::variant<TopologicalOrder, CycleReport> topological_order(const BinaryAdjacency& adj) {
  require_square(adj.rows(), adj.cols(), "topological_order");
  const auto d = static_cast<std::size_t>(adj.rows());

  std::vector<std::size_t> in_degree(d, 0);
  for (std::size_t u = 0; u < d; ++u) {
    for (std::size_t v = 0; v < d; ++v) {
      if (adj(u, v)) ++in_degree[v];
    }
  }

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < d; ++v) {
    if (in_degree[v] == 0) ready.push(v);
  }

  TopologicalOrder order;
  order.reserve(d);
  while (!ready.empty()) {
    const std::size_t u = ready.top();
    ready.pop();
    order.push_back(u);
    for (std::size_t v = 0; v < d; ++v) {
      if (adj(u, v) && --in_degree[v] == 0) ready.push(v);
    }
  }

  if (order.size() == d) return order;

  CycleReport report;
  for (std::size_t v = 0; v < d; ++v) {
    if (in_degree[v] > 0) report.remaining.push_back(v);
  }
  return report;
}

bool is_dag(const BinaryAdjacency& adj) {
  return std::holds_alternative<TopologicalOrder>(topological_order(adj));
}

double trace_exp_minus_dim(const Matrix& m) {
  require_square(m.rows(), m.cols(), "trace_exp_minus_dim");
  if (!m.allFinite()) {
    throw std::invalid_argument("trace_exp_minus_dim: non-finite entries");
  }
  const Eigen::Index d = m.rows();
  if (d == 0) return 0.0;

  // Scale so the infinity norm is at most 1/2, then square back up.
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Matrix a = m / std::ldexp(1.0, squarings);

  // exp(A) - I, accumulated separately from the identity so nilpotent inputs
  // give an exact zero trace rather than a cancellation residue.
  Matrix term = a;
  Matrix excess = a;
  for (int k = 2; k < 200; ++k) {
    term = (term * a) / static_cast<double>(k);
    excess += term;
    const double term_norm = term.cwiseAbs().maxCoeff();
    if (term_norm <= 1e-14 * std::max(1.0, excess.cwiseAbs().maxCoeff())) break;
  }
  // (I + E)^2 - I = 2E + E^2
  for (int s = 0; s < squarings; ++s) {
    excess = 2.0 * excess + excess * excess;
  }
  return excess.trace();
}

double notears_h(const WeightedAdjacency& w) {
  return trace_exp_minus_dim(w.cwiseProduct(w));
}

BinaryAdjacency threshold(const WeightedAdjacency& w, double omega) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("threshold: omega must be positive");
  }
  return (w.array().abs() > omega).matrix();
}

BinaryAdjacency support(const WeightedAdjacency& w) {
  return (w.array() != 0.0).matrix();
}

}  // namespace cosmo
