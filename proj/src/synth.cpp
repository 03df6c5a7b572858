#include "cosmo/synth.hpp"

#include "cosmo/orientation.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <variant>

namespace cosmo {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

TopologicalOrder require_order(const BinaryAdjacency& adj, const char* what) {
  auto result = topological_order(adj);
  if (auto* order = std::get_if<TopologicalOrder>(&result)) return std::move(*order);
  throw std::invalid_argument(std::string(what) + ": graph is cyclic");
}

std::vector<Eigen::Index> parents_of(const BinaryAdjacency& adj, Eigen::Index v) {
  std::vector<Eigen::Index> parents;
  for (Eigen::Index u = 0; u < adj.rows(); ++u) {
    if (adj(u, v)) parents.push_back(u);
  }
  return parents;
}

BinaryAdjacency permute_labels(const BinaryAdjacency& adj, const std::vector<std::size_t>& perm) {
  const auto d = adj.rows();
  BinaryAdjacency out = BinaryAdjacency::Constant(d, d, false);
  for (Eigen::Index u = 0; u < d; ++u) {
    for (Eigen::Index v = 0; v < d; ++v) {
      if (adj(u, v)) out(static_cast<Eigen::Index>(perm[u]), static_cast<Eigen::Index>(perm[v])) = true;
    }
  }
  return out;
}

BinaryAdjacency erdos_renyi(std::size_t d, std::size_t k, Rng& rng) {
  const auto dd = static_cast<Eigen::Index>(d);
  BinaryAdjacency adj = BinaryAdjacency::Constant(dd, dd, false);
  if (d < 2 || k == 0) return adj;
  const double pairs = 0.5 * static_cast<double>(d) * static_cast<double>(d - 1);
  const double keep = static_cast<double>(k * d) / pairs;
  const auto order = rng.permutation(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (rng.uniform() < keep) {
        adj(static_cast<Eigen::Index>(order[i]), static_cast<Eigen::Index>(order[j])) = true;
      }
    }
  }
  return adj;
}

BinaryAdjacency barabasi_albert(std::size_t d, std::size_t k, Rng& rng) {
  const auto dd = static_cast<Eigen::Index>(d);
  BinaryAdjacency grown = BinaryAdjacency::Constant(dd, dd, false);
  if (d < 2 || k == 0) return grown;

  std::vector<double> attractiveness(d, 1.0);  // in-degree + 1
  std::vector<std::size_t> targets;
  for (std::size_t node = 1; node < d; ++node) {
    const std::size_t wanted = std::min(k, node);
    targets.clear();
    double pool = 0.0;
    for (std::size_t j = 0; j < node; ++j) pool += attractiveness[j];
    while (targets.size() < wanted) {
      double r = rng.uniform() * pool;
      std::size_t pick = node;  // sentinel
      for (std::size_t j = 0; j < node; ++j) {
        if (std::find(targets.begin(), targets.end(), j) != targets.end()) continue;
        r -= attractiveness[j];
        pick = j;
        if (r < 0.0) break;
      }
      targets.push_back(pick);
      pool -= attractiveness[pick];
    }
    for (std::size_t target : targets) {
      grown(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(target)) = true;
      attractiveness[target] += 1.0;
    }
  }
  return permute_labels(grown, rng.permutation(d));
}

}  // namespace

std::string to_string(GraphKind kind) {
  return kind == GraphKind::ErdosRenyi ? "ER" : "SF";
}

std::string to_string(NoiseFamily noise) {
  switch (noise) {
    case NoiseFamily::Gaussian: return "gauss";
    case NoiseFamily::Exponential: return "exp";
    case NoiseFamily::Gumbel: return "gumbel";
  }
  return "gauss";
}

std::string to_string(SemKind sem) { return sem == SemKind::Linear ? "linear" : "mlp"; }

GraphKind parse_graph_kind(std::string_view text) {
  const auto s = lower(text);
  if (s == "er" || s == "erdos-renyi") return GraphKind::ErdosRenyi;
  if (s == "sf" || s == "scale-free" || s == "ba") return GraphKind::ScaleFree;
  throw std::invalid_argument("unknown graph kind: " + std::string(text));
}

NoiseFamily parse_noise_family(std::string_view text) {
  const auto s = lower(text);
  if (s == "gauss" || s == "gaussian" || s == "normal") return NoiseFamily::Gaussian;
  if (s == "exp" || s == "exponential") return NoiseFamily::Exponential;
  if (s == "gumbel") return NoiseFamily::Gumbel;
  throw std::invalid_argument("unknown noise family: " + std::string(text));
}

SemKind parse_sem_kind(std::string_view text) {
  const auto s = lower(text);
  if (s == "linear") return SemKind::Linear;
  if (s == "mlp" || s == "nonlinear") return SemKind::Mlp;
  throw std::invalid_argument("unknown SEM kind: " + std::string(text));
}

BinaryAdjacency random_dag(const GraphSpec& spec) {
  const double max_arcs = 0.5 * static_cast<double>(spec.d) *
                          (spec.d > 0 ? static_cast<double>(spec.d - 1) : 0.0);
  if (static_cast<double>(spec.edge_factor * spec.d) > max_arcs) {
    throw std::invalid_argument("random_dag: k*d exceeds d(d-1)/2");
  }
  Rng rng(spec.seed);
  return spec.kind == GraphKind::ErdosRenyi ? erdos_renyi(spec.d, spec.edge_factor, rng)
                                            : barabasi_albert(spec.d, spec.edge_factor, rng);
}

WeightedAdjacency random_weights(const BinaryAdjacency& adj, std::uint64_t seed) {
  Rng rng(seed);
  WeightedAdjacency w = WeightedAdjacency::Zero(adj.rows(), adj.cols());
  for (Eigen::Index u = 0; u < adj.rows(); ++u) {
    for (Eigen::Index v = 0; v < adj.cols(); ++v) {
      if (!adj(u, v)) continue;
      const double magnitude = rng.uniform(0.5, 2.0);
      w(u, v) = rng.coin() ? -magnitude : magnitude;
    }
  }
  return w;
}

double draw_noise(NoiseFamily noise, Rng& rng) {
  switch (noise) {
    case NoiseFamily::Gaussian: return rng.normal();
    case NoiseFamily::Exponential: return rng.exponential();
    case NoiseFamily::Gumbel: return rng.gumbel();
  }
  return rng.normal();
}

Matrix sample_linear_sem(const WeightedAdjacency& w, NoiseFamily noise, std::size_t n,
                         std::uint64_t seed) {
  if (w.rows() != w.cols()) throw std::invalid_argument("sample_linear_sem: W must be square");
  if (!w.allFinite()) throw std::invalid_argument("sample_linear_sem: non-finite weights");
  const BinaryAdjacency adj = support(w);
  const auto order = require_order(adj, "sample_linear_sem");
  Rng rng(seed);
  const auto rows = static_cast<Eigen::Index>(n);
  Matrix x = Matrix::Zero(rows, w.rows());
  for (std::size_t node : order) {
    const auto v = static_cast<Eigen::Index>(node);
    for (Eigen::Index r = 0; r < rows; ++r) x(r, v) = draw_noise(noise, rng);
    for (Eigen::Index u : parents_of(adj, v)) x.col(v) += w(u, v) * x.col(u);
  }
  return x;
}

std::vector<MlpMechanism> random_mlp_mechanisms(const BinaryAdjacency& adj, std::size_t hidden,
                                                Rng& rng) {
  const auto h = static_cast<Eigen::Index>(hidden);
  auto signed_uniform = [&rng] {
    const double magnitude = rng.uniform(0.5, 2.0);
    return rng.coin() ? -magnitude : magnitude;
  };
  std::vector<MlpMechanism> mechanisms(static_cast<std::size_t>(adj.cols()));
  for (Eigen::Index v = 0; v < adj.cols(); ++v) {
    const auto parents = parents_of(adj, v);
    if (parents.empty()) continue;
    auto& mech = mechanisms[static_cast<std::size_t>(v)];
    mech.input_weights.resize(static_cast<Eigen::Index>(parents.size()), h);
    for (Eigen::Index i = 0; i < mech.input_weights.rows(); ++i) {
      for (Eigen::Index j = 0; j < h; ++j) mech.input_weights(i, j) = signed_uniform();
    }
    mech.output_weights.resize(h);
    for (Eigen::Index j = 0; j < h; ++j) mech.output_weights(j) = signed_uniform();
  }
  return mechanisms;
}

Matrix sample_mlp_sem(const BinaryAdjacency& adj, const std::vector<MlpMechanism>& mechanisms,
                      std::size_t n, Rng& rng) {
  if (adj.rows() != adj.cols()) throw std::invalid_argument("sample_mlp_sem: A must be square");
  if (mechanisms.size() != static_cast<std::size_t>(adj.cols())) {
    throw std::invalid_argument("sample_mlp_sem: one mechanism per node required");
  }
  const auto order = require_order(adj, "sample_mlp_sem");
  const auto rows = static_cast<Eigen::Index>(n);
  Matrix x = Matrix::Zero(rows, adj.cols());
  for (std::size_t node : order) {
    const auto v = static_cast<Eigen::Index>(node);
    for (Eigen::Index r = 0; r < rows; ++r) x(r, v) = rng.normal();
    const auto parents = parents_of(adj, v);
    if (parents.empty()) continue;
    const auto& mech = mechanisms[node];
    if (mech.input_weights.rows() != static_cast<Eigen::Index>(parents.size()) ||
        mech.input_weights.cols() != mech.output_weights.size()) {
      throw std::invalid_argument("sample_mlp_sem: mechanism shape does not match parents");
    }
    Matrix inputs(rows, static_cast<Eigen::Index>(parents.size()));
    for (std::size_t i = 0; i < parents.size(); ++i) {
      inputs.col(static_cast<Eigen::Index>(i)) = x.col(parents[i]);
    }
    const Matrix hidden = (inputs * mech.input_weights).unaryExpr([](double a) { return logistic(a); });
    x.col(v) += hidden * mech.output_weights;
  }
  return x;
}

Matrix sample_mlp_sem(const BinaryAdjacency& adj, std::size_t hidden, std::size_t n,
                      std::uint64_t seed) {
  Rng rng(seed);
  const auto mechanisms = random_mlp_mechanisms(adj, hidden, rng);
  return sample_mlp_sem(adj, mechanisms, n, rng);
}

Dataset generate_dataset(DatasetSpec spec) {
  spec.graph.seed = mix_seed(spec.seed, 0);
  const BinaryAdjacency adj = random_dag(spec.graph);
  Dataset data;
  if (spec.sem == SemKind::Linear) {
    data.w_true = random_weights(adj, mix_seed(spec.seed, 1));
    data.x = sample_linear_sem(data.w_true, spec.noise, spec.n, mix_seed(spec.seed, 2));
  } else {
    data.w_true = adj.cast<double>();
    data.x = sample_mlp_sem(adj, spec.hidden, spec.n, mix_seed(spec.seed, 2));
  }
  data.spec = spec;
  return data;
}

}  // namespace cosmo
