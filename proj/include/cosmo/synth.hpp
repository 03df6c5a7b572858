#pragma once

#include "cosmo/graph.hpp"
#include "cosmo/rng.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cosmo {

enum class GraphKind { ErdosRenyi, ScaleFree };
enum class NoiseFamily { Gaussian, Exponential, Gumbel };
enum class SemKind { Linear, Mlp };

std::string to_string(GraphKind kind);
std::string to_string(NoiseFamily noise);
std::string to_string(SemKind sem);
/// Accepts "ER"/"SF", "gauss"/"exp"/"gumbel", "linear"/"mlp" (case-insensitive,
/// plus a few long-form aliases). Throws std::invalid_argument otherwise.
GraphKind parse_graph_kind(std::string_view text);
NoiseFamily parse_noise_family(std::string_view text);
SemKind parse_sem_kind(std::string_view text);

/// ER-k / SF-k graph on d nodes with roughly k * d arcs.
struct GraphSpec {
  std::size_t d = 0;
  GraphKind kind = GraphKind::ErdosRenyi;
  std::size_t edge_factor = 0;
  std::uint64_t seed = 0;
};

/// ER: each of the d(d-1)/2 node pairs is kept independently with probability
/// k*d / (d(d-1)/2), then oriented along a uniformly random node permutation.
///
/// SF: Barabasi-Albert growth. Node i attaches to min(k, i) distinct earlier
/// nodes chosen with probability proportional to (in-degree + 1); arcs point
/// from the new node to the earlier one. Labels are then randomly permuted.
/// The arc count is exactly k(d - k) + k(k - 1)/2 when d > k.
///
/// Throws std::invalid_argument when k*d > d(d-1)/2.
BinaryAdjacency random_dag(const GraphSpec& spec);

/// Each arc gets a weight uniform on (-2, -0.5) U (0.5, 2).
WeightedAdjacency random_weights(const BinaryAdjacency& adj, std::uint64_t seed);

/// One draw from the given family: N(0, 1), Exp(1) or Gumbel(0, 1).
double draw_noise(NoiseFamily noise, Rng& rng);

/// n x d observations of x_v = sum_u W(u, v) x_u + z_v, simulated forward in
/// topological order. Throws std::invalid_argument if W is cyclic.
Matrix sample_linear_sem(const WeightedAdjacency& w, NoiseFamily noise, std::size_t n,
                         std::uint64_t seed);

/// Single-hidden-layer generator network of one variable:
/// g(x_pa) = sigmoid(x_pa * input_weights) * output_weights.
struct MlpMechanism {
  Matrix input_weights;   // |pa| x hidden
  Vector output_weights;  // hidden
};

/// Weights of both layers uniform on (0.5, 2) with a random sign. Nodes
/// without parents get an empty mechanism.
std::vector<MlpMechanism> random_mlp_mechanisms(const BinaryAdjacency& adj, std::size_t hidden,
                                                Rng& rng);

/// x_v = g_v(x_pa(v)) + z_v with z_v ~ N(0, 1); parentless nodes are pure noise.
Matrix sample_mlp_sem(const BinaryAdjacency& adj, const std::vector<MlpMechanism>& mechanisms,
                      std::size_t n, Rng& rng);

/// Draws fresh mechanisms (hidden units each) and samples n rows.
Matrix sample_mlp_sem(const BinaryAdjacency& adj, std::size_t hidden, std::size_t n,
                      std::uint64_t seed);

struct DatasetSpec {
  GraphSpec graph;
  NoiseFamily noise = NoiseFamily::Gaussian;
  SemKind sem = SemKind::Linear;
  std::size_t n = 1000;
  std::size_t hidden = 100;  // generator width, MLP only
  std::uint64_t seed = 0;
};

struct Dataset {
  DatasetSpec spec;
  Matrix x;                   // n x d
  WeightedAdjacency w_true;   // MLP datasets carry unit weights on true arcs
  BinaryAdjacency truth() const { return support(w_true); }
};

/// Generates graph, weights and samples from child seeds of spec.seed
/// (spec.graph.seed is overwritten with the derived graph seed).
Dataset generate_dataset(DatasetSpec spec);

}  // namespace cosmo
