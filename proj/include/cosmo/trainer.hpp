#pragma once

#include "cosmo/linear_model.hpp"
#include "cosmo/nonlinear_model.hpp"
#include "cosmo/optimizer.hpp"

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cosmo {

enum class ModelKind { CosmoLinear, CosmoMlp, NocurlU };

std::string to_string(ModelKind model);
ModelKind parse_model_kind(std::string_view text);

/// Unconstrained ReLU-orientation baseline state.
struct NocurlParams {
  Matrix direct;
  PriorityVector priority;
};

/// H = 0 and p ~ N(0, 1).
NocurlParams init_nocurl_params(std::size_t d, Rng& rng);

struct TrainConfig {
  std::size_t batch_size = 64;
  std::size_t epochs = 2000;
  double lr = 5.5e-3;
  RegWeights reg;
  double eps = 1.25e-2;
  std::size_t hidden = 10;  // learner width, MLP only
  std::uint64_t seed = 0;
  /// Diagnostics are recorded every `history_every` epochs and always at the
  /// last epoch. Zero records only the last epoch.
  std::size_t history_every = 1;

  void validate() const;
};

struct HistoryRow {
  std::size_t epoch = 0;
  double temperature = 0.0;
  double loss = 0.0;         // mean batch objective over the epoch
  double h_value = 0.0;      // tr(exp(S)) - d of the orientation factor
  double h_bound = 0.0;      // exp(d * alpha) - 1
  double elapsed_ms = 0.0;   // fitting time so far, diagnostics excluded
  double h_weights = 0.0;    // tr(exp(W o W)) - d of the learned weights
};

using ModelParams = std::variant<CosmoParams, NonlinearParams, NocurlParams>;

struct TrainResult {
  ModelParams params;
  WeightedAdjacency weights;  // final learned adjacency used for scoring
  std::vector<HistoryRow> history;
  double train_seconds = 0.0;
};

/// Raised when the objective becomes non-finite.
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mini-batch Adam over shuffled rows with the temperature set from the
/// schedule at the start of each epoch. The diagonal of H (self-inputs for the
/// MLP) is re-pinned to zero after every step. Deterministic given tc.seed.
TrainResult train(ModelParams init, const Matrix& x, const TrainConfig& tc,
                  const AnnealSchedule& sched);

/// Initial parameters for `model` drawn from the trainer's init stream of
/// tc.seed.
ModelParams init_params(ModelKind model, std::size_t d, const TrainConfig& tc,
                        const AnnealSchedule& sched);

/// Learned adjacency of any parameter set.
WeightedAdjacency learned_adjacency(const ModelParams& params);

/// Wall time of the epoch loop alone (no diagnostics), in milliseconds per
/// epoch, for `epochs` epochs.
double time_epochs(ModelKind model, const Matrix& x, TrainConfig tc, const AnnealSchedule& sched);

}  // namespace cosmo
