#pragma once

#include "cosmo/metrics.hpp"
#include "cosmo/synth.hpp"
#include "cosmo/trainer.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cosmo {

/// Everything needed to reproduce one experiment. Serialized as a flat JSON
/// object (see docs/formats.md); keys mirror the CLI flag names.
struct RunConfig {
  GraphKind graph = GraphKind::ErdosRenyi;
  std::size_t d = 30;
  std::size_t k = 4;
  NoiseFamily noise = NoiseFamily::Gaussian;
  SemKind sem = SemKind::Linear;
  std::size_t n = 1000;
  std::size_t data_hidden = 100;
  ModelKind model = ModelKind::CosmoLinear;
  TrainConfig train;          // train.seed is replaced per run seed
  AnnealSchedule schedule;    // schedule.epochs mirrors train.epochs
  double omega = 0.3;
  std::vector<std::uint64_t> seeds{0};
  std::string out = "runs";
  std::size_t jobs = 1;
  /// Dataset stem to load instead of generating; empty means generate.
  std::string data;

  /// Throws std::invalid_argument on any invalid field.
  void validate() const;
};

nlohmann::ordered_json to_json(const RunConfig& cfg);
/// Missing keys keep the values already in `base`; unknown keys are an error.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

struct SeedOutcome {
  std::uint64_t seed = 0;
  EvalReport report;
  double train_seconds = 0.0;  // millisecond resolution
};

struct ExperimentSummary {
  std::vector<SeedOutcome> runs;
  std::filesystem::path aggregate_csv;
};

/// Sample mean and standard deviation (n - 1 denominator; zero for one value).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(const std::vector<double>& values);

/// One row per configuration in aggregate.csv.
std::string aggregate_csv_header();
std::string aggregate_csv_row(const RunConfig& cfg, const std::vector<SeedOutcome>& runs);

/// Trains and scores one seed. Deterministic except for train_seconds.
SeedOutcome run_seed(const RunConfig& cfg, std::uint64_t seed, TrainResult* result = nullptr);

/// For each seed: generate (or load) data, train, evaluate at omega, write
/// `seed_<s>.json` and `history_seed_<s>.csv`; then write `aggregate.csv`.
/// Seeds run on up to cfg.jobs worker threads. Throws std::runtime_error on
/// I/O failure and std::invalid_argument on an invalid configuration.
ExperimentSummary run_experiment(const RunConfig& cfg);

/// Per-seed result document as written to seed_<s>.json.
nlohmann::ordered_json seed_document(const RunConfig& cfg, std::uint64_t seed,
                                     const EvalReport& report, const WeightedAdjacency& learned);

struct BenchRow {
  std::size_t d = 0;
  double mean_epoch_ms = 0.0;
  double std_epoch_ms = 0.0;
};

/// Times the epoch loop for each d on an in-memory dataset generated from
/// `base` (data generation and evaluation excluded). Each repetition runs
/// base.train.epochs epochs. Throws std::invalid_argument when
/// repetitions == 0 or some d < 2.
std::vector<BenchRow> bench_epoch_time(const std::vector<std::size_t>& dims, const RunConfig& base,
                                       std::size_t repetitions);

void write_history_csv(const std::vector<HistoryRow>& history, const std::filesystem::path& path);

/// Default output root: $COSMO_OUT_DIR, else "runs".
std::string default_output_root();

}  // namespace cosmo
