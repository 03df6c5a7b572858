#include "cosmo/experiment.hpp"

#include "cosmo/dataset_io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace cosmo {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

Dataset dataset_for(const RunConfig& cfg, std::uint64_t seed) {
  if (!cfg.data.empty()) return read_dataset(cfg.data);
  DatasetSpec spec;
  spec.graph.d = cfg.d;
  spec.graph.kind = cfg.graph;
  spec.graph.edge_factor = cfg.k;
  spec.noise = cfg.noise;
  spec.sem = cfg.sem;
  spec.n = cfg.n;
  spec.hidden = cfg.data_hidden;
  spec.seed = seed;
  return generate_dataset(spec);
}

}  // namespace

void RunConfig::validate() const {
  if (d < 2) throw std::invalid_argument("config: d must be >= 2");
  if (n == 0) throw std::invalid_argument("config: n must be >= 1");
  if (data_hidden == 0) throw std::invalid_argument("config: data_hidden must be >= 1");
  if (!(omega > 0.0)) throw std::invalid_argument("config: omega must be positive");
  if (seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("config: seeds must be distinct");
  }
  if (jobs == 0) throw std::invalid_argument("config: jobs must be >= 1");
  if (schedule.epochs != train.epochs) throw std::invalid_argument("config: schedule epochs differ");
  train.validate();
  schedule.validate();
}

ordered_json to_json(const RunConfig& c) {
  return {
      {"graph", to_string(c.graph)},
      {"d", c.d},
      {"k", c.k},
      {"noise", to_string(c.noise)},
      {"sem", to_string(c.sem)},
      {"n", c.n},
      {"data_hidden", c.data_hidden},
      {"model", to_string(c.model)},
      {"epochs", c.train.epochs},
      {"batch", c.train.batch_size},
      {"lr", c.train.lr},
      {"lambda1", c.train.reg.l1},
      {"lambda2", c.train.reg.l2},
      {"lambdap", c.train.reg.lp},
      {"t_start", c.schedule.t_start},
      {"t_end", c.schedule.t_end},
      {"eps", c.train.eps},
      {"hidden", c.train.hidden},
      {"history_every", c.train.history_every},
      {"omega", c.omega},
      {"seeds", c.seeds},
      {"out", c.out},
      {"jobs", c.jobs},
      {"data", c.data},
  };
}

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const std::set<std::string> known = {
      "graph", "d",       "k",       "noise",   "sem",   "n",     "data_hidden",   "model",
      "epochs", "batch",  "lr",      "lambda1", "lambda2", "lambdap", "t_start", "t_end",
      "eps",   "hidden",  "history_every", "omega", "seeds", "out", "jobs", "data"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  try {
    if (j.contains("graph")) c.graph = parse_graph_kind(j["graph"].get<std::string>());
    if (j.contains("d")) c.d = j["d"].get<std::size_t>();
    if (j.contains("k")) c.k = j["k"].get<std::size_t>();
    if (j.contains("noise")) c.noise = parse_noise_family(j["noise"].get<std::string>());
    if (j.contains("sem")) c.sem = parse_sem_kind(j["sem"].get<std::string>());
    if (j.contains("n")) c.n = j["n"].get<std::size_t>();
    if (j.contains("data_hidden")) c.data_hidden = j["data_hidden"].get<std::size_t>();
    if (j.contains("model")) c.model = parse_model_kind(j["model"].get<std::string>());
    if (j.contains("epochs")) c.train.epochs = j["epochs"].get<std::size_t>();
    if (j.contains("batch")) c.train.batch_size = j["batch"].get<std::size_t>();
    if (j.contains("lr")) c.train.lr = j["lr"].get<double>();
    if (j.contains("lambda1")) c.train.reg.l1 = j["lambda1"].get<double>();
    if (j.contains("lambda2")) c.train.reg.l2 = j["lambda2"].get<double>();
    if (j.contains("lambdap")) c.train.reg.lp = j["lambdap"].get<double>();
    if (j.contains("t_start")) c.schedule.t_start = j["t_start"].get<double>();
    if (j.contains("t_end")) c.schedule.t_end = j["t_end"].get<double>();
    if (j.contains("eps")) c.train.eps = j["eps"].get<double>();
    if (j.contains("hidden")) c.train.hidden = j["hidden"].get<std::size_t>();
    if (j.contains("history_every")) c.train.history_every = j["history_every"].get<std::size_t>();
    if (j.contains("omega")) c.omega = j["omega"].get<double>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<std::size_t>();
    if (j.contains("data")) c.data = j["data"].get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.schedule.epochs = c.train.epochs;
  return c;
}

RunConfig load_config(const fs::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::string aggregate_csv_header() {
  return "model,graph,k,d,noise,sem,n,runs,nhd_mean,nhd_std,tpr_mean,tpr_std,fpr_mean,fpr_std,"
         "auc_mean,auc_std,time_mean_s,time_std_s,acyclic_runs";
}

std::string aggregate_csv_row(const RunConfig& cfg, const std::vector<SeedOutcome>& runs) {
  std::vector<double> nhd_v, tpr_v, fpr_v, auc_v, time_v;
  std::size_t acyclic = 0;
  for (const auto& r : runs) {
    nhd_v.push_back(r.report.nhd);
    tpr_v.push_back(r.report.tpr);
    fpr_v.push_back(r.report.fpr);
    auc_v.push_back(r.report.auc);
    time_v.push_back(r.train_seconds);
    acyclic += r.report.acyclic ? 1 : 0;
  }
  std::string row = to_string(cfg.model) + ',' + to_string(cfg.graph) + ',' + std::to_string(cfg.k) +
                    ',' + std::to_string(cfg.d) + ',' + to_string(cfg.noise) + ',' +
                    to_string(cfg.sem) + ',' + std::to_string(cfg.n) + ',' + std::to_string(runs.size());
  for (const auto* values : {&nhd_v, &tpr_v, &fpr_v, &auc_v}) {
    const auto s = mean_std(*values);
    row += ',' + format_double(s.mean) + ',' + format_double(s.std);
  }
  const auto t = mean_std(time_v);
  row += ',' + fixed(t.mean, 3) + ',' + fixed(t.std, 3) + ',' + std::to_string(acyclic);
  return row;
}

SeedOutcome run_seed(const RunConfig& cfg, std::uint64_t seed, TrainResult* result) {
  const Dataset data = dataset_for(cfg, seed);
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  AnnealSchedule sched = cfg.schedule;
  sched.epochs = tc.epochs;
  ModelParams init = init_params(cfg.model, static_cast<std::size_t>(data.x.cols()), tc, sched);
  TrainResult trained = train(std::move(init), data.x, tc, sched);

  SeedOutcome outcome;
  outcome.seed = seed;
  outcome.report = evaluate(trained.weights, data.truth(), cfg.omega);
  outcome.train_seconds = std::round(trained.train_seconds * 1000.0) / 1000.0;
  if (result) *result = std::move(trained);
  return outcome;
}

ordered_json seed_document(const RunConfig& cfg, std::uint64_t seed, const EvalReport& report,
                           const WeightedAdjacency& learned) {
  json arcs = json::array();
  for (Eigen::Index u = 0; u < learned.rows(); ++u) {
    for (Eigen::Index v = 0; v < learned.cols(); ++v) {
      if (std::abs(learned(u, v)) > cfg.omega) arcs.push_back(json::array({u, v, learned(u, v)}));
    }
  }
  return {{"seed", seed}, {"config", to_json(cfg)}, {"report", to_json(report)}, {"arcs", arcs}};
}

void write_history_csv(const std::vector<HistoryRow>& history, const fs::path& path) {
  std::string text = "epoch,temperature,loss,h_value,h_bound,elapsed_ms,h_weights\n";
  for (const auto& r : history) {
    text += std::to_string(r.epoch) + ',' + format_double(r.temperature) + ',' +
            format_double(r.loss) + ',' + format_double(r.h_value) + ',' + format_double(r.h_bound) +
            ',' + fixed(r.elapsed_ms, 3) + ',' + format_double(r.h_weights) + '\n';
  }
  write_text(path, text);
}

ExperimentSummary run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const fs::path out_dir = cfg.out;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  ExperimentSummary summary;
  summary.runs.resize(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.seeds.size()) return;
      try {
        const std::uint64_t seed = cfg.seeds[i];
        TrainResult trained;
        summary.runs[i] = run_seed(cfg, seed, &trained);
        const std::string tag = std::to_string(seed);
        write_text(out_dir / ("seed_" + tag + ".json"),
                   seed_document(cfg, seed, summary.runs[i].report, trained.weights).dump(2) + "\n");
        write_history_csv(trained.history, out_dir / ("history_seed_" + tag + ".csv"));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cfg.seeds.size());
      }
    }
  };

  const std::size_t workers = std::min(cfg.jobs, cfg.seeds.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  summary.aggregate_csv = out_dir / "aggregate.csv";
  write_text(summary.aggregate_csv,
             aggregate_csv_header() + "\n" + aggregate_csv_row(cfg, summary.runs) + "\n");
  return summary;
}

std::vector<BenchRow> bench_epoch_time(const std::vector<std::size_t>& dims, const RunConfig& base,
                                       std::size_t repetitions) {
  if (repetitions == 0) throw std::invalid_argument("bench: repetitions must be >= 1");
  if (dims.empty()) throw std::invalid_argument("bench: no dimensions given");
  for (std::size_t d : dims) {
    if (d < 2) throw std::invalid_argument("bench: every d must be >= 2");
  }
  base.train.validate();

  std::vector<BenchRow> rows;
  for (std::size_t d : dims) {
    RunConfig cfg = base;
    cfg.d = d;
    cfg.data.clear();
    const Dataset data = dataset_for(cfg, cfg.seeds.empty() ? 0 : cfg.seeds.front());
    AnnealSchedule sched = cfg.schedule;
    sched.epochs = cfg.train.epochs;
    std::vector<double> samples;
    for (std::size_t r = 0; r < repetitions; ++r) {
      TrainConfig tc = cfg.train;
      tc.seed = r;
      samples.push_back(time_epochs(cfg.model, data.x, tc, sched));
    }
    const auto s = mean_std(samples);
    rows.push_back({d, s.mean, s.std});
  }
  return rows;
}

std::string default_output_root() {
  if (const char* env = std::getenv("COSMO_OUT_DIR"); env && *env) return env;
  return "runs";
}

}  // namespace cosmo
