#include "cosmo/dataset_io.hpp"
#include "cosmo/experiment.hpp"
#include "cosmo/metrics.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalAbort = 3;
constexpr int kIoError = 4;

struct RunFlags {
  std::string config;
  std::optional<std::string> graph, noise, sem, model, out, data;
  std::optional<std::size_t> d, k, n, data_hidden, epochs, batch, hidden, history_every, jobs;
  std::optional<double> lr, lambda1, lambda2, lambdap, t_start, t_end, eps, omega;
  std::vector<std::uint64_t> seeds;
};

void add_data_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--d", f.d, "number of nodes");
  cmd->add_option("--graph", f.graph, "er | sf");
  cmd->add_option("--k", f.k, "expected arcs per node");
  cmd->add_option("--noise", f.noise, "gauss | exp | gumbel");
  cmd->add_option("--sem", f.sem, "linear | mlp");
  cmd->add_option("--n", f.n, "samples");
  cmd->add_option("--data-hidden", f.data_hidden, "hidden width of the MLP generator");
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration; flags override it");
  add_data_flags(cmd, f);
  cmd->add_option("--model", f.model, "cosmo-linear | cosmo-mlp | nocurl-u");
  cmd->add_option("--epochs", f.epochs);
  cmd->add_option("--batch", f.batch);
  cmd->add_option("--lr", f.lr);
  cmd->add_option("--lambda1", f.lambda1);
  cmd->add_option("--lambda2", f.lambda2);
  cmd->add_option("--lambdap", f.lambdap);
  cmd->add_option("--t-start", f.t_start);
  cmd->add_option("--t-end", f.t_end);
  cmd->add_option("--eps", f.eps);
  cmd->add_option("--hidden", f.hidden, "hidden width of the learned MLP");
  cmd->add_option("--history-every", f.history_every, "record history every N epochs");
  cmd->add_option("--omega", f.omega, "threshold");
  cmd->add_option("--seeds", f.seeds, "seed list")->delimiter(',');
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--jobs", f.jobs, "parallel seeds");
  cmd->add_option("--data", f.data, "dataset stem to load instead of generating");
}

cosmo::RunConfig resolve(const RunFlags& f) {
  cosmo::RunConfig c;
  c.out = cosmo::default_output_root();
  if (!f.config.empty()) c = cosmo::load_config(f.config, c);
  if (f.graph) c.graph = cosmo::parse_graph_kind(*f.graph);
  if (f.noise) c.noise = cosmo::parse_noise_family(*f.noise);
  if (f.sem) c.sem = cosmo::parse_sem_kind(*f.sem);
  if (f.model) c.model = cosmo::parse_model_kind(*f.model);
  if (f.out) c.out = *f.out;
  if (f.data) c.data = *f.data;
  if (f.d) c.d = *f.d;
  if (f.k) c.k = *f.k;
  if (f.n) c.n = *f.n;
  if (f.data_hidden) c.data_hidden = *f.data_hidden;
  if (f.epochs) c.train.epochs = *f.epochs;
  if (f.batch) c.train.batch_size = *f.batch;
  if (f.hidden) c.train.hidden = *f.hidden;
  if (f.history_every) c.train.history_every = *f.history_every;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.lr) c.train.lr = *f.lr;
  if (f.lambda1) c.train.reg.l1 = *f.lambda1;
  if (f.lambda2) c.train.reg.l2 = *f.lambda2;
  if (f.lambdap) c.train.reg.lp = *f.lambdap;
  if (f.t_start) c.schedule.t_start = *f.t_start;
  if (f.t_end) c.schedule.t_end = *f.t_end;
  if (f.eps) c.train.eps = *f.eps;
  if (f.omega) c.omega = *f.omega;
  if (!f.seeds.empty()) c.seeds = f.seeds;
  c.schedule.epochs = c.train.epochs;
  c.validate();
  return c;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write " + path.string());
}

int cmd_generate(const RunFlags& f, std::uint64_t seed, const std::string& stem) {
  const cosmo::RunConfig c = resolve(f);
  cosmo::DatasetSpec spec;
  spec.graph = {c.d, c.graph, c.k, 0};
  spec.noise = c.noise;
  spec.sem = c.sem;
  spec.n = c.n;
  spec.hidden = c.data_hidden;
  spec.seed = seed;
  const auto data = cosmo::generate_dataset(spec);
  const std::filesystem::path path =
      stem.empty() ? std::filesystem::path(c.out) / ("data_seed_" + std::to_string(seed))
                   : std::filesystem::path(stem);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  cosmo::write_dataset(data, path);
  std::cout << path.string() << ".csv\n" << path.string() << ".json\n";
  return kOk;
}

int cmd_train(const RunFlags& f) {
  cosmo::RunConfig c = resolve(f);
  c.seeds.resize(1);
  const std::uint64_t seed = c.seeds.front();
  cosmo::TrainResult trained;
  const auto outcome = cosmo::run_seed(c, seed, &trained);
  const std::filesystem::path dir = c.out;
  std::filesystem::create_directories(dir);
  const std::string tag = std::to_string(seed);
  write_file(dir / ("seed_" + tag + ".json"),
             cosmo::seed_document(c, seed, outcome.report, trained.weights).dump(2) + "\n");
  cosmo::write_history_csv(trained.history, dir / ("history_seed_" + tag + ".csv"));
  cosmo::write_matrix_csv(trained.weights, dir / ("weights_seed_" + tag + ".csv"));
  std::cout << cosmo::eval_csv_header() << ",seconds\n"
            << cosmo::eval_csv_row(outcome.report) << ',' << outcome.train_seconds << '\n';
  return kOk;
}

int cmd_experiment(const RunFlags& f) {
  const cosmo::RunConfig c = resolve(f);
  const auto summary = cosmo::run_experiment(c);
  std::ifstream in(summary.aggregate_csv);
  std::cout << in.rdbuf();
  return kOk;
}

int cmd_bench(const RunFlags& f, const std::vector<std::size_t>& dims, std::size_t reps,
              const std::string& csv_path) {
  const cosmo::RunConfig c = resolve(f);
  const auto rows = cosmo::bench_epoch_time(dims, c, reps);
  std::string text = "model,d,epochs,repetitions,mean_epoch_ms,std_epoch_ms\n";
  for (const auto& r : rows) {
    text += cosmo::to_string(c.model) + ',' + std::to_string(r.d) + ',' +
            std::to_string(c.train.epochs) + ',' + std::to_string(reps) + ',' +
            cosmo::format_double(r.mean_epoch_ms) + ',' + cosmo::format_double(r.std_epoch_ms) + '\n';
  }
  if (!csv_path.empty()) write_file(csv_path, text);
  std::cout << text;
  return kOk;
}

int cmd_eval(const std::string& weights_path, const std::string& truth_path, double omega, bool csv) {
  const cosmo::Matrix w = cosmo::read_matrix_csv(weights_path);
  cosmo::BinaryAdjacency truth;
  if (truth_path.size() > 4 && truth_path.substr(truth_path.size() - 4) == ".csv") {
    truth = cosmo::support(cosmo::read_matrix_csv(truth_path));
  } else {
    truth = cosmo::read_dataset(truth_path).truth();
  }
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (w.rows() != truth.rows() || w.cols() != truth.cols()) {
    throw std::invalid_argument("eval: weights are " + std::to_string(w.rows()) + "x" +
                                std::to_string(w.cols()) + " but truth has d = " +
                                std::to_string(truth.rows()));
  }
  const auto report = cosmo::evaluate(w, truth, omega);
  if (csv) {
    std::cout << cosmo::eval_csv_header() << '\n' << cosmo::eval_csv_row(report) << '\n';
  } else {
    std::cout << cosmo::to_json(report).dump(2) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acyclic structure learning with smooth orientations"};
  app.require_subcommand(1);

  RunFlags gen_flags, train_flags, exp_flags, bench_flags;

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  gen->add_option("--config", gen_flags.config, "JSON run configuration");
  add_data_flags(gen, gen_flags);
  gen->add_option("--out", gen_flags.out, "output directory");
  std::uint64_t gen_seed = 0;
  std::string gen_stem;
  gen->add_option("--seed", gen_seed);
  gen->add_option("--stem", gen_stem, "output path without extension");

  auto* tr = app.add_subcommand("train", "train on one seed and score the result");
  add_run_flags(tr, train_flags);

  auto* ex = app.add_subcommand("experiment", "multi-seed run with aggregate table");
  add_run_flags(ex, exp_flags);

  auto* be = app.add_subcommand("bench", "mean per-epoch time for several d");
  add_run_flags(be, bench_flags);
  std::vector<std::size_t> dims{50, 100, 200};
  std::size_t reps = 3;
  std::string bench_csv;
  be->add_option("--dims", dims, "node counts")->delimiter(',');
  be->add_option("--reps", reps, "repetitions per d");
  be->add_option("--csv", bench_csv, "also write the table here");

  auto* ev = app.add_subcommand("eval", "score a saved weight matrix against a truth");
  std::string weights_path, truth_path;
  double eval_omega = 0.3;
  bool eval_csv = false;
  ev->add_option("--weights", weights_path, "weight matrix CSV")->required();
  ev->add_option("--truth", truth_path, "dataset stem or adjacency CSV")->required();
  ev->add_option("--omega", eval_omega, "threshold");
  ev->add_flag("--csv", eval_csv, "print a CSV row instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen) return cmd_generate(gen_flags, gen_seed, gen_stem);
    if (*tr) return cmd_train(train_flags);
    if (*ex) return cmd_experiment(exp_flags);
    if (*be) return cmd_bench(bench_flags, dims, reps, bench_csv);
    if (*ev) return cmd_eval(weights_path, truth_path, eval_omega, eval_csv);
  } catch (const cosmo::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kNumericalAbort;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}
