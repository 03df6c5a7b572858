#include "cosmo/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace cosmo {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kInitStream = 10;
constexpr std::uint64_t kShuffleStream = 11;

void pin_diagonal(Matrix& m) { m.diagonal().setZero(); }

// Per-model hooks used by the generic loop below.
struct Step {
  double loss = 0.0;
  std::vector<ParamBlock> blocks;
  std::vector<double> grad_norms;
};

class LinearHooks {
 public:
  explicit LinearHooks(CosmoParams& p) : p_(p) {}
  void set_temperature(double t) { p_.cfg.temperature = t; }
  Step step(const Matrix& batch, const RegWeights& reg) {
    g_ = loss_and_grads(p_, batch, reg);
    return {g_.loss,
            {{flat(p_.direct), flat(g_.d_direct)}, {flat(p_.priority), flat(g_.d_priority)}},
            {g_.d_direct.norm(), g_.d_priority.norm()}};
  }
  void pin() { pin_diagonal(p_.direct); }
  void diagnostics(HistoryRow& row) const {
    const Matrix s = smooth_orientation(p_.priority, p_.cfg);
    row.h_value = trace_exp_minus_dim(s);
    row.h_bound = acyclicity_upper_bound(p_.cfg, static_cast<std::size_t>(s.rows()));
    row.h_weights = notears_h(compose(p_.direct, s));
  }

 private:
  CosmoParams& p_;
  LinearGrads g_;
};

class MlpHooks {
 public:
  explicit MlpHooks(NonlinearParams& p) : p_(p) {}
  void set_temperature(double t) { p_.cfg.temperature = t; }
  Step step(const Matrix& batch, const RegWeights& reg) {
    g_ = nl_loss_and_grads(p_, batch, reg);
    return {g_.loss,
            {{flat(p_.first_layer), flat(g_.d_first_layer)},
             {flat(p_.hidden_bias), flat(g_.d_hidden_bias)},
             {flat(p_.output_weights), flat(g_.d_output_weights)},
             {flat(p_.output_bias), flat(g_.d_output_bias)},
             {flat(p_.priority), flat(g_.d_priority)}},
            {g_.d_first_layer.norm(), g_.d_hidden_bias.norm(), g_.d_output_weights.norm(),
             g_.d_output_bias.norm(), g_.d_priority.norm()}};
  }
  void pin() { pin_self_inputs(p_); }
  void diagnostics(HistoryRow& row) const {
    const Matrix s = smooth_orientation(p_.priority, p_.cfg);
    row.h_value = trace_exp_minus_dim(s);
    row.h_bound = acyclicity_upper_bound(p_.cfg, static_cast<std::size_t>(s.rows()));
    row.h_weights = notears_h(nl_learned_weights(p_));
  }

 private:
  NonlinearParams& p_;
  NonlinearGrads g_;
};

class NocurlHooks {
 public:
  explicit NocurlHooks(NocurlParams& p) : p_(p) {}
  void set_temperature(double) {}
  Step step(const Matrix& batch, const RegWeights& reg) {
    g_ = nocurlu_loss_and_grads(p_.direct, p_.priority, batch, reg);
    return {g_.loss,
            {{flat(p_.direct), flat(g_.d_direct)}, {flat(p_.priority), flat(g_.d_priority)}},
            {g_.d_direct.norm(), g_.d_priority.norm()}};
  }
  void pin() { pin_diagonal(p_.direct); }
  void diagnostics(HistoryRow& row) const {
    // No temperature and no orientation bound for the ReLU baseline.
    row.h_value = std::numeric_limits<double>::quiet_NaN();
    row.h_bound = std::numeric_limits<double>::quiet_NaN();
    row.h_weights = notears_h(nocurlu_weights(p_.direct, p_.priority));
  }

 private:
  NocurlParams& p_;
  LinearGrads g_;
};

template <typename Hooks>
std::vector<HistoryRow> run_epochs(Hooks hooks, const Matrix& x, const TrainConfig& tc,
                                   const AnnealSchedule& sched, bool record, double& train_ms) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto d = x.cols();
  Rng shuffle_rng(mix_seed(tc.seed, kShuffleStream));
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});

  AdamState adam;
  adam.config.lr = tc.lr;
  Matrix batch;
  std::vector<HistoryRow> history;
  Clock::duration fitting{};

  for (std::size_t epoch = 0; epoch < tc.epochs; ++epoch) {
    const auto start = Clock::now();
    const double t = temperature_at(sched, epoch);
    hooks.set_temperature(t);
    shuffle_rng.shuffle(rows);

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < n; begin += tc.batch_size) {
      const std::size_t size = std::min(tc.batch_size, n - begin);
      batch.resize(static_cast<Eigen::Index>(size), d);
      for (std::size_t r = 0; r < size; ++r) {
        batch.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[begin + r]));
      }
      Step s = hooks.step(batch, tc.reg);
      if (!std::isfinite(s.loss)) {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch << " (temperature " << t << "); gradient norms:";
        for (double g : s.grad_norms) msg << ' ' << g;
        throw NumericalAbort(msg.str());
      }
      adam_step(adam, s.blocks);
      hooks.pin();
      loss_sum += s.loss;
      ++batches;
    }
    fitting += Clock::now() - start;

    const bool last = epoch + 1 == tc.epochs;
    const bool due = tc.history_every != 0 && epoch % tc.history_every == 0;
    if (record && (due || last)) {
      HistoryRow row;
      row.epoch = epoch;
      row.temperature = t;
      row.loss = loss_sum / static_cast<double>(std::max<std::size_t>(batches, 1));
      row.elapsed_ms = std::chrono::duration<double, std::milli>(fitting).count();
      hooks.diagnostics(row);
      history.push_back(row);
    }
  }
  train_ms = std::chrono::duration<double, std::milli>(fitting).count();
  return history;
}

template <typename... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overload(Fs...) -> Overload<Fs...>;

}  // namespace

std::string to_string(ModelKind model) {
  switch (model) {
    case ModelKind::CosmoLinear: return "cosmo-linear";
    case ModelKind::CosmoMlp: return "cosmo-mlp";
    case ModelKind::NocurlU: return "nocurl-u";
  }
  return "cosmo-linear";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "cosmo-linear" || text == "cosmo") return ModelKind::CosmoLinear;
  if (text == "cosmo-mlp") return ModelKind::CosmoMlp;
  if (text == "nocurl-u") return ModelKind::NocurlU;
  throw std::invalid_argument("unknown model: " + std::string(text));
}

NocurlParams init_nocurl_params(std::size_t d, Rng& rng) {
  const auto dd = static_cast<Eigen::Index>(d);
  NocurlParams p{Matrix::Zero(dd, dd), PriorityVector(dd)};
  for (Eigen::Index i = 0; i < dd; ++i) p.priority(i) = rng.normal();
  return p;
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw std::invalid_argument("train config: batch size must be >= 1");
  if (epochs == 0) throw std::invalid_argument("train config: epochs must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw std::invalid_argument("train config: lr must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("train config: eps must be positive");
  if (hidden == 0) throw std::invalid_argument("train config: hidden width must be >= 1");
  reg.validate();
}

ModelParams init_params(ModelKind model, std::size_t d, const TrainConfig& tc,
                        const AnnealSchedule& sched) {
  Rng rng(mix_seed(tc.seed, kInitStream));
  const OrientationConfig cfg{tc.eps, sched.t_start};
  switch (model) {
    case ModelKind::CosmoLinear: return init_linear_params(d, cfg, rng);
    case ModelKind::CosmoMlp: return init_nonlinear_params(d, tc.hidden, cfg, rng);
    case ModelKind::NocurlU: return init_nocurl_params(d, rng);
  }
  throw std::invalid_argument("unknown model");
}

WeightedAdjacency learned_adjacency(const ModelParams& params) {
  return std::visit(Overload{
                        [](const CosmoParams& p) { return learned_weights(p); },
                        [](const NonlinearParams& p) { return nl_learned_weights(p); },
                        [](const NocurlParams& p) { return nocurlu_weights(p.direct, p.priority); },
                    },
                    params);
}

TrainResult train(ModelParams init, const Matrix& x, const TrainConfig& tc,
                  const AnnealSchedule& sched) {
  tc.validate();
  sched.validate();
  if (sched.epochs != tc.epochs) {
    throw std::invalid_argument("train: schedule and config disagree on the epoch count");
  }
  if (x.rows() == 0) throw std::invalid_argument("train: empty dataset");
  if (!x.allFinite()) throw std::invalid_argument("train: non-finite observations");

  TrainResult result;
  result.params = std::move(init);
  double train_ms = 0.0;
  std::visit(Overload{
                 [&](CosmoParams& p) {
                   if (p.priority.size() != x.cols()) throw std::invalid_argument("train: d mismatch");
                   p.cfg.eps = tc.eps;
                   result.history = run_epochs(LinearHooks(p), x, tc, sched, true, train_ms);
                 },
                 [&](NonlinearParams& p) {
                   if (p.priority.size() != x.cols()) throw std::invalid_argument("train: d mismatch");
                   p.cfg.eps = tc.eps;
                   result.history = run_epochs(MlpHooks(p), x, tc, sched, true, train_ms);
                 },
                 [&](NocurlParams& p) {
                   if (p.priority.size() != x.cols()) throw std::invalid_argument("train: d mismatch");
                   result.history = run_epochs(NocurlHooks(p), x, tc, sched, true, train_ms);
                 },
             },
             result.params);
  result.weights = learned_adjacency(result.params);
  result.train_seconds = train_ms / 1000.0;
  return result;
}

double time_epochs(ModelKind model, const Matrix& x, TrainConfig tc, const AnnealSchedule& sched) {
  tc.validate();
  sched.validate();
  ModelParams params = init_params(model, static_cast<std::size_t>(x.cols()), tc, sched);
  double train_ms = 0.0;
  std::visit(Overload{
                 [&](CosmoParams& p) { run_epochs(LinearHooks(p), x, tc, sched, false, train_ms); },
                 [&](NonlinearParams& p) { run_epochs(MlpHooks(p), x, tc, sched, false, train_ms); },
                 [&](NocurlParams& p) { run_epochs(NocurlHooks(p), x, tc, sched, false, train_ms); },
             },
             params);
  return train_ms / static_cast<double>(tc.epochs);
}

}  // namespace cosmo
