#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cosmo {

struct AdamConfig {
  double lr = 5.5e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// A parameter block and its gradient, viewed as flat storage.
struct ParamBlock {
  std::span<double> value;
  std::span<const double> grad;
};

template <typename Derived>
std::span<double> flat(Eigen::PlainObjectBase<Derived>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
template <typename Derived>
std::span<const double> flat(const Eigen::PlainObjectBase<Derived>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

/// Moment accumulators mirror the blocks passed to the first step; later
/// steps must pass blocks of identical sizes in the same order.
struct AdamState {
  AdamConfig config;
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;
  std::uint64_t step = 0;
};

/// One bias-corrected Adam update over every block. Throws
/// std::invalid_argument on a value/gradient or block-layout mismatch.
void adam_step(AdamState& state, std::span<const ParamBlock> blocks);

/// Cosine annealing of the temperature over epochs.
struct AnnealSchedule {
  double t_start = 0.45;
  double t_end = 7.5e-4;
  std::size_t epochs = 2000;

  /// Requires t_start > t_end > 0 and epochs >= 1.
  void validate() const;
};

/// t_end + (t_start - t_end) * (1 + cos(pi * e / (E - 1))) / 2, so epoch 0
/// runs at t_start and epoch E-1 at t_end. A single-epoch schedule runs at
/// t_start. Throws std::out_of_range for epoch >= E.
double temperature_at(const AnnealSchedule& sched, std::size_t epoch);

}  // namespace cosmo
