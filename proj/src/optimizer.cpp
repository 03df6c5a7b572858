#include "cosmo/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cosmo {

void adam_step(AdamState& state, std::span<const ParamBlock> blocks) {
  for (const auto& block : blocks) {
    if (block.value.size() != block.grad.size()) {
      throw std::invalid_argument("adam_step: value and gradient sizes differ");
    }
  }
  if (state.step == 0 && state.first.empty()) {
    for (const auto& block : blocks) {
      state.first.emplace_back(block.value.size(), 0.0);
      state.second.emplace_back(block.value.size(), 0.0);
    }
  }
  if (state.first.size() != blocks.size()) {
    throw std::invalid_argument("adam_step: block count changed between steps");
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (state.first[b].size() != blocks[b].value.size()) {
      throw std::invalid_argument("adam_step: block shape changed between steps");
    }
  }

  const auto& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    auto value = blocks[b].value;
    auto grad = blocks[b].grad;
    auto& m = state.first[b];
    auto& v = state.second[b];
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i];
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
  }
}

void AnnealSchedule::validate() const {
  if (!(t_end > 0.0) || !(t_start > t_end) || !std::isfinite(t_start)) {
    throw std::invalid_argument("anneal schedule: need t_start > t_end > 0");
  }
  if (epochs == 0) throw std::invalid_argument("anneal schedule: epochs must be >= 1");
}

double temperature_at(const AnnealSchedule& sched, std::size_t epoch) {
  if (epoch >= sched.epochs) throw std::out_of_range("temperature_at: epoch out of range");
  if (sched.epochs == 1) return sched.t_start;
  if (epoch == sched.epochs - 1) return sched.t_end;
  const double phase = static_cast<double>(epoch) / static_cast<double>(sched.epochs - 1);
  return sched.t_end +
         0.5 * (sched.t_start - sched.t_end) * (1.0 + std::cos(std::numbers::pi * phase));
}

}  // namespace cosmo
