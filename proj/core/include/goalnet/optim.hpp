#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "goalnet/params.hpp"

namespace goalnet {

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;
};

// Adam with bias correction and decoupled weight decay. Moment buffers are
// created on the first step and keep the parameter order of the ParamSet.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : opt_(options) {}

  void step(ParamSet& params);

  const AdamOptions& options() const { return opt_; }
  double lr() const { return opt_.lr; }
  void set_lr(double lr) { opt_.lr = lr; }
  std::size_t step_count() const { return step_; }

  const std::vector<Matrix>& first_moments() const { return m_; }
  const std::vector<Matrix>& second_moments() const { return v_; }
  void restore(std::size_t step, std::vector<Matrix> m, std::vector<Matrix> v);

 private:
  AdamOptions opt_;
  std::size_t step_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

struct ScheduleOptions {
  std::size_t lr_step = 10;
  double lr_gamma = 0.5;
  std::size_t patience = 5;
};

struct ScheduleDecision {
  double lr_multiplier = 1.0;  // to apply after this epoch
  bool stop = false;
};

// `epoch` is 1-indexed and `val_history` holds the validation losses of
// epochs 1..epoch. The multiplier is lr_gamma after every lr_step-th epoch.
// stop is set once `patience` consecutive epochs failed to strictly improve
// on the best loss seen before them.
ScheduleDecision schedule_and_stop(std::size_t epoch, std::span<const double> val_history,
                                   const ScheduleOptions& options = {});

}  // namespace goalnet
