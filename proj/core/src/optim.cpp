#include "goalnet/optim.hpp"

#include <cmath>
#include <limits>

#include "goalnet/error.hpp"

namespace goalnet {

void Adam::step(ParamSet& params) {
  auto& entries = params.entries();
  if (m_.empty()) {
    for (const auto& e : entries) {
      m_.emplace_back(e.tensor.rows(), e.tensor.cols());
      v_.emplace_back(e.tensor.rows(), e.tensor.cols());
    }
  }
  if (m_.size() != entries.size()) throw SchemaError("Adam: parameter set changed size");

  ++step_;
  const double t = static_cast<double>(step_);
  const double c1 = 1.0 - std::pow(opt_.beta1, t);
  const double c2 = 1.0 - std::pow(opt_.beta2, t);
  const double decay = 1.0 - opt_.lr * opt_.weight_decay;

  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto p = entries[i].tensor.mutable_value().data();
    auto g = entries[i].tensor.grad().data();
    auto m = m_[i].data();
    auto v = v_[i].data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (opt_.weight_decay != 0.0) p[j] *= decay;
      m[j] = opt_.beta1 * m[j] + (1.0 - opt_.beta1) * g[j];
      v[j] = opt_.beta2 * v[j] + (1.0 - opt_.beta2) * g[j] * g[j];
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      p[j] -= opt_.lr * mhat / (std::sqrt(vhat) + opt_.eps);
    }
  }
}

void Adam::restore(std::size_t step, std::vector<Matrix> m, std::vector<Matrix> v) {
  if (m.size() != v.size()) throw SchemaError("Adam::restore: moment count mismatch");
  step_ = step;
  m_ = std::move(m);
  v_ = std::move(v);
}

ScheduleDecision schedule_and_stop(std::size_t epoch, std::span<const double> val_history,
                                   const ScheduleOptions& options) {
  ScheduleDecision d;
  if (options.lr_step > 0 && epoch > 0 && epoch % options.lr_step == 0) {
    d.lr_multiplier = options.lr_gamma;
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (double loss : val_history.first(std::min(epoch, val_history.size()))) {
    if (loss < best) {
      best = loss;
      stale = 0;
    } else {
      ++stale;
    }
  }
  d.stop = options.patience > 0 && stale >= options.patience;
  return d;
}

}  // namespace goalnet
