#include "goalnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "goalnet/error.hpp"
#include "goalnet/format.hpp"

namespace goalnet {

Metrics metrics_from(std::span<const double> predictions, std::span<const double> labels) {
  if (predictions.size() != labels.size()) {
    throw ShapeError("metrics: " + std::to_string(predictions.size()) + " predictions for " +
                     std::to_string(labels.size()) + " labels");
  }
  Metrics m;
  m.count = labels.size();
  if (m.count == 0) return m;
  for (std::size_t i = 0; i < m.count; ++i) {
    const double r = predictions[i] - labels[i];
    m.mse += r * r;
    m.mae += std::abs(r);
  }
  m.mse /= static_cast<double>(m.count);
  m.mae /= static_cast<double>(m.count);
  m.combined = m.mae + m.mse;
  return m;
}

namespace {

Metrics evaluate_inputs(const GraphModel& model, std::span<const GraphInputs> inputs,
                        std::span<const EventGraph> graphs) {
  NoGradGuard guard;
  std::vector<double> preds(graphs.size());
  std::vector<double> labels(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    preds[i] = model.forward(inputs[i]).prediction.item();
    labels[i] = graphs[i].label;
  }
  return metrics_from(preds, labels);
}

std::vector<GraphInputs> precompute(std::span<const EventGraph> graphs) {
  std::vector<GraphInputs> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(GraphInputs::from(g));
  return out;
}

}  // namespace

Metrics evaluate(const GraphModel& model, std::span<const EventGraph> graphs) {
  const auto inputs = precompute(graphs);
  return evaluate_inputs(model, inputs, graphs);
}

TrainResult train(const ModelConfig& config, std::span<const EventGraph> training,
                  std::span<const EventGraph> validation, const TrainOptions& options) {
  if (options.batch_size == 0) throw ConfigError("train: batch_size must be >= 1");
  if (training.empty()) throw Error("train: empty training set");

  GraphModel model(config);
  TrainResult result{model, 0, 0.0, {}, 0, options.adam.lr, false, {}};
  Adam adam(options.adam);

  const auto train_inputs = precompute(training);
  const auto val_inputs = precompute(validation);
  std::vector<std::size_t> order(training.size());
  std::vector<double> val_history;
  ParamSet best = model.params().clone();
  double best_val = INFINITY;

  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = adam.lr();
    try {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::mt19937_64 rng(options.shuffle_seed * 1000003ULL + epoch);
      std::shuffle(order.begin(), order.end(), rng);

      for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
        const std::size_t end = std::min(order.size(), start + options.batch_size);
        const double inv_b = 1.0 / static_cast<double>(end - start);
        model.params().zero_grad();
        for (std::size_t i = start; i < end; ++i) {
          const std::size_t g = order[i];
          const Tensor pred = model.forward(train_inputs[g]).prediction;
          const Tensor target = Tensor::constant(Matrix(1, 1, training[g].label));
          scale(mse(pred, target), inv_b).backward();
        }
        adam.step(model.params());
      }
      rec.train = evaluate_inputs(model, train_inputs, training);
      rec.validation = evaluate_inputs(model, val_inputs, validation);
    } catch (const NumericError& e) {
      result.diverged = true;
      result.divergence = "epoch " + std::to_string(epoch) + ": " + e.what();
      break;
    }

    const double monitored = validation.empty() ? rec.train.mse : rec.validation.mse;
    val_history.push_back(monitored);
    if (monitored < best_val || result.best_epoch == 0) {
      best_val = monitored;
      best = model.params().clone();
      result.best_epoch = epoch;
    }
    const ScheduleDecision d = schedule_and_stop(epoch, val_history, options.schedule);
    rec.stopped_early = d.stop;
    result.log.push_back(rec);
    adam.set_lr(adam.lr() * d.lr_multiplier);
    if (d.stop) break;
  }

  if (result.best_epoch > 0) model.params().assign_values(best);
  result.model = std::move(model);
  result.best_val_mse = result.best_epoch > 0 ? best_val : 0.0;
  result.optimizer_steps = adam.step_count();
  result.final_lr = adam.lr();
  return result;
}

void write_epoch_log_csv(std::ostream& out, std::span<const EpochRecord> log) {
  out << "epoch,lr,train_mse,train_mae,train_combined,val_mse,val_mae,val_combined,stopped_early\n";
  for (const auto& r : log) {
    out << r.epoch << ',' << fmt_real(r.lr) << ',' << fmt_real(r.train.mse) << ','
        << fmt_real(r.train.mae) << ',' << fmt_real(r.train.combined) << ','
        << fmt_real(r.validation.mse) << ',' << fmt_real(r.validation.mae) << ','
        << fmt_real(r.validation.combined) << ',' << (r.stopped_early ? 1 : 0) << '\n';
  }
}

}  // namespace goalnet
