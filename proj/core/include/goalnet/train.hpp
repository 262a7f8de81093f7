#pragma once

// Training loop (MSE objective, Adam, step schedule, early stopping) and
// evaluation metrics.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goalnet/graphs.hpp"
#include "goalnet/models.hpp"
#include "goalnet/optim.hpp"

namespace goalnet {

struct Metrics {
  double mse = 0.0;
  double mae = 0.0;
  double combined = 0.0;  // mae + mse
  std::size_t count = 0;
};

// Mean squared / absolute error of the model's predictions over `graphs`.
// An empty set yields all-zero metrics.
Metrics evaluate(const GraphModel& model, std::span<const EventGraph> graphs);

// Same, from precomputed predictions and labels of equal length.
Metrics metrics_from(std::span<const double> predictions, std::span<const double> labels);

struct TrainOptions {
  AdamOptions adam;  // lr 1e-4, weight decay 1e-4
  ScheduleOptions schedule;
  std::size_t epochs = 25;
  std::size_t batch_size = 64;
  std::uint64_t shuffle_seed = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-indexed
  double lr = 0.0;        // learning rate used during this epoch
  Metrics train;
  Metrics validation;
  bool stopped_early = false;
};

struct TrainResult {
  GraphModel model;  // parameters of the best validation epoch
  std::size_t best_epoch = 0;
  double best_val_mse = 0.0;
  std::vector<EpochRecord> log;
  std::size_t optimizer_steps = 0;
  double final_lr = 0.0;
  bool diverged = false;
  std::string divergence;  // what failed, when diverged
};

// Trains a freshly initialized model. Each epoch shuffles the training set
// (seeded by shuffle_seed and the epoch), takes one Adam step per batch on the
// batch-mean loss, then evaluates on both sets. The returned model holds the
// parameters of the best validation MSE (the last epoch when `validation` is
// empty). A non-finite value aborts training and returns the last good
// parameters with `diverged` set.
TrainResult train(const ModelConfig& config, std::span<const EventGraph> training,
                  std::span<const EventGraph> validation, const TrainOptions& options = {});

// CSV with header
// epoch,lr,train_mse,train_mae,train_combined,val_mse,val_mae,val_combined,stopped_early
void write_epoch_log_csv(std::ostream& out, std::span<const EpochRecord> log);

}  // namespace goalnet
