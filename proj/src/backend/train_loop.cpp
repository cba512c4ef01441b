#include "darepair/backend/train_loop.hpp"

#include <chrono>
#include <sstream>

#include "darepair/common/error.hpp"
#include "darepair/common/rng.hpp"
#include "darepair/eval/metrics.hpp"

namespace darepair::backend {

void TrainConfig::validate() const {
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (early_stop_patience < 1) throw ConfigError("early_stop_patience must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (lr_schedule != "constant" && lr_schedule != "linear-decay")
    throw ConfigError("unknown lr schedule '" + lr_schedule + "'");
}

double exact_match_rate(const Backend& model, const std::vector<TrainPair>& pairs) {
  if (pairs.empty()) return 0.0;
  size_t hits = 0;
  for (const auto& [input, target] : pairs) {
    if (eval::exact_match(model.generate(input).output_text, target)) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(pairs.size());
}

TrainingHistory train_with_schedule(Backend& model, const std::vector<TrainPair>& full_train,
                                    const EpochProvider& provider,
                                    const std::vector<TrainPair>& validation_pairs,
                                    const TrainConfig& config,
                                    std::vector<std::string>* warnings,
                                    const EpochObserver& observer) {
  config.validate();
  if (full_train.empty()) throw Error("training data is empty");
  model.begin_training(full_train);
  TrainingHistory history;
  history.used_validation = !validation_pairs.empty();
  if (!history.used_validation && warnings) {
    warnings->push_back(
        "no validation pairs; early stopping falls back to training loss");
  }

  std::string best_state;
  double best = -std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::vector<TrainPair> pairs = provider(epoch);
    if (pairs.empty()) throw Error("epoch " + std::to_string(epoch) + " has no training pairs");
    if (observer) observer(epoch, pairs);

    auto t0 = std::chrono::steady_clock::now();
    double loss = model.run_epoch(pairs, config, epoch);
    std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;

    double metric =
        history.used_validation ? exact_match_rate(model, validation_pairs) : -loss;
    history.epochs.push_back(
        {epoch, metric, loss, wall.count(), static_cast<int>(pairs.size())});

    if (metric > best) {
      best = metric;
      history.best_epoch = epoch;
      history.best_metric = metric;
      std::ostringstream snapshot;
      model.serialize(snapshot);
      best_state = snapshot.str();
      epochs_since_best = 0;
    } else if (++epochs_since_best >= config.early_stop_patience) {
      break;
    }
  }

  if (!best_state.empty()) {
    std::istringstream snapshot(best_state);
    model.deserialize(snapshot);
  }
  return history;
}

TrainingHistory train(Backend& model, const std::vector<TrainPair>& train_pairs,
                      const std::vector<TrainPair>& validation_pairs, const TrainConfig& config,
                      std::vector<std::string>* warnings, const EpochObserver& observer) {
  if (train_pairs.empty()) throw Error("training data is empty");
  EpochProvider provider = [&train_pairs, &config](int epoch) {
    std::vector<TrainPair> pairs = train_pairs;
    seeded_shuffle(pairs, sub_seed(config.seed, "epoch", std::to_string(epoch)));
    return pairs;
  };
  return train_with_schedule(model, train_pairs, provider, validation_pairs, config, warnings,
                             observer);
}

}  // namespace darepair::backend
