#pragma once

#include <functional>

#include "darepair/backend/model.hpp"

namespace darepair::backend {

/// Training pairs for a given 1-based epoch, in feed order.
using EpochProvider = std::function<std::vector<TrainPair>(int epoch)>;

/// Test hook observing exactly what each epoch consumed.
using EpochObserver = std::function<void(int epoch, const std::vector<TrainPair>& pairs)>;

/// Exact-match percentage of the model on (input, target) pairs.
double exact_match_rate(const Backend& model, const std::vector<TrainPair>& pairs);

/// Early-stopped training driver. full_train is the complete training set
/// (handed to Backend::begin_training); the provider selects what each epoch
/// actually feeds. After each epoch the model is scored on the validation
/// pairs (exact match) and the best state is kept; training stops once
/// early_stop_patience consecutive epochs bring no improvement, and the model
/// is restored to the best checkpoint. With no validation pairs, falls back
/// to train-loss improvement and appends a warning.
TrainingHistory train_with_schedule(Backend& model, const std::vector<TrainPair>& full_train,
                                    const EpochProvider& provider,
                                    const std::vector<TrainPair>& validation_pairs,
                                    const TrainConfig& config,
                                    std::vector<std::string>* warnings = nullptr,
                                    const EpochObserver& observer = nullptr);

/// Standard training: every epoch feeds all pairs in seeded random order.
/// Throws on empty train_pairs.
TrainingHistory train(Backend& model, const std::vector<TrainPair>& train_pairs,
                      const std::vector<TrainPair>& validation_pairs, const TrainConfig& config,
                      std::vector<std::string>* warnings = nullptr,
                      const EpochObserver& observer = nullptr);

}  // namespace darepair::backend
