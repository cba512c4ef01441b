#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "darepair/adapter/adapter.hpp"

namespace darepair::backend {

struct Prediction {
  std::string output_text;
  double confidence = 0.0;  // length-normalized log-likelihood; 0 = certain
};

struct TrainConfig {
  int max_epochs = 30;
  int early_stop_patience = 4;
  int batch_size = 8;
  uint64_t seed = 0;
  std::string lr_schedule = "constant";  // constant | linear-decay

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double validation_metric = 0.0;  // exact-match pct, or -loss fallback
  double train_loss = 0.0;
  double wall_time_s = 0.0;
  int n_samples = 0;
};

struct TrainingHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_metric = 0.0;
  bool used_validation = true;
};

struct ParameterGroupInfo {
  std::string name;
  size_t elements = 0;
  bool frozen = false;
  uint64_t checksum = 0;
};

using TrainPair = std::pair<std::string, std::string>;  // (input text, target text)

/// Trainable sequence-to-sequence model. One training thread at a time;
/// generate() on a model that is not mid-training is safe concurrently.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string backend_id() const = 0;
  virtual uint64_t seed() const = 0;
  virtual bool trained() const = 0;

  /// Greedy decode; deterministic under fixed model state. Throws on an
  /// untrained model.
  virtual Prediction generate(const std::string& input) const = 0;

  virtual std::vector<ParameterGroupInfo> parameter_inventory() const = 0;

  /// Sets the frozen flag on every group matching the glob pattern.
  /// Throws when nothing matches.
  virtual void set_frozen(const std::string& pattern, bool frozen) = 0;

  /// Called once before a training run with the complete training set, so a
  /// backend can build its vocabulary before a schedule feeds partial epochs.
  virtual void begin_training(const std::vector<TrainPair>& /*full_train*/) {}

  /// One pass over the pairs in the given order; returns the mean train loss.
  /// Frozen groups are never altered.
  virtual double run_epoch(const std::vector<TrainPair>& pairs, const TrainConfig& config,
                           int epoch) = 0;

  /// Full model state (used for best-checkpoint restore and save/load).
  virtual void serialize(std::ostream& out) const = 0;
  virtual void deserialize(std::istream& in) = 0;

  virtual std::unique_ptr<Backend> clone() const = 0;

  /// Layer identifiers adapters can attach to; empty when unsupported.
  virtual std::vector<std::string> adapter_insertion_points() const { return {}; }

  /// Registers an adapter after the named layer as parameter group
  /// "adapter/<point>". Throws on unknown point or double insertion.
  virtual void install_adapter(const std::string& point, adapter::AdapterLayer layer);

  /// Backend-specific manifest entries (dimensions, vocab size, ...).
  virtual nlohmann::json describe() const { return nlohmann::json::object(); }
};

/// Convenience lookups over parameter_inventory().
uint64_t group_checksum(const Backend& model, const std::string& name);
size_t total_parameter_count(const Backend& model);

}  // namespace darepair::backend
