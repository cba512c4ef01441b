#pragma once

#include <map>

#include "darepair/backend/model.hpp"

namespace darepair::backend {

/// Reference learner with no numeric training: stores its training pairs and
/// answers unseen inputs with the stored target of the nearest input by
/// character edit distance. Exact match on training pairs is 100% by
/// construction, which makes it the pipeline oracle.
class MemorizerBackend final : public Backend {
 public:
  explicit MemorizerBackend(uint64_t seed = 0) : seed_(seed) {}

  std::string backend_id() const override { return "memorizer"; }
  uint64_t seed() const override { return seed_; }
  bool trained() const override { return trained_; }

  /// Exact hit: stored target, confidence 0. Otherwise the nearest stored
  /// input's target with confidence -distance/|input| (< 0). Distance ties
  /// break on the lexicographically smallest stored input.
  Prediction generate(const std::string& input) const override;

  std::vector<ParameterGroupInfo> parameter_inventory() const override;
  void set_frozen(const std::string& pattern, bool frozen) override;
  double run_epoch(const std::vector<TrainPair>& pairs, const TrainConfig& config,
                   int epoch) override;
  void serialize(std::ostream& out) const override;
  void deserialize(std::istream& in) override;
  std::unique_ptr<Backend> clone() const override;
  nlohmann::json describe() const override;

  size_t memory_size() const { return memory_.size(); }

 private:
  std::map<std::string, std::string> memory_;  // input -> target; later pairs win
  bool frozen_ = false;
  bool trained_ = false;
  uint64_t seed_ = 0;
};

}  // namespace darepair::backend
