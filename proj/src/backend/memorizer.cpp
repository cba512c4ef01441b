#include "darepair/backend/memorizer.hpp"

#include <istream>
#include <ostream>

#include "darepair/common/error.hpp"
#include "darepair/common/hash.hpp"
#include "darepair/common/text.hpp"

namespace darepair::backend {

Prediction MemorizerBackend::generate(const std::string& input) const {
  if (!trained_ || memory_.empty()) throw Error("memorizer: generate on an untrained model");
  if (auto it = memory_.find(input); it != memory_.end()) {
    return {it->second, 0.0};
  }
  size_t best_dist = std::numeric_limits<size_t>::max();
  const std::string* best_target = nullptr;
  for (const auto& [stored, target] : memory_) {  // sorted: ties pick smallest stored input
    size_t dist = edit_distance(input, stored);
    if (dist < best_dist) {
      best_dist = dist;
      best_target = &target;
    }
  }
  double denom = std::max<size_t>(1, input.size());
  return {*best_target, -static_cast<double>(best_dist) / denom};
}

std::vector<ParameterGroupInfo> MemorizerBackend::parameter_inventory() const {
  uint64_t h = kFnvOffset;
  for (const auto& [input, target] : memory_) {
    h = fnv1a(input, h);
    h = fnv1a("\x1f", h);
    h = fnv1a(target, h);
    h = fnv1a("\x1e", h);
  }
  return {{"memory", memory_.size(), frozen_, h}};
}

void MemorizerBackend::set_frozen(const std::string& pattern, bool frozen) {
  if (!glob_match(pattern, "memory"))
    throw Error("pattern '" + pattern + "' matches no parameter group");
  frozen_ = frozen;
}

double MemorizerBackend::run_epoch(const std::vector<TrainPair>& pairs, const TrainConfig&,
                                   int) {
  size_t changed = 0;
  if (!frozen_) {
    for (const auto& [input, target] : pairs) {
      auto it = memory_.find(input);
      if (it == memory_.end() || it->second != target) {
        memory_[input] = target;
        ++changed;
      }
    }
  }
  trained_ = trained_ || !memory_.empty();
  // Loss proxy: fraction of pairs that required a memory update.
  return pairs.empty() ? 0.0 : static_cast<double>(changed) / static_cast<double>(pairs.size());
}

void MemorizerBackend::serialize(std::ostream& out) const {
  nlohmann::json doc{{"backend", backend_id()},
                     {"seed", seed_},
                     {"frozen", frozen_},
                     {"trained", trained_},
                     {"memory", memory_}};
  out << doc.dump();
}

void MemorizerBackend::deserialize(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
    if (doc.at("backend").get<std::string>() != backend_id())
      throw Error("memorizer: payload belongs to another backend");
    seed_ = doc.at("seed").get<uint64_t>();
    frozen_ = doc.at("frozen").get<bool>();
    trained_ = doc.at("trained").get<bool>();
    memory_ = doc.at("memory").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("memorizer: corrupt payload: ") + e.what());
  }
}

std::unique_ptr<Backend> MemorizerBackend::clone() const {
  return std::make_unique<MemorizerBackend>(*this);
}

nlohmann::json MemorizerBackend::describe() const {
  return {{"stored_pairs", memory_.size()}};
}

}  // namespace darepair::backend
