#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "darepair/backend/model.hpp"
#include "darepair/backend/toy_neural.hpp"

namespace darepair::backend {

/// Known ids: "memorizer", "toy-neural".
std::unique_ptr<Backend> make_backend(const std::string& backend_id, uint64_t seed,
                                      const std::optional<ToyNeuralConfig>& toy_config = {});

ToyNeuralConfig toy_config_from_json(const nlohmann::json& j);
nlohmann::json toy_config_to_json(const ToyNeuralConfig& config);

}  // namespace darepair::backend
