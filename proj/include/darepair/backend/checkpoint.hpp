#pragma once

#include <filesystem>
#include <memory>

#include <json.hpp>

#include "darepair/backend/model.hpp"

namespace darepair::backend {

/// Writes <dir>/manifest.json plus <dir>/payload.bin and returns the total
/// on-disk byte count. tags are free-form entries merged into the manifest
/// (scenario, method, ...).
uint64_t save_checkpoint(const Backend& model, const std::filesystem::path& dir,
                         const nlohmann::json& tags = nlohmann::json::object());

std::unique_ptr<Backend> load_checkpoint(const std::filesystem::path& dir);

nlohmann::json read_manifest(const std::filesystem::path& dir);

/// Recursive byte count of a checkpoint directory.
uint64_t checkpoint_size_bytes(const std::filesystem::path& dir);

}  // namespace darepair::backend
