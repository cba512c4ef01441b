#include "darepair/backend/checkpoint.hpp"

#include <chrono>
#include <fstream>

#include "darepair/backend/factory.hpp"
#include "darepair/common/error.hpp"
#include "darepair/common/hash.hpp"

namespace darepair::backend {

namespace {

namespace fs = std::filesystem;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

uint64_t save_checkpoint(const Backend& model, const fs::path& dir, const nlohmann::json& tags) {
  fs::create_directories(dir);

  nlohmann::json inventory = nlohmann::json::array();
  for (const auto& group : model.parameter_inventory()) {
    inventory.push_back({{"name", group.name},
                         {"elements", group.elements},
                         {"frozen", group.frozen},
                         {"checksum", to_hex(group.checksum)}});
  }
  nlohmann::json manifest{{"backend", model.backend_id()},
                          {"seed", model.seed()},
                          {"created_at", iso_timestamp()},
                          {"parameter_inventory", inventory},
                          {"extra", model.describe()},
                          {"tags", tags}};
  {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw Error("cannot write manifest to '" + dir.string() + "'");
    out << manifest.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "payload.bin", std::ios::binary);
    if (!out) throw Error("cannot write payload to '" + dir.string() + "'");
    model.serialize(out);
  }
  return checkpoint_size_bytes(dir);
}

std::unique_ptr<Backend> load_checkpoint(const fs::path& dir) {
  nlohmann::json manifest = read_manifest(dir);
  std::string backend_id;
  uint64_t seed = 0;
  try {
    backend_id = manifest.at("backend").get<std::string>();
    seed = manifest.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint manifest is corrupt: " + std::string(e.what()));
  }
  std::unique_ptr<Backend> model = make_backend(backend_id, seed);
  std::ifstream in(dir / "payload.bin", std::ios::binary);
  if (!in) throw Error("checkpoint payload missing in '" + dir.string() + "'");
  model->deserialize(in);
  return model;
}

nlohmann::json read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error("checkpoint manifest missing in '" + dir.string() + "'");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("checkpoint manifest is corrupt: " + std::string(e.what()));
  }
  return manifest;
}

uint64_t checkpoint_size_bytes(const fs::path& dir) {
  uint64_t total = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) total += entry.file_size();
  }
  return total;
}

}  // namespace darepair::backend
