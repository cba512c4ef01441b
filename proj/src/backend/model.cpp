#include "darepair/backend/model.hpp"

#include "darepair/common/error.hpp"

namespace darepair::backend {

void Backend::install_adapter(const std::string& point, adapter::AdapterLayer) {
  throw Error("backend '" + backend_id() + "' does not support adapters (point '" + point +
              "')");
}

uint64_t group_checksum(const Backend& model, const std::string& name) {
  for (const auto& group : model.parameter_inventory()) {
    if (group.name == name) return group.checksum;
  }
  throw Error("no parameter group named '" + name + "'");
}

size_t total_parameter_count(const Backend& model) {
  size_t total = 0;
  for (const auto& group : model.parameter_inventory()) total += group.elements;
  return total;
}

}  // namespace darepair::backend
