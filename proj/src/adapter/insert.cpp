#include "darepair/adapter/insert.hpp"

#include "darepair/common/error.hpp"
#include "darepair/common/rng.hpp"

namespace darepair::adapter {

AdapterSpec resolve_spec(const backend::Backend& model, AdapterSpec spec) {
  std::vector<std::string> available = model.adapter_insertion_points();
  if (available.empty())
    throw Error("backend '" + model.backend_id() + "' exposes no adapter insertion points");
  if (spec.insertion_points.empty()) {
    spec.insertion_points = available;
    return spec;
  }
  for (const auto& point : spec.insertion_points) {
    if (std::find(available.begin(), available.end(), point) == available.end())
      throw Error("unknown adapter insertion point '" + point + "'");
  }
  return spec;
}

void insert_adapters(backend::Backend& model, const AdapterSpec& spec, int feature_dim) {
  AdapterSpec resolved = resolve_spec(model, spec);
  int bottleneck = resolve_bottleneck_dim(resolved, feature_dim);
  for (const auto& point : resolved.insertion_points) {
    model.install_adapter(
        point, AdapterLayer::make(feature_dim, bottleneck, sub_seed(resolved.init_seed, point)));
  }
}

}  // namespace darepair::adapter
