#pragma once

#include "darepair/adapter/adapter.hpp"
#include "darepair/backend/model.hpp"

namespace darepair::adapter {

/// Installs one adapter per insertion point (spec's list, or every point the
/// backend exposes when the list is empty). Down-projections are seeded per
/// point; up-projections start at zero so model outputs are unchanged until
/// the adapters are tuned. Throws on unknown points or a backend without
/// insertion support.
void insert_adapters(backend::Backend& model, const AdapterSpec& spec, int feature_dim);

/// The spec with insertion points resolved against the backend.
AdapterSpec resolve_spec(const backend::Backend& model, AdapterSpec spec);

}  // namespace darepair::adapter
