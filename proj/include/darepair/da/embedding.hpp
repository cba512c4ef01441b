#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace darepair::da {

/// Maps a code line to a fixed-dimension vector. Pluggable so a pretrained
/// code encoder can replace the default.
using EmbedFn = std::function<std::vector<double>(const std::string&)>;

/// Default embedding: token counts hashed into `dim` buckets. Needs no
/// pretrained encoder and is deterministic.
EmbedFn hashed_bag_of_tokens(int dim = 256);

/// Mean embedding over a seeded subsample (at most `subsample` lines) of the
/// source-train buggy lines.
std::vector<double> source_centroid(const std::vector<std::string>& source_lines,
                                    const EmbedFn& embed, size_t subsample = 1000,
                                    uint64_t seed = 0);

/// Cosine similarity; 0 when either vector has zero norm (flagged by caller).
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace darepair::da
