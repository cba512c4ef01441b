#include "darepair/da/embedding.hpp"

#include <cmath>

#include "darepair/common/error.hpp"
#include "darepair/common/hash.hpp"
#include "darepair/common/rng.hpp"
#include "darepair/common/text.hpp"

namespace darepair::da {

EmbedFn hashed_bag_of_tokens(int dim) {
  if (dim < 1) throw Error("embedding dimension must be >= 1");
  return [dim](const std::string& line) {
    std::vector<double> vec(static_cast<size_t>(dim), 0.0);
    for (const std::string& token : split_whitespace(line)) {
      vec[fnv1a(token) % static_cast<uint64_t>(dim)] += 1.0;
    }
    return vec;
  };
}

std::vector<double> source_centroid(const std::vector<std::string>& source_lines,
                                    const EmbedFn& embed, size_t subsample, uint64_t seed) {
  if (source_lines.empty()) throw Error("source_centroid: no source lines");
  std::vector<std::string> lines = source_lines;
  if (lines.size() > subsample) {
    seeded_shuffle(lines, sub_seed(seed, "centroid"));
    lines.resize(subsample);
  }
  std::vector<double> centroid = embed(lines.front());
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<double> v = embed(lines[i]);
    if (v.size() != centroid.size()) throw Error("embedding dimension changed between lines");
    for (size_t k = 0; k < centroid.size(); ++k) centroid[k] += v[k];
  }
  for (double& x : centroid) x /= static_cast<double>(lines.size());
  return centroid;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace darepair::da
