#include "darepair/eval/metrics.hpp"

#include <algorithm>

#include "darepair/common/error.hpp"
#include "darepair/common/text.hpp"

namespace darepair::eval {

MatchMode match_mode_from_id(std::string_view id) {
  if (id == "collapse") return MatchMode::collapse_whitespace;
  if (id == "strict") return MatchMode::strict;
  throw ConfigError("unknown normalization mode '" + std::string(id) + "'");
}

std::string match_mode_id(MatchMode mode) {
  return mode == MatchMode::collapse_whitespace ? "collapse" : "strict";
}

bool exact_match(const std::string& prediction, const std::string& reference, MatchMode mode) {
  if (mode == MatchMode::strict) return prediction == reference;
  return collapse_whitespace(prediction) == collapse_whitespace(reference);
}

Aggregates aggregate(const std::vector<ProjectResult>& results) {
  if (results.empty()) throw Error("aggregate: no project results");
  Aggregates agg;
  double weighted_sum = 0.0;
  double weight = 0.0;
  std::vector<double> ems;
  ems.reserve(results.size());
  for (const auto& r : results) {
    weighted_sum += r.exact_match_pct * r.n_test;
    weight += r.n_test;
    agg.average += r.exact_match_pct;
    ems.push_back(r.exact_match_pct);
  }
  agg.weighted_average = weighted_sum / weight;
  agg.average /= static_cast<double>(results.size());
  std::sort(ems.begin(), ems.end());
  size_t mid = ems.size() / 2;
  agg.median = (ems.size() % 2 == 1) ? ems[mid] : (ems[mid - 1] + ems[mid]) / 2.0;
  return agg;
}

}  // namespace darepair::eval
