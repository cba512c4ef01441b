#pragma once

#include <string>
#include <vector>

namespace darepair::eval {

enum class MatchMode { collapse_whitespace, strict };

MatchMode match_mode_from_id(std::string_view id);  // "collapse" / "strict"
std::string match_mode_id(MatchMode mode);

/// True when prediction and reference are equal after trimming and collapsing
/// internal whitespace runs (default), or byte-equal in strict mode.
bool exact_match(const std::string& prediction, const std::string& reference,
                 MatchMode mode = MatchMode::collapse_whitespace);

struct ProjectResult {
  std::string project_id;
  int n_test = 0;
  double exact_match_pct = 0.0;
  double mean_inference_s = 0.0;
};

struct Aggregates {
  double weighted_average = 0.0;  // test-count weighted mean of project ems
  double average = 0.0;
  double median = 0.0;  // even count: mean of the two middle values
};

Aggregates aggregate(const std::vector<ProjectResult>& results);

}  // namespace darepair::eval
