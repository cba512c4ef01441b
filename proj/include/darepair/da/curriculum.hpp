#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "darepair/backend/model.hpp"
#include "darepair/corpus/sample.hpp"
#include "darepair/da/embedding.hpp"

namespace darepair::da {

/// Difficulty key; lower = easier. Ties break on sample id.
struct ScoredSample {
  std::string id;
  double key = 0.0;
};

/// Longer lines are harder: key = token count.
double score_length(const corpus::Sample& sample);

/// Less confident predictions are harder: key = -confidence of the pretrained
/// model on the formatted repair input. A failed generation ranks the sample
/// hardest and appends a warning.
double score_confidence(const backend::Backend& pretrained, const corpus::Sample& sample,
                        std::vector<std::string>* warnings = nullptr);

/// Lines far from the source data are harder: key = -cosine(embed(buggy_line),
/// source_centroid). A zero-norm embedding ranks the sample hardest with a
/// warning.
double score_similarity(const corpus::Sample& sample, const std::vector<double>& source_centroid,
                        const EmbedFn& embed, std::vector<std::string>* warnings = nullptr);

/// The percentage of the (easy-to-hard ordered) training data fed in epochs
/// 1, 2, 3... Trailing epochs reuse the final 100%.
std::vector<double> default_portions();

struct CurriculumPlan {
  std::string scorer;  // length | confidence | similarity
  std::vector<double> portions;
  std::vector<std::string> ordered_samples;  // easy -> hard
  std::vector<int> epoch_sizes;              // one per epoch, up to max_epochs

  int size_for_epoch(int epoch) const;  // 1-based
};

/// Orders samples easy-to-hard (key, then id) and derives per-epoch sizes
/// ceil(portion*N). Portions must be non-decreasing, in (0, 1], and end at
/// 1.0.
CurriculumPlan build_curriculum(std::vector<ScoredSample> scores, std::vector<double> portions,
                                int max_epochs, const std::string& scorer_id);

void write_plan(const CurriculumPlan& plan, const std::filesystem::path& path);
CurriculumPlan read_plan(const std::filesystem::path& path);

}  // namespace darepair::da
