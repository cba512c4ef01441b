#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "darepair/corpus/sample.hpp"

namespace darepair::corpus {

struct SplitIds {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;

  bool operator==(const SplitIds&) const = default;
};

struct ProjectSelection {
  std::vector<std::string> source_projects;  // sorted
  std::vector<std::string> target_projects;  // descending-size selection order
};

/// Projects with at least min_samples samples are ranked by descending size
/// (ties by project id); every stride-th ranked project becomes a target.
/// Everything else, including under-threshold projects, stays in the source
/// set. Appends to *warnings when no project meets the threshold.
ProjectSelection select_target_projects(const Corpus& corpus, int min_samples, int stride,
                                        std::vector<std::string>* warnings = nullptr);

struct SplitRatios {
  double test = 0.2;
  double validation = 0.2;
};

/// Stratified split of one project's samples. Per error type with n samples,
/// exactly ceil(test_ratio*n) are drawn (seeded) into test; the remaining
/// samples are pooled and floor(validation_ratio*pool) of them (seeded) form
/// the validation split; the rest train.
SplitIds split_project(const std::vector<Sample>& samples, double test_ratio,
                       double validation_ratio, uint64_t seed);

struct CorpusPartition {
  std::vector<std::string> source_projects;        // sorted
  std::vector<std::string> target_projects;        // selection order
  SplitIds source;                                 // aggregated over source projects
  std::map<std::string, SplitIds> project_splits;  // every project

  const SplitIds& splits_for(const std::string& project_id) const;
};

CorpusPartition build_partition(const Corpus& corpus, int min_samples, int stride,
                                SplitRatios ratios, uint64_t seed,
                                std::vector<std::string>* warnings = nullptr);

/// Partition file round trip (bit-stable JSON: sorted keys, id arrays only).
void write_partition(const CorpusPartition& partition, const std::filesystem::path& path);
CorpusPartition read_partition(const std::filesystem::path& path);

enum class ScenarioKind { included, excluded };

ScenarioKind scenario_from_id(std::string_view id);
std::string scenario_id(ScenarioKind kind);

/// Training corpus for pretraining. Included trains jointly on source-train
/// and every target-train split; excluded trains on source-train only.
struct ScenarioCorpus {
  ScenarioKind kind = ScenarioKind::excluded;
  std::vector<std::string> training_samples;
  std::vector<std::string> validation_samples;
};

ScenarioCorpus build_scenario(const CorpusPartition& partition, ScenarioKind kind);

}  // namespace darepair::corpus
