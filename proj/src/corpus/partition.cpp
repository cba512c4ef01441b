#include "darepair/corpus/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "darepair/common/error.hpp"
#include "darepair/common/rng.hpp"

namespace darepair::corpus {

namespace {

using nlohmann::json;

// ceil/floor of ratio*n with a guard against the ratio's binary representation
// nudging an exact integer across the rounding boundary.
long long ceil_ratio(double ratio, long long n) {
  return static_cast<long long>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
}

long long floor_ratio(double ratio, long long n) {
  return static_cast<long long>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

}  // namespace

ProjectSelection select_target_projects(const Corpus& corpus, int min_samples, int stride,
                                        std::vector<std::string>* warnings) {
  if (min_samples < 1) throw ConfigError("min_samples must be >= 1");
  if (stride < 2) throw ConfigError("stride must be >= 2");

  struct Ranked {
    std::string project_id;
    size_t size;
  };
  std::vector<Ranked> eligible;
  std::vector<std::string> all_projects = corpus.project_ids();
  for (const auto& pid : all_projects) {
    size_t n = corpus.project_positions(pid).size();
    if (n >= static_cast<size_t>(min_samples)) eligible.push_back({pid, n});
  }
  std::sort(eligible.begin(), eligible.end(), [](const Ranked& a, const Ranked& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.project_id < b.project_id;
  });

  if (eligible.empty() && warnings) {
    warnings->push_back("no project has at least " + std::to_string(min_samples) +
                        " samples; target set is empty");
  }

  ProjectSelection selection;
  std::vector<bool> is_target(eligible.size(), false);
  for (size_t rank = static_cast<size_t>(stride); rank <= eligible.size();
       rank += static_cast<size_t>(stride)) {
    is_target[rank - 1] = true;
    selection.target_projects.push_back(eligible[rank - 1].project_id);
  }
  for (const auto& pid : all_projects) {
    bool target = false;
    for (size_t i = 0; i < eligible.size(); ++i) {
      if (is_target[i] && eligible[i].project_id == pid) {
        target = true;
        break;
      }
    }
    if (!target) selection.source_projects.push_back(pid);
  }
  return selection;
}

SplitIds split_project(const std::vector<Sample>& samples, double test_ratio,
                       double validation_ratio, uint64_t seed) {
  if (!(test_ratio > 0.0 && test_ratio < 1.0))
    throw ConfigError("test_ratio must be in (0, 1)");
  if (!(validation_ratio >= 0.0 && validation_ratio < 1.0))
    throw ConfigError("validation_ratio must be in [0, 1)");

  SplitIds splits;
  if (samples.empty()) return splits;
  const std::string project_id = samples.front().project_id;

  std::map<std::string, std::vector<std::string>> by_type;
  for (const Sample& s : samples) by_type[s.error_type].push_back(s.id);

  std::vector<std::string> pool;
  for (auto& [error_type, ids] : by_type) {
    std::sort(ids.begin(), ids.end());
    seeded_shuffle(ids, sub_seed(seed, project_id, error_type));
    auto n_test = static_cast<size_t>(ceil_ratio(test_ratio, static_cast<long long>(ids.size())));
    for (size_t i = 0; i < ids.size(); ++i) {
      (i < n_test ? splits.test : pool).push_back(ids[i]);
    }
  }

  seeded_shuffle(pool, sub_seed(seed, project_id, "validation"));
  auto n_val =
      static_cast<size_t>(floor_ratio(validation_ratio, static_cast<long long>(pool.size())));
  for (size_t i = 0; i < pool.size(); ++i) {
    (i < n_val ? splits.validation : splits.train).push_back(pool[i]);
  }
  return splits;
}

const SplitIds& CorpusPartition::splits_for(const std::string& project_id) const {
  auto it = project_splits.find(project_id);
  if (it == project_splits.end())
    throw Error("partition has no project '" + project_id + "'");
  return it->second;
}

CorpusPartition build_partition(const Corpus& corpus, int min_samples, int stride,
                                SplitRatios ratios, uint64_t seed,
                                std::vector<std::string>* warnings) {
  ProjectSelection selection = select_target_projects(corpus, min_samples, stride, warnings);

  CorpusPartition partition;
  partition.source_projects = selection.source_projects;
  partition.target_projects = selection.target_projects;

  for (const auto& pid : corpus.project_ids()) {
    partition.project_splits[pid] =
        split_project(corpus.project_samples(pid), ratios.test, ratios.validation,
                      seed);
  }
  for (const auto& pid : partition.source_projects) {
    const SplitIds& s = partition.project_splits.at(pid);
    partition.source.train.insert(partition.source.train.end(), s.train.begin(), s.train.end());
    partition.source.validation.insert(partition.source.validation.end(), s.validation.begin(),
                                       s.validation.end());
    partition.source.test.insert(partition.source.test.end(), s.test.begin(), s.test.end());
  }
  return partition;
}

void write_partition(const CorpusPartition& partition, const std::filesystem::path& path) {
  json projects = json::object();
  for (const auto& [pid, splits] : partition.project_splits) {
    projects[pid] = {{"train", splits.train},
                     {"validation", splits.validation},
                     {"test", splits.test}};
  }
  json doc{{"source_projects", partition.source_projects},
           {"target_projects", partition.target_projects},
           {"source",
            {{"train", partition.source.train},
             {"validation", partition.source.validation},
             {"test", partition.source.test}}},
           {"projects", projects}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write partition file '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

CorpusPartition read_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open partition file '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("partition file: ") + e.what());
  }
  try {
    CorpusPartition partition;
    partition.source_projects = doc.at("source_projects").get<std::vector<std::string>>();
    partition.target_projects = doc.at("target_projects").get<std::vector<std::string>>();
    auto read_splits = [](const json& j) {
      SplitIds s;
      s.train = j.at("train").get<std::vector<std::string>>();
      s.validation = j.at("validation").get<std::vector<std::string>>();
      s.test = j.at("test").get<std::vector<std::string>>();
      return s;
    };
    partition.source = read_splits(doc.at("source"));
    for (const auto& [pid, splits] : doc.at("projects").items()) {
      partition.project_splits[pid] = read_splits(splits);
    }
    return partition;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("partition file: ") + e.what());
  }
}

ScenarioKind scenario_from_id(std::string_view id) {
  if (id == "included") return ScenarioKind::included;
  if (id == "excluded") return ScenarioKind::excluded;
  throw ConfigError("unknown scenario '" + std::string(id) + "'");
}

std::string scenario_id(ScenarioKind kind) {
  return kind == ScenarioKind::included ? "included" : "excluded";
}

ScenarioCorpus build_scenario(const CorpusPartition& partition, ScenarioKind kind) {
  ScenarioCorpus scenario;
  scenario.kind = kind;
  scenario.training_samples = partition.source.train;
  scenario.validation_samples = partition.source.validation;
  if (kind == ScenarioKind::included) {
    for (const auto& pid : partition.target_projects) {
      const SplitIds& s = partition.splits_for(pid);
      scenario.training_samples.insert(scenario.training_samples.end(), s.train.begin(),
                                       s.train.end());
      scenario.validation_samples.insert(scenario.validation_samples.end(), s.validation.begin(),
                                         s.validation.end());
    }
  }
  return scenario;
}

}  // namespace darepair::corpus
