#include "darepair/da/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "darepair/common/error.hpp"
#include "darepair/corpus/format.hpp"

namespace darepair::da {

double score_length(const corpus::Sample& sample) {
  return static_cast<double>(sample.token_count);
}

double score_confidence(const backend::Backend& pretrained, const corpus::Sample& sample,
                        std::vector<std::string>* warnings) {
  try {
    return -pretrained.generate(corpus::format_repair_input(sample)).confidence;
  } catch (const std::exception& e) {
    if (warnings)
      warnings->push_back("confidence scoring failed for sample '" + sample.id +
                          "' (" + e.what() + "); ranked hardest");
    return std::numeric_limits<double>::infinity();
  }
}

double score_similarity(const corpus::Sample& sample, const std::vector<double>& source_centroid,
                        const EmbedFn& embed, std::vector<std::string>* warnings) {
  std::vector<double> vec = embed(sample.buggy_line);
  double norm_sq = 0.0;
  for (double x : vec) norm_sq += x * x;
  if (norm_sq == 0.0) {
    if (warnings)
      warnings->push_back("zero-norm embedding for sample '" + sample.id + "'; ranked hardest");
    return std::numeric_limits<double>::infinity();
  }
  return -cosine_similarity(vec, source_centroid);
}

std::vector<double> default_portions() { return {0.35, 0.70, 1.0}; }

int CurriculumPlan::size_for_epoch(int epoch) const {
  if (epoch < 1) throw Error("epoch is 1-based");
  size_t idx = std::min(static_cast<size_t>(epoch - 1), epoch_sizes.size() - 1);
  return epoch_sizes[idx];
}

CurriculumPlan build_curriculum(std::vector<ScoredSample> scores, std::vector<double> portions,
                                int max_epochs, const std::string& scorer_id) {
  if (scores.empty()) throw Error("build_curriculum: no scored samples");
  if (portions.empty()) throw Error("build_curriculum: no portions");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  for (size_t i = 0; i < portions.size(); ++i) {
    if (!(portions[i] > 0.0 && portions[i] <= 1.0))
      throw ConfigError("curriculum portions must lie in (0, 1]");
    if (i > 0 && portions[i] < portions[i - 1])
      throw ConfigError("curriculum portions must be non-decreasing");
  }
  if (portions.back() != 1.0) throw ConfigError("final curriculum portion must be 1.0");

  std::sort(scores.begin(), scores.end(), [](const ScoredSample& a, const ScoredSample& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.id < b.id;
  });

  CurriculumPlan plan;
  plan.scorer = scorer_id;
  plan.portions = portions;
  plan.ordered_samples.reserve(scores.size());
  for (const auto& s : scores) plan.ordered_samples.push_back(s.id);

  const auto n = static_cast<double>(scores.size());
  for (int epoch = 1; epoch <= max_epochs; ++epoch) {
    double portion = portions[std::min<size_t>(static_cast<size_t>(epoch - 1),
                                               portions.size() - 1)];
    plan.epoch_sizes.push_back(
        static_cast<int>(std::ceil(portion * n - 1e-9)));
  }
  return plan;
}

void write_plan(const CurriculumPlan& plan, const std::filesystem::path& path) {
  nlohmann::json doc{{"scorer", plan.scorer},
                     {"portions", plan.portions},
                     {"ordered_samples", plan.ordered_samples},
                     {"epoch_sizes", plan.epoch_sizes}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write curriculum plan '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

CurriculumPlan read_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open curriculum plan '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
    CurriculumPlan plan;
    plan.scorer = doc.at("scorer").get<std::string>();
    plan.portions = doc.at("portions").get<std::vector<double>>();
    plan.ordered_samples = doc.at("ordered_samples").get<std::vector<std::string>>();
    plan.epoch_sizes = doc.at("epoch_sizes").get<std::vector<int>>();
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("curriculum plan: " + std::string(e.what()));
  }
}

}  // namespace darepair::da
