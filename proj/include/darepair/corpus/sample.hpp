#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace darepair::corpus {

/// Origin of a synthesized sample; real samples carry none.
struct Provenance {
  std::string generator_id;
  double confidence = 0.0;

  bool operator==(const Provenance&) const = default;
};

/// One bug-fix pair. buggy_line/fixed_line are single code lines; context is
/// the surrounding lines and may be empty, as may error_message.
struct Sample {
  std::string id;
  std::string project_id;
  std::string error_type;
  std::string error_message;
  std::string buggy_line;
  std::string fixed_line;
  std::string context;
  int token_count = 0;  // whitespace tokens of buggy_line, recomputable
  std::optional<Provenance> provenance;

  bool operator==(const Sample&) const = default;
};

/// Recomputes token_count and checks the per-sample invariants
/// (non-empty buggy/fixed line). Throws SchemaError on violation.
Sample validate_sample(Sample sample);

/// An immutable, indexed collection of samples. Construction validates
/// id uniqueness and populates token counts.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Sample> samples);

  size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::vector<Sample>& samples() const { return samples_; }

  const Sample* find(const std::string& id) const;
  const Sample& by_id(const std::string& id) const;  // throws if absent

  /// Project ids in sorted order.
  std::vector<std::string> project_ids() const;

  /// Positions (into samples()) of one project's samples, in corpus order.
  const std::vector<size_t>& project_positions(const std::string& project_id) const;

  /// Per-error-type groups of one project, keyed by error type (sorted).
  const std::map<std::string, std::vector<size_t>>& error_type_positions(
      const std::string& project_id) const;

  std::vector<Sample> project_samples(const std::string& project_id) const;

 private:
  std::vector<Sample> samples_;
  std::map<std::string, size_t> by_id_;
  std::map<std::string, std::vector<size_t>> by_project_;
  std::map<std::string, std::map<std::string, std::vector<size_t>>> by_project_error_type_;
};

}  // namespace darepair::corpus
