#include "darepair/corpus/sample.hpp"

#include "darepair/common/error.hpp"
#include "darepair/common/text.hpp"

namespace darepair::corpus {

Sample validate_sample(Sample sample) {
  if (sample.id.empty()) throw SchemaError("sample has empty id");
  if (sample.buggy_line.empty())
    throw SchemaError("sample '" + sample.id + "': buggy_line is empty");
  if (sample.fixed_line.empty())
    throw SchemaError("sample '" + sample.id + "': fixed_line is empty");
  sample.token_count = whitespace_token_count(sample.buggy_line);
  return sample;
}

Corpus::Corpus(std::vector<Sample> samples) {
  samples_.reserve(samples.size());
  for (auto& s : samples) {
    Sample validated = validate_sample(std::move(s));
    auto [it, inserted] = by_id_.emplace(validated.id, samples_.size());
    if (!inserted) throw SchemaError("duplicate sample id '" + validated.id + "'");
    samples_.push_back(std::move(validated));
  }
  for (size_t pos = 0; pos < samples_.size(); ++pos) {
    const Sample& s = samples_[pos];
    by_project_[s.project_id].push_back(pos);
    by_project_error_type_[s.project_id][s.error_type].push_back(pos);
  }
}

const Sample* Corpus::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &samples_[it->second];
}

const Sample& Corpus::by_id(const std::string& id) const {
  const Sample* s = find(id);
  if (!s) throw Error("unknown sample id '" + id + "'");
  return *s;
}

std::vector<std::string> Corpus::project_ids() const {
  std::vector<std::string> ids;
  ids.reserve(by_project_.size());
  for (const auto& [pid, _] : by_project_) ids.push_back(pid);
  return ids;
}

const std::vector<size_t>& Corpus::project_positions(const std::string& project_id) const {
  static const std::vector<size_t> kEmpty;
  auto it = by_project_.find(project_id);
  return it == by_project_.end() ? kEmpty : it->second;
}

const std::map<std::string, std::vector<size_t>>& Corpus::error_type_positions(
    const std::string& project_id) const {
  static const std::map<std::string, std::vector<size_t>> kEmpty;
  auto it = by_project_error_type_.find(project_id);
  return it == by_project_error_type_.end() ? kEmpty : it->second;
}

std::vector<Sample> Corpus::project_samples(const std::string& project_id) const {
  std::vector<Sample> out;
  for (size_t pos : project_positions(project_id)) out.push_back(samples_[pos]);
  return out;
}

}  // namespace darepair::corpus
