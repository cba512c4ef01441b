#include "darepair/corpus/format.hpp"

#include "darepair/common/error.hpp"

namespace darepair::corpus {

namespace {

void append_segment(std::string& out, const std::string& segment) {
  if (segment.empty()) return;
  if (!out.empty()) out.push_back(' ');
  out.append(segment);
}

}  // namespace

std::string format_repair_input(const Sample& sample) {
  std::string out = "fix";
  append_segment(out, sample.error_type);
  append_segment(out, sample.error_message);
  append_segment(out, sample.buggy_line);
  append_segment(out, ":");
  append_segment(out, sample.context);
  return out;
}

std::string repair_target(const Sample& sample) { return sample.fixed_line; }

std::string format_bug_input(const std::string& clean_line, const std::string& context,
                             const std::string& error_type) {
  if (clean_line.empty()) throw Error("format_bug_input: clean_line is empty");
  std::string out = "bug";
  append_segment(out, error_type);
  append_segment(out, clean_line);
  append_segment(out, context);
  return out;
}

}  // namespace darepair::corpus
