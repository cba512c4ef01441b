#pragma once

#include <string>

#include "darepair/corpus/sample.hpp"

namespace darepair::corpus {

/// Repair-direction model input:
///   "fix <error_type> <error_message> <buggy_line> : <context>"
/// Empty message/context segments are dropped with single-space separation.
std::string format_repair_input(const Sample& sample);

/// The repair generation target is the fixed line alone.
std::string repair_target(const Sample& sample);

/// Bug-injection model input:
///   "bug <error_type> <clean_line> <context>"
/// An empty error_type yields the metadata-free variant "bug <clean_line> ...".
std::string format_bug_input(const std::string& clean_line, const std::string& context,
                             const std::string& error_type);

}  // namespace darepair::corpus
