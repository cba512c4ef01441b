#pragma once

#include <filesystem>
#include <string_view>

#include "darepair/corpus/sample.hpp"

namespace darepair::corpus {

/// Dataset flavor chosen at load time. Line-level records carry detector
/// metadata and context; function-level records (ids, whole-declaration
/// "lines") leave error_message and context empty.
enum class DatasetFormat { line_level, function_level };

DatasetFormat dataset_format_from_id(std::string_view id);  // "line-level" / "function-level"
std::string dataset_format_id(DatasetFormat format);

/// Loads a JSON-lines dataset. Each record must carry exactly the fields
/// id, project_id, error_type, error_message, buggy_line, fixed_line,
/// context (all strings) plus an optional provenance object. Malformed JSON
/// raises ParseError naming the line; missing/mistyped fields raise
/// SchemaError.
Corpus load_corpus(const std::filesystem::path& path, DatasetFormat format);

/// Writes the same JSON-lines schema (provenance emitted when present).
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace darepair::corpus
