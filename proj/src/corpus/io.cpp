#include "darepair/corpus/io.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "darepair/common/error.hpp"

namespace darepair::corpus {

namespace {

using nlohmann::json;

std::string require_string(const json& record, const char* field, size_t line_no,
                           bool required) {
  auto it = record.find(field);
  if (it == record.end()) {
    if (!required) return {};
    throw SchemaError("line " + std::to_string(line_no) + ": missing field '" + field + "'");
  }
  if (!it->is_string())
    throw SchemaError("line " + std::to_string(line_no) + ": field '" + field +
                      "' must be a string");
  return it->get<std::string>();
}

}  // namespace

DatasetFormat dataset_format_from_id(std::string_view id) {
  if (id == "line-level") return DatasetFormat::line_level;
  if (id == "function-level") return DatasetFormat::function_level;
  throw ConfigError("unknown dataset format '" + std::string(id) + "'");
}

std::string dataset_format_id(DatasetFormat format) {
  return format == DatasetFormat::line_level ? "line-level" : "function-level";
}

Corpus load_corpus(const std::filesystem::path& path, DatasetFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file '" + path.string() + "'");

  static const char* kFields[] = {"id",         "project_id", "error_type", "error_message",
                                  "buggy_line", "fixed_line", "context"};
  const bool line_level = format == DatasetFormat::line_level;

  std::vector<Sample> samples;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!record.is_object())
      throw SchemaError("line " + std::to_string(line_no) + ": record is not an object");
    for (const auto& [key, _] : record.items()) {
      bool known = key == "provenance";
      for (const char* f : kFields) known = known || key == f;
      if (!known)
        throw SchemaError("line " + std::to_string(line_no) + ": unknown field '" + key + "'");
    }

    Sample s;
    s.id = require_string(record, "id", line_no, true);
    s.project_id = require_string(record, "project_id", line_no, true);
    s.error_type = require_string(record, "error_type", line_no, true);
    s.buggy_line = require_string(record, "buggy_line", line_no, true);
    s.fixed_line = require_string(record, "fixed_line", line_no, true);
    // Function-level corpora have no detector message or context.
    s.error_message = line_level ? require_string(record, "error_message", line_no, true) : "";
    s.context = line_level ? require_string(record, "context", line_no, true) : "";

    if (auto it = record.find("provenance"); it != record.end()) {
      if (!it->is_object() || !it->contains("generator_id"))
        throw SchemaError("line " + std::to_string(line_no) + ": malformed provenance");
      Provenance p;
      p.generator_id = it->at("generator_id").get<std::string>();
      p.confidence = it->value("confidence", 0.0);
      s.provenance = p;
    }
    samples.push_back(std::move(s));
  }
  return Corpus(std::move(samples));
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset file '" + path.string() + "'");
  for (const Sample& s : corpus.samples()) {
    json record{{"id", s.id},
                {"project_id", s.project_id},
                {"error_type", s.error_type},
                {"error_message", s.error_message},
                {"buggy_line", s.buggy_line},
                {"fixed_line", s.fixed_line},
                {"context", s.context}};
    if (s.provenance) {
      record["provenance"] = {{"generator_id", s.provenance->generator_id},
                              {"confidence", s.provenance->confidence}};
    }
    out << record.dump() << '\n';
  }
}

}  // namespace darepair::corpus
