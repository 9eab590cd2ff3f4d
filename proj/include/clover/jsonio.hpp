#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace clover::util {

using json = nlohmann::json;

// All writers go through an atomic temp-file-plus-rename so an interrupted
// run never leaves a half-written artifact behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void write_json_atomic(const std::filesystem::path& path, const json& j);

json read_json(const std::filesystem::path& path);

// JSONL: one JSON object per line.
std::vector<json> read_jsonl(const std::filesystem::path& path);

void write_jsonl_atomic(const std::filesystem::path& path, const std::vector<json>& rows);

// Fixed-format double rendering for CSV output, so reports are byte-stable.
std::string format_double(double v, int precision = 9);

std::string csv_join(const std::vector<std::string>& cells);

}  // namespace clover::util
