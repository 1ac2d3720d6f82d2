#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace traitlab {

/// Parses one JSON object per non-empty line; throws std::runtime_error with
/// file:line context on malformed lines.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

/// Writes via a temp file in the same directory, then renames into place, so
/// readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

void write_jsonl_atomic(const std::filesystem::path& path,
                        const std::vector<std::string>& lines);

}  // namespace traitlab
