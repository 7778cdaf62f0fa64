#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace vital {

/// Parses one JSON value per non-blank line. Throws ParseError naming the
/// 1-based line on malformed input, IntegrityError when the file is missing.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
std::vector<nlohmann::json> parse_jsonl(std::istream& in);

/// Compact single-line dump with a trailing newline. Deterministic: keys
/// are sorted and doubles use the shortest round-trip form.
std::string to_jsonl_line(const nlohmann::json& j);

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);
  void write(const nlohmann::json& j);
  void flush();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

/// Reads a whole JSON document. Same error mapping as read_jsonl.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace vital
