#include "vital/jsonl.hpp"

#include "vital/error.hpp"

namespace vital {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IntegrityError("cannot open " + path.string());
  return in;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

std::vector<nlohmann::json> parse_jsonl(std::istream& in) {
  std::vector<nlohmann::json> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (blank(line)) continue;
    try {
      rows.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), n);
    }
  }
  return rows;
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return parse_jsonl(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string to_jsonl_line(const nlohmann::json& j) { return j.dump() + "\n"; }

JsonlWriter::JsonlWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw IntegrityError("cannot write " + path.string());
}

void JsonlWriter::write(const nlohmann::json& j) {
  out_ << to_jsonl_line(j);
  if (!out_) throw IntegrityError("write failed: " + path_.string());
}

void JsonlWriter::flush() { out_.flush(); }

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows) {
  JsonlWriter w(path);
  for (const auto& r : rows) w.write(r);
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IntegrityError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace vital
