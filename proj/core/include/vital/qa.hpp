#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vital/query.hpp"

namespace vital {

struct QAExample {
  std::string id;
  Dataset dataset = Dataset::synthetic;
  Tier tier = Tier::A;
  QType qtype = QType::single_query;
  std::string question;
  std::vector<std::string> options;
  std::string answer;
  std::string target;
  WindowLocator locator;

  /// Throws IntegrityError when the answer does not fit the qtype.
  void validate() const;
  Query to_query() const;
  bool operator==(const QAExample&) const = default;
};

void to_json(nlohmann::json& j, const QAExample& e);
void from_json(const nlohmann::json& j, QAExample& e);

struct Prediction {
  std::string id;
  std::string answer;
  bool operator==(const Prediction&) const = default;
};

void to_json(nlohmann::json& j, const Prediction& p);
void from_json(const nlohmann::json& j, Prediction& p);

std::vector<QAExample> read_qa_file(const std::filesystem::path& path);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

struct ScoringConfig {
  double abs_tol = 2.0;
  double rel_tol = 0.05;
};

void to_json(nlohmann::json& j, const ScoringConfig& c);
void from_json(const nlohmann::json& j, ScoringConfig& c);

/// First decimal number in the text ("about 72.5 bpm" -> 72.5).
std::optional<double> parse_first_number(std::string_view text);

/// Normalized text with trailing sentence punctuation removed.
std::string normalize_answer(std::string_view text);

/// Scores one prediction. Never throws; unparseable numbers are wrong.
bool answer_correct(const QAExample& gold, std::string_view predicted, const ScoringConfig& cfg = {});

struct CellScore {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

struct QAReport {
  CellScore overall;
  std::map<std::pair<Tier, QType>, CellScore> by_cell;
  std::map<Tier, CellScore> by_tier;
  ScoringConfig config;
  std::vector<std::string> incorrect_ids;
};

void to_json(nlohmann::json& j, const QAReport& r);

/// One prediction per example, matched by id. Duplicate, missing or extra
/// ids raise IntegrityError.
QAReport score_qa(std::span<const QAExample> examples, std::span<const Prediction> predictions,
                  const ScoringConfig& cfg = {});

}  // namespace vital
