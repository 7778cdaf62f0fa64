#include "vital/qa.hpp"

#include <cmath>
#include <regex>
#include <set>

#include "vital/error.hpp"
#include "vital/jsonl.hpp"

namespace vital {

using nlohmann::json;

void QAExample::validate() const {
  if (id.empty()) throw IntegrityError("QA example without id");
  const std::string a = normalize_answer(answer);
  if (qtype == QType::single_verify && a != "yes" && a != "no") {
    throw IntegrityError("verify example " + id + " must answer yes or no");
  }
  if (qtype == QType::single_choose) {
    bool found = false;
    for (const auto& o : options) found = found || normalize_answer(o) == a;
    if (!found) throw IntegrityError("choose example " + id + " answer is not one of its options");
  }
}

Query QAExample::to_query() const {
  Query q;
  q.text = question;
  q.locator = locator;
  q.tier = tier;
  q.qtype = qtype;
  q.options = options;
  if (!target.empty()) q.target = target;
  return q;
}

void to_json(json& j, const QAExample& e) {
  j = {{"id", e.id},
       {"dataset", e.dataset},
       {"tier", std::string(to_string(e.tier))},
       {"qtype", std::string(to_string(e.qtype))},
       {"question", e.question},
       {"options", e.options},
       {"answer", e.answer},
       {"target", e.target},
       {"locator", e.locator}};
}

void from_json(const json& j, QAExample& e) {
  j.at("id").get_to(e.id);
  j.at("dataset").get_to(e.dataset);
  e.tier = parse_tier(j.at("tier").get<std::string>());
  e.qtype = parse_qtype(j.at("qtype").get<std::string>());
  j.at("question").get_to(e.question);
  e.options = j.value("options", std::vector<std::string>{});
  if (j.at("answer").is_number()) {
    e.answer = j["answer"].dump();
  } else {
    j.at("answer").get_to(e.answer);
  }
  e.target = j.value("target", std::string{});
  j.at("locator").get_to(e.locator);
  e.validate();
}

void to_json(json& j, const Prediction& p) { j = {{"id", p.id}, {"answer", p.answer}}; }

void from_json(const json& j, Prediction& p) {
  j.at("id").get_to(p.id);
  if (j.at("answer").is_string()) {
    j["answer"].get_to(p.answer);
  } else {
    p.answer = j["answer"].dump();
  }
}

std::vector<QAExample> read_qa_file(const std::filesystem::path& path) {
  std::vector<QAExample> out;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    try {
      out.push_back(j.get<QAExample>());
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ": " + e.what(), line);
    }
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    try {
      out.push_back(j.get<Prediction>());
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ": " + e.what(), line);
    }
  }
  return out;
}

void to_json(json& j, const ScoringConfig& c) { j = {{"abs_tol", c.abs_tol}, {"rel_tol", c.rel_tol}}; }

void from_json(const json& j, ScoringConfig& c) {
  c.abs_tol = j.value("abs_tol", c.abs_tol);
  c.rel_tol = j.value("rel_tol", c.rel_tol);
  if (c.abs_tol < 0 || c.rel_tol < 0) throw ConfigError("scoring tolerances must be non-negative");
}

std::optional<double> parse_first_number(std::string_view text) {
  static const std::regex num(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)");
  std::cmatch m;
  if (!std::regex_search(text.data(), text.data() + text.size(), m, num)) return std::nullopt;
  const double v = std::strtod(m.str(0).c_str(), nullptr);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::string normalize_answer(std::string_view text) {
  std::string s = normalize_text(text);
  while (!s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == ',')) s.pop_back();
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

bool answer_correct(const QAExample& gold, std::string_view predicted, const ScoringConfig& cfg) {
  const std::string pred = normalize_answer(predicted);
  const std::string want = normalize_answer(gold.answer);
  switch (gold.qtype) {
    case QType::single_verify:
    case QType::single_choose:
      return pred == want;
    case QType::single_query: {
      const auto g = parse_first_number(gold.answer);
      if (!g) return pred == want;
      const auto p = parse_first_number(predicted);
      if (!p) return false;
      return std::abs(*p - *g) <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(*g));
    }
  }
  return false;
}

void to_json(json& j, const QAReport& r) {
  auto cell = [](const CellScore& c) {
    return json{{"correct", c.correct}, {"total", c.total}, {"accuracy", c.accuracy()}};
  };
  json cells = json::object();
  for (const auto& [key, c] : r.by_cell) {
    cells[std::string(to_string(key.first)) + "/" + std::string(to_string(key.second))] = cell(c);
  }
  json tiers = json::object();
  for (const auto& [t, c] : r.by_tier) tiers[std::string(to_string(t))] = cell(c);
  j = {{"overall", cell(r.overall)},
       {"by_tier", tiers},
       {"by_tier_qtype", cells},
       {"config", r.config},
       {"incorrect_ids", r.incorrect_ids}};
}

QAReport score_qa(std::span<const QAExample> examples, std::span<const Prediction> predictions,
                  const ScoringConfig& cfg) {
  std::map<std::string, const Prediction*> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.id, &p).second) throw IntegrityError("duplicate prediction id: " + p.id);
  }
  std::set<std::string> seen;
  QAReport r;
  r.config = cfg;
  for (const auto& e : examples) {
    if (!seen.insert(e.id).second) throw IntegrityError("duplicate example id: " + e.id);
    auto it = by_id.find(e.id);
    if (it == by_id.end()) throw IntegrityError("no prediction for example " + e.id);
    const bool ok = answer_correct(e, it->second->answer, cfg);
    for (CellScore* c : {&r.overall, &r.by_cell[{e.tier, e.qtype}], &r.by_tier[e.tier]}) {
      ++c->total;
      if (ok) ++c->correct;
    }
    if (!ok) r.incorrect_ids.push_back(e.id);
  }
  for (const auto& [id, p] : by_id) {
    if (!seen.count(id)) throw IntegrityError("prediction for unknown example " + id);
  }
  return r;
}

}  // namespace vital
