#include "vital/qa_generation.hpp"

#include <cstdio>
#include <map>
#include <optional>

#include "vital/responder.hpp"

namespace vital {

const std::vector<QACell>& qa_cells() {
  static const std::vector<QACell> cells{
      {Tier::A, QType::single_query, std::string(targets::hr_current)},
      {Tier::A, QType::single_verify, std::string(targets::af_presence_current)},
      {Tier::A, QType::single_verify, std::string(targets::tachycardia_current)},
      {Tier::A, QType::single_choose, std::string(targets::hr_category_current)},
      {Tier::A, QType::single_query, std::string(targets::sdnn_current)},
      {Tier::B, QType::single_choose, std::string(targets::af_burden)},
      {Tier::B, QType::single_verify, std::string(targets::af_any)},
      {Tier::B, QType::single_query, std::string(targets::max_hr)},
      {Tier::B, QType::single_query, std::string(targets::mean_hr)},
      {Tier::B, QType::single_verify, std::string(targets::hr_increase)},
  };
  return cells;
}

std::string format_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  std::string s = buf;
  if (s.size() > 2 && s.substr(s.size() - 2) == ".0") s.resize(s.size() - 2);
  if (s == "-0") s = "0";
  return s;
}

namespace {

struct Candidate {
  WindowLocator locator;
  Dataset dataset;
  std::string answer;
};

const std::vector<std::string> kCategories{"bradycardia", "normal", "tachycardia"};
const std::vector<std::string> kBuckets{"not at all", "occasionally", "often", "most of the time"};

std::string question_for(const std::string& t) {
  if (t == targets::hr_current) return "What is the heart rate in this window?";
  if (t == targets::af_presence_current) return "Does this window show atrial fibrillation?";
  if (t == targets::tachycardia_current) return "Is there tachycardia (heart rate above 100 bpm) in this window?";
  if (t == targets::hr_category_current) return "Which heart-rate category best describes this window?";
  if (t == targets::sdnn_current) return "What is the SDNN of this window?";
  if (t == targets::af_burden) return "How often was atrial fibrillation present during this monitoring period?";
  if (t == targets::af_any) return "Was atrial fibrillation present at any point during this monitoring period?";
  if (t == targets::max_hr) return "What was the maximum heart rate during this monitoring period?";
  if (t == targets::mean_hr) return "What was the average heart rate during this monitoring period?";
  return "Did the heart rate increase from the start to the end of this monitoring period?";
}

std::vector<std::string> options_for(const std::string& t) {
  if (t == targets::hr_category_current) return kCategories;
  if (t == targets::af_burden) return kBuckets;
  return {};
}

std::optional<std::string> tier_a_answer(const std::string& t, const MonitoringState& s) {
  const bool af_known = s.hidden && s.hidden->rhythm_class;
  if (t == targets::hr_current) return s.hr_bpm ? std::optional(format_decimal(*s.hr_bpm) + " bpm") : std::nullopt;
  if (t == targets::sdnn_current) return s.sdnn_ms ? std::optional(format_decimal(*s.sdnn_ms) + " ms") : std::nullopt;
  if (t == targets::tachycardia_current) {
    if (!s.hr_bpm) return std::nullopt;
    return *s.hr_bpm > kTachycardiaBpm ? "yes" : "no";
  }
  if (t == targets::hr_category_current) return s.hr_bpm ? std::optional(hr_category(*s.hr_bpm)) : std::nullopt;
  if (t == targets::af_presence_current) {
    if (!af_known) return std::nullopt;
    return *s.hidden->rhythm_class == "AF" ? "yes" : "no";
  }
  return std::nullopt;
}

std::optional<std::string> tier_b_answer(const std::string& t, std::span<const MonitoringState> span) {
  if (t == targets::af_burden || t == targets::af_any) {
    std::size_t af = 0;
    for (const auto& s : span) {
      if (!s.hidden || !s.hidden->rhythm_class) return std::nullopt;
      if (*s.hidden->rhythm_class == "AF") ++af;
    }
    if (t == targets::af_any) return af > 0 ? "yes" : "no";
    return af_burden_bucket(static_cast<double>(af) / static_cast<double>(span.size()));
  }
  std::vector<double> hr;
  for (const auto& s : span) {
    if (s.hr_bpm) hr.push_back(*s.hr_bpm);
  }
  if (hr.empty()) return std::nullopt;
  if (t == targets::max_hr) return format_decimal(*std::max_element(hr.begin(), hr.end())) + " bpm";
  if (t == targets::mean_hr) {
    double sum = 0.0;
    for (double v : hr) sum += v;
    return format_decimal(sum / static_cast<double>(hr.size())) + " bpm";
  }
  if (!span.front().hr_bpm || !span.back().hr_bpm) return std::nullopt;
  return *span.back().hr_bpm - *span.front().hr_bpm > kHrIncreaseBpm ? "yes" : "no";
}

std::vector<Candidate> candidates(const QACell& cell, const StateStore& store, const QAGenConfig& cfg) {
  std::vector<Candidate> out;
  for (const auto& pid : store.patients()) {
    const auto& ss = *store.states(pid);
    if (cell.tier == Tier::A) {
      for (const auto& s : ss) {
        if (auto a = tier_a_answer(cell.target, s)) {
          out.push_back({{s.dataset, pid, s.window_start_s, s.window_end_s}, s.dataset, *a});
        }
      }
      continue;
    }
    const std::size_t n = cfg.tier_b_windows;
    for (std::size_t i = 0; n > 0 && i + n <= ss.size(); i += std::max<std::size_t>(1, cfg.tier_b_stride)) {
      std::span<const MonitoringState> span(ss.data() + i, n);
      if (auto a = tier_b_answer(cell.target, span)) {
        out.push_back({{span.front().dataset, pid, span.front().window_start_s, span.back().window_end_s},
                       span.front().dataset, *a});
      }
    }
  }
  return out;
}

/// Evenly spaced picks for query cells; round-robin over answer groups
/// otherwise so yes/no and option cells stay as balanced as the data allows.
std::vector<Candidate> select(const QACell& cell, std::vector<Candidate> pool, std::size_t k) {
  if (pool.size() <= k) return pool;
  std::vector<Candidate> out;
  if (cell.qtype == QType::single_query) {
    for (std::size_t i = 0; i < k; ++i) out.push_back(pool[i * pool.size() / k]);
    return out;
  }
  std::map<std::string, std::vector<Candidate>> groups;
  for (auto& c : pool) groups[c.answer].push_back(std::move(c));
  // Quotas by round-robin over the groups, then evenly spaced picks inside each.
  std::map<std::string, std::size_t> quota;
  for (std::size_t taken = 0; taken < k;) {
    for (const auto& [label, g] : groups) {
      if (taken < k && quota[label] < g.size()) {
        ++quota[label];
        ++taken;
      }
    }
  }
  std::map<std::string, std::vector<Candidate>> picks;
  for (auto& [label, g] : groups) {
    const std::size_t q = quota[label];
    for (std::size_t i = 0; i < q; ++i) picks[label].push_back(g[i * g.size() / q]);
  }
  for (std::size_t i = 0; out.size() < k; ++i) {
    for (const auto& [label, p] : picks) {
      if (i < p.size()) out.push_back(p[i]);
    }
  }
  return out;
}

}  // namespace

QAGenResult generate_synthetic_qa(const StateStore& states, const QAGenConfig& cfg) {
  QAGenResult r;
  for (const auto& cell : qa_cells()) {
    const std::string cell_name = std::string(to_string(cell.tier)) + "/" + cell.target;
    auto pool = candidates(cell, states, cfg);
    if (pool.empty()) {
      r.report.push_back(cell_name + ": skipped, target absent in states");
      continue;
    }
    auto picked = select(cell, std::move(pool), cfg.per_cell);
    if (picked.size() < cfg.per_cell) {
      r.report.push_back(cell_name + ": only " + std::to_string(picked.size()) + " candidates");
    }
    std::size_t k = 0;
    for (const auto& c : picked) {
      char id[96];
      std::snprintf(id, sizeof id, "qa-%s-%s-%03zu", std::string(to_string(cell.tier)).c_str(), cell.target.c_str(), k++);
      QAExample e{id, c.dataset, cell.tier, cell.qtype, question_for(cell.target), options_for(cell.target),
                  c.answer, cell.target, c.locator};
      e.validate();
      r.examples.push_back(std::move(e));
    }
  }
  return r;
}

}  // namespace vital
