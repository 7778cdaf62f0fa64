#include "vital/memory.hpp"

#include <algorithm>

#include "vital/error.hpp"
#include "vital/jsonl.hpp"

namespace vital {

namespace {

// Newest first, so a view with `next` appended sums in the same order as a
// rescan after the append and both give bit-identical results.
TrailingView accumulate(const MonitoringState* next, std::span<const MonitoringState> states, double now_end_s,
                        double horizon_s, double threshold_bpm) {
  TrailingView v;
  double sum = 0.0;
  std::size_t above = 0;
  auto add = [&](const MonitoringState& s) {
    if (!s.hr_bpm) return;
    ++v.tachycardia_sample_count;
    sum += *s.hr_bpm;
    if (*s.hr_bpm > threshold_bpm) ++above;
  };
  if (next) add(*next);
  // States are ordered by end time, so walk back until the horizon.
  for (auto it = states.rbegin(); it != states.rend(); ++it) {
    if (it->window_end_s > now_end_s + 1e-9) continue;
    if (now_end_s - it->window_end_s >= horizon_s - 1e-9) break;
    add(*it);
  }
  if (v.tachycardia_sample_count > 0) {
    const auto n = static_cast<double>(v.tachycardia_sample_count);
    v.mean_hr_5min = sum / n;
    v.tachycardia_ratio_5min = static_cast<double>(above) / n;
  }
  return v;
}

}  // namespace

TrailingView trailing_over(std::span<const MonitoringState> states, double now_end_s, double horizon_s,
                           double threshold_bpm) {
  return accumulate(nullptr, states, now_end_s, horizon_s, threshold_bpm);
}

PatientMemory::PatientMemory(std::string patient_id, MemoryConfig cfg)
    : patient_id_(std::move(patient_id)), cfg_(cfg) {
  if (cfg_.raw_cache_windows == 0) throw ConfigError("memory: raw_cache_windows must be > 0");
  if (!(cfg_.trailing_horizon_s > 0.0)) throw ConfigError("memory: trailing_horizon_s must be > 0");
}

std::optional<std::int64_t> PatientMemory::last_index() const {
  if (states_.empty()) return std::nullopt;
  return states_.back().window_index;
}

const MonitoringState& PatientMemory::update(MonitoringState state, std::span<const AlertRecord> alerts) {
  const std::int64_t expected = states_.empty() ? 0 : states_.back().window_index + 1;
  if (state.window_index != expected) {
    throw OrderingError("memory: expected window_index " + std::to_string(expected) + ", got " +
                        std::to_string(state.window_index));
  }
  if (state.patient_id != patient_id_) {
    throw OrderingError("memory: state for patient '" + state.patient_id + "' appended to '" + patient_id_ + "'");
  }
  for (const auto& a : alerts) {
    if (a.window_index != state.window_index || a.patient_id != patient_id_) {
      throw OrderingError("memory: alert does not belong to the appended window");
    }
  }
  validate_state(state);

  state.previous_hr_bpm = states_.empty() ? std::nullopt : states_.back().hr_bpm;
  std::optional<double> max_hr = max_hr_;
  if (state.hr_bpm) max_hr = max_hr ? std::max(*max_hr, *state.hr_bpm) : *state.hr_bpm;
  state.max_hr_bpm = max_hr;
  const TrailingView tv = trailing_with(state);
  state.mean_hr_5min = tv.mean_hr_5min;
  state.tachycardia_ratio_5min = tv.tachycardia_ratio_5min;

  states_.reserve(states_.size() + 1);
  alerts_.reserve(alerts_.size() + alerts.size());
  states_.push_back(std::move(state));
  alerts_.insert(alerts_.end(), alerts.begin(), alerts.end());
  max_hr_ = max_hr;
  return states_.back();
}

void PatientMemory::remember_window(SampleWindow w) {
  raw_.push_back(std::move(w));
  while (raw_.size() > cfg_.raw_cache_windows) raw_.pop_front();
}

TrailingView PatientMemory::trailing_view() const { return trailing_view(cfg_.trailing_horizon_s); }

TrailingView PatientMemory::trailing_view(double horizon_s) const {
  if (states_.empty()) return {};
  return trailing_over(states_, states_.back().window_end_s, horizon_s, cfg_.tachycardia_threshold_bpm);
}

TrailingView PatientMemory::trailing_with(const MonitoringState& next) const {
  return accumulate(&next, states_, next.window_end_s, cfg_.trailing_horizon_s, cfg_.tachycardia_threshold_bpm);
}

std::vector<AlertRecord> PatientMemory::recent_alerts(std::size_t k) const {
  const std::size_t n = std::min(k, alerts_.size());
  return {alerts_.rbegin(), alerts_.rbegin() + static_cast<std::ptrdiff_t>(n)};
}

const MonitoringState* PatientMemory::find_state(std::int64_t window_index) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), window_index,
                             [](const MonitoringState& s, std::int64_t i) { return s.window_index < i; });
  if (it == states_.end() || it->window_index != window_index) return nullptr;
  return &*it;
}

std::optional<std::pair<AlertRecord, MonitoringState>> PatientMemory::explain_last_alert() const {
  if (alerts_.empty()) return std::nullopt;
  const AlertRecord& a = alerts_.back();
  const MonitoringState* s = find_state(a.window_index);
  if (!s) return std::nullopt;
  return std::make_pair(a, *s);
}

void PatientMemory::persist(const std::filesystem::path& dir, const PersistOptions& opt) const {
  std::filesystem::create_directories(dir);
  JsonlWriter states(dir / "states.jsonl");
  for (const auto& s : states_) states.write(opt.fair ? nlohmann::json(leakage_filter(s)) : nlohmann::json(s));
  JsonlWriter alerts(dir / "alerts.jsonl");
  if (opt.header) alerts.write({{"header", *opt.header}});
  for (const auto& a : alerts_) alerts.write(a);
}

void PatientMemory::append_verbatim(MonitoringState s) {
  const std::int64_t expected = states_.empty() ? 0 : states_.back().window_index + 1;
  if (s.window_index != expected) throw OrderingError("memory: state log out of order");
  if (s.hr_bpm) max_hr_ = max_hr_ ? std::max(*max_hr_, *s.hr_bpm) : *s.hr_bpm;
  states_.push_back(std::move(s));
}

PatientMemory PatientMemory::load(const std::filesystem::path& dir, MemoryConfig cfg) {
  const auto state_rows = read_jsonl(dir / "states.jsonl");
  const auto alert_rows = read_jsonl(dir / "alerts.jsonl");
  std::string patient;
  if (!state_rows.empty()) patient = state_rows.front().value("patient_id", std::string());
  PatientMemory m(patient, cfg);
  std::size_t line = 0;
  for (const auto& row : state_rows) {
    ++line;
    MonitoringState s;
    try {
      s = row.get<MonitoringState>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("states.jsonl: " + std::string(e.what()), line);
    } catch (const ParseError& e) {
      throw ParseError("states.jsonl: " + std::string(e.what()), line);
    }
    if (s.patient_id != m.patient_id_) throw IntegrityError("states.jsonl: mixed patients");
    m.append_verbatim(std::move(s));
  }
  line = 0;
  for (const auto& row : alert_rows) {
    ++line;
    if (line == 1 && row.is_object() && row.contains("header")) continue;
    try {
      m.alerts_.push_back(row.get<AlertRecord>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("alerts.jsonl: " + std::string(e.what()), line);
    } catch (const ParseError& e) {
      throw ParseError("alerts.jsonl: " + std::string(e.what()), line);
    }
    if (m.patient_id_.empty()) m.patient_id_ = m.alerts_.back().patient_id;
  }
  return m;
}

}  // namespace vital
