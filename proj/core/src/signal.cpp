#include "vital/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vital/error.hpp"

namespace vital {

std::size_t expected_sample_count(double fs, double duration_s) {
  return static_cast<std::size_t>(std::llround(fs * duration_s));
}

void validate_window(const SampleWindow& w) {
  if (!(w.fs > 0.0) || !std::isfinite(w.fs)) throw IntegrityError("window fs must be > 0");
  if (!(w.duration_s > 0.0)) throw IntegrityError("window duration_s must be > 0");
  if (!(w.start_s >= 0.0)) throw IntegrityError("window start_s must be >= 0");
  if (w.window_index < 0) throw IntegrityError("window_index must be >= 0");
  if (w.samples.size() != expected_sample_count(w.fs, w.duration_s)) {
    throw IntegrityError("window " + std::to_string(w.window_index) + " carries " +
                         std::to_string(w.samples.size()) + " samples, expected " +
                         std::to_string(expected_sample_count(w.fs, w.duration_s)));
  }
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    if (!std::isfinite(w.samples[i])) {
      throw IntegrityError("non-finite sample at index " + std::to_string(i) + " of window " +
                           std::to_string(w.window_index));
    }
  }
}

void to_json(nlohmann::json& j, const SampleWindow& w) {
  j = nlohmann::json{{"patient_id", w.patient_id},
                     {"dataset", w.dataset},
                     {"modality", w.modality},
                     {"fs", w.fs},
                     {"start_s", w.start_s},
                     {"duration_s", w.duration_s},
                     {"window_index", w.window_index},
                     {"samples", w.samples}};
}

void from_json(const nlohmann::json& j, SampleWindow& w) {
  if (auto v = window_schema_violations(j); !v.empty()) throw ParseError(v.front());
  w.patient_id = j.at("patient_id").get<std::string>();
  w.dataset = j.at("dataset").get<Dataset>();
  w.modality = j.at("modality").get<Modality>();
  w.fs = j.at("fs").get<double>();
  w.start_s = j.at("start_s").get<double>();
  w.duration_s = j.at("duration_s").get<double>();
  w.window_index = j.at("window_index").get<std::int64_t>();
  w.samples = j.at("samples").get<std::vector<double>>();
}

std::vector<std::string> window_schema_violations(const nlohmann::json& j) {
  std::vector<std::string> out;
  if (!j.is_object()) {
    out.emplace_back("window record is not a JSON object");
    return out;
  }
  static const char* const kFields[] = {"patient_id", "dataset",      "modality",     "fs",
                                        "start_s",    "duration_s", "window_index", "samples"};
  for (const char* f : kFields) {
    if (!j.contains(f)) out.push_back(std::string("missing field '") + f + "'");
  }
  if (!out.empty()) return out;
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(std::begin(kFields), std::end(kFields), [&](const char* f) { return key == f; }) ==
        std::end(kFields)) {
      out.push_back("unexpected field '" + key + "'");
    }
  }
  if (!j["patient_id"].is_string()) out.emplace_back("patient_id must be a string");
  try {
    (void)parse_dataset(j["dataset"].get<std::string>());
  } catch (const std::exception&) {
    out.emplace_back("dataset must be one of icentia11k, af_ppg_ecg, ppg_dalia, wesad, synthetic");
  }
  try {
    (void)parse_modality(j["modality"].get<std::string>());
  } catch (const std::exception&) {
    out.emplace_back("modality must be ECG or PPG");
  }
  for (const char* f : {"fs", "start_s", "duration_s"}) {
    if (!j[f].is_number()) out.push_back(std::string(f) + " must be a number");
  }
  if (!j["window_index"].is_number_integer() || j["window_index"].get<std::int64_t>() < 0) {
    out.emplace_back("window_index must be a nonnegative integer");
  }
  if (!j["samples"].is_array()) {
    out.emplace_back("samples must be a number array");
    return out;
  }
  if (!out.empty()) return out;
  const double fs = j["fs"].get<double>();
  const double dur = j["duration_s"].get<double>();
  if (!(fs > 0.0)) out.emplace_back("fs must be > 0");
  if (!(dur > 0.0)) out.emplace_back("duration_s must be > 0");
  if (!(j["start_s"].get<double>() >= 0.0)) out.emplace_back("start_s must be >= 0");
  const auto& samples = j["samples"];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].is_number()) {
      out.push_back("sample " + std::to_string(i) + " is not a number");
      break;
    }
  }
  if (fs > 0.0 && dur > 0.0 && samples.size() != expected_sample_count(fs, dur)) {
    out.push_back("samples length " + std::to_string(samples.size()) + " != round(fs * duration_s) = " +
                  std::to_string(expected_sample_count(fs, dur)));
  }
  return out;
}

Segmentation segment_stream(std::span<const double> samples, double fs, double window_len_s,
                            const StreamInfo& info) {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw ConfigError("segment_stream: fs must be > 0");
  if (!(window_len_s > 0.0) || !std::isfinite(window_len_s)) {
    throw ConfigError("segment_stream: window_len_s must be > 0");
  }
  const std::size_t per_window = expected_sample_count(fs, window_len_s);
  if (per_window == 0) throw ConfigError("segment_stream: window shorter than one sample");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw IntegrityError("segment_stream: non-finite sample at index " + std::to_string(i));
    }
  }

  Segmentation out;
  const std::size_t full = samples.size() / per_window;
  out.windows.reserve(full);
  for (std::size_t k = 0; k < full; ++k) {
    SampleWindow w;
    w.patient_id = info.patient_id;
    w.dataset = info.dataset;
    w.modality = info.modality;
    w.fs = fs;
    w.duration_s = window_len_s;
    w.start_s = info.start_s + static_cast<double>(k) * window_len_s;
    w.window_index = info.first_index + static_cast<std::int64_t>(k);
    auto first = samples.begin() + static_cast<std::ptrdiff_t>(k * per_window);
    w.samples.assign(first, first + static_cast<std::ptrdiff_t>(per_window));
    out.windows.push_back(std::move(w));
  }
  out.discarded_samples = samples.size() - full * per_window;
  return out;
}

std::string_view to_string(QualityFlag q) {
  switch (q) {
    case QualityFlag::ok: return "ok";
    case QualityFlag::flat_line: return "flat_line";
    case QualityFlag::saturated: return "saturated";
  }
  return "ok";
}

namespace {

std::size_t at_least_one(double seconds, double fs) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(seconds * fs)));
}

// Centered moving average; edges average over the available samples.
std::vector<double> moving_average(std::span<const double> x, std::size_t width) {
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(n);
  const std::size_t half = width / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

// Centered moving sum of `width` samples, zero padded at the edges.
std::vector<double> moving_integration(std::span<const double> x, std::size_t width) {
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(n);
  const std::size_t half = width / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    out[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(width);
  }
  return out;
}

struct Candidate {
  std::size_t index;
  double height;
};

}  // namespace

double saturated_fraction(const SampleWindow& w, const PeakDetectorConfig& cfg) {
  const auto& x = w.samples;
  if (x.empty()) return 0.0;
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak <= cfg.flat_epsilon) return 0.0;
  const double tol = 1e-12 * peak;
  const std::size_t min_run = std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(cfg.saturation_run_s * w.fs)));
  std::size_t saturated = 0;
  std::size_t i = 0;
  while (i < x.size()) {
    if (std::abs(std::abs(x[i]) - peak) > tol) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < x.size() && std::abs(x[j] - x[i]) <= tol) ++j;
    if (j - i >= min_run) saturated += j - i;
    i = j;
  }
  return static_cast<double>(saturated) / static_cast<double>(x.size());
}

PeakDetection detect_peaks(const SampleWindow& w, const PeakDetectorConfig& cfg) {
  const bool ecg = w.modality == Modality::ECG;
  const double min_fs = ecg ? cfg.min_ecg_fs : cfg.min_ppg_fs;
  if (w.fs < min_fs) {
    throw ConfigError("detect_peaks: fs " + std::to_string(w.fs) + " Hz below the " +
                      std::string(to_string(w.modality)) + " minimum of " + std::to_string(min_fs) + " Hz");
  }
  validate_window(w);

  PeakDetection out;
  const auto& x = w.samples;
  const std::size_t n = x.size();
  if (n < 3) {
    out.quality = QualityFlag::flat_line;
    return out;
  }
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (*mx - *mn < cfg.flat_epsilon) {
    out.quality = QualityFlag::flat_line;
    return out;
  }
  out.saturated_fraction = saturated_fraction(w, cfg);
  if (out.saturated_fraction > cfg.saturated_window_fraction) {
    out.quality = QualityFlag::saturated;
    return out;
  }

  const double fs = w.fs;
  const auto baseline = moving_average(x, at_least_one(ecg ? cfg.ecg_baseline_s : cfg.ppg_baseline_s, fs));
  std::vector<double> hp(n);
  for (std::size_t i = 0; i < n; ++i) hp[i] = x[i] - baseline[i];

  std::vector<double> energy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = hp[i == 0 ? 0 : i - 1];
    const double next = hp[i + 1 < n ? i + 1 : n - 1];
    const double d = 0.5 * (next - prev) * fs;
    energy[i] = d * d;
  }
  const std::size_t integ = at_least_one(ecg ? cfg.ecg_integration_s : cfg.ppg_integration_s, fs);
  const auto y = moving_integration(energy, integ);
  const std::size_t refractory = at_least_one(ecg ? cfg.ecg_refractory_s : cfg.ppg_refractory_s, fs);

  // Local maxima of the integrated signal, thinned to one per refractory span.
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? y[i - 1] : -1.0;
    const double right = i + 1 < n ? y[i + 1] : -1.0;
    if (!(y[i] > left && y[i] >= right) || y[i] <= 0.0) continue;
    if (!cands.empty() && i - cands.back().index < refractory) {
      if (y[i] > cands.back().height) cands.back() = {i, y[i]};
      continue;
    }
    cands.push_back({i, y[i]});
  }
  if (cands.empty()) return out;

  const std::size_t learn = std::min(n, at_least_one(cfg.learning_s, fs));
  double learn_max = 0.0, learn_sum = 0.0;
  for (std::size_t i = 0; i < learn; ++i) {
    learn_max = std::max(learn_max, y[i]);
    learn_sum += y[i];
  }
  double spk = learn_max / 3.0;
  double npk = 0.5 * learn_sum / static_cast<double>(learn);
  auto threshold = [&] { return npk + 0.25 * (spk - npk); };

  std::vector<std::size_t> accepted;  // indices into cands
  std::vector<double> rr_recent;      // samples between accepted beats
  std::size_t last_considered = 0;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const double h = cands[c].height;
    if (h > threshold()) {
      // Searchback: a long gap since the last beat may hide a missed beat.
      if (!accepted.empty() && rr_recent.size() >= 2) {
        const double avg = std::accumulate(rr_recent.begin(), rr_recent.end(), 0.0) / static_cast<double>(rr_recent.size());
        const std::size_t prev_idx = cands[accepted.back()].index;
        if (static_cast<double>(cands[c].index - prev_idx) > 1.66 * avg) {
          std::size_t best = cands.size();
          for (std::size_t k = last_considered + 1; k < c; ++k) {
            const std::size_t idx = cands[k].index;
            if (idx - prev_idx < refractory || cands[c].index - idx < refractory) continue;
            if (cands[k].height > 0.5 * threshold() && (best == cands.size() || cands[k].height > cands[best].height)) {
              best = k;
            }
          }
          if (best != cands.size()) {
            rr_recent.push_back(static_cast<double>(cands[best].index - prev_idx));
            accepted.push_back(best);
            spk = 0.25 * cands[best].height + 0.75 * spk;
          }
        }
      }
      if (!accepted.empty()) {
        rr_recent.push_back(static_cast<double>(cands[c].index - cands[accepted.back()].index));
        if (rr_recent.size() > 8) rr_recent.erase(rr_recent.begin());
      }
      accepted.push_back(c);
      spk = 0.125 * h + 0.875 * spk;
      last_considered = c;
    } else {
      npk = 0.125 * h + 0.875 * npk;
    }
  }

  // Localize each beat on the baseline-corrected signal, refined to
  // sub-sample precision with a parabola through the extremum.
  const std::size_t search = integ;
  double last_time = -1.0;
  for (std::size_t a : accepted) {
    const std::size_t c = cands[a].index;
    const std::size_t lo = c >= search ? c - search : 0;
    const std::size_t hi = std::min(n - 1, c + search);
    std::size_t best = lo;
    auto score = [&](std::size_t i) { return ecg ? std::abs(hp[i]) : hp[i]; };
    for (std::size_t i = lo; i <= hi; ++i) {
      if (score(i) > score(best)) best = i;
    }
    double offset = 0.0;
    if (best > 0 && best + 1 < n) {
      const double ym = score(best - 1), y0 = score(best), yp = score(best + 1);
      const double denom = ym - 2.0 * y0 + yp;
      if (denom < 0.0) offset = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
    }
    const double t = w.start_s + (static_cast<double>(best) + offset) / fs;
    if (t > last_time) {
      out.peak_times_s.push_back(t);
      last_time = t;
    }
  }
  return out;
}

RRSeries derive_rr(std::span<const double> peak_times_s, const RRBand& band, std::int64_t first_window,
                   std::int64_t last_window) {
  RRSeries out;
  out.first_window = first_window;
  out.last_window = last_window;
  out.peak_times_s.assign(peak_times_s.begin(), peak_times_s.end());
  for (std::size_t i = 1; i < peak_times_s.size(); ++i) {
    const double rr = peak_times_s[i] - peak_times_s[i - 1];
    if (!(rr > 0.0)) throw IntegrityError("derive_rr: peak times must be strictly increasing");
    if (band.contains(rr)) {
      out.rr_s.push_back(rr);
    } else {
      ++out.excluded;
    }
  }
  return out;
}

RRSeries rr_from_intervals(std::span<const double> rr_s) {
  RRSeries out;
  out.peak_times_s.reserve(rr_s.size() + 1);
  double t = 0.0;
  if (!rr_s.empty()) out.peak_times_s.push_back(0.0);
  for (double rr : rr_s) {
    if (!(rr > 0.0) || !std::isfinite(rr)) throw IntegrityError("rr intervals must be finite and > 0");
    t += rr;
    out.peak_times_s.push_back(t);
    out.rr_s.push_back(rr);
  }
  return out;
}

}  // namespace vital
