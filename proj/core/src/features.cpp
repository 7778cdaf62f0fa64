#include "vital/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "vital/error.hpp"

namespace vital {

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_sd(std::span<const double> v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

std::optional<double> heart_rate(std::span<const double> rr_s) {
  if (rr_s.size() < kMinIntervalsHr) return std::nullopt;
  return 60.0 / mean_of(rr_s);
}

std::optional<double> sdnn(std::span<const double> rr_s) {
  if (rr_s.size() < kMinIntervalsSdnn) return std::nullopt;
  return 1000.0 * population_sd(rr_s);
}

std::optional<double> rmssd(std::span<const double> rr_s) {
  if (rr_s.size() < kMinIntervalsRmssd) return std::nullopt;
  double acc = 0.0;
  for (std::size_t i = 1; i < rr_s.size(); ++i) {
    const double d = rr_s[i] - rr_s[i - 1];
    acc += d * d;
  }
  return 1000.0 * std::sqrt(acc / static_cast<double>(rr_s.size() - 1));
}

std::optional<double> coeff_variation(std::span<const double> rr_s) {
  if (rr_s.size() < kMinIntervalsSdnn) return std::nullopt;
  return population_sd(rr_s) / mean_of(rr_s);
}

std::optional<double> delta_rr_entropy(std::span<const double> rr_s, const EntropyBinning& binning) {
  if (binning.bins < 2) throw ConfigError("delta_rr_entropy: bins must be >= 2");
  if (!(binning.half_range_s > 0.0)) throw ConfigError("delta_rr_entropy: range must be > 0");
  if (rr_s.size() < kMinIntervalsEntropy) return std::nullopt;
  std::vector<std::size_t> counts(static_cast<std::size_t>(binning.bins), 0);
  const double width = 2.0 * binning.half_range_s / binning.bins;
  for (std::size_t i = 1; i < rr_s.size(); ++i) {
    const double d = rr_s[i] - rr_s[i - 1];
    const auto raw = static_cast<long>(std::floor((d + binning.half_range_s) / width));
    ++counts[static_cast<std::size_t>(std::clamp<long>(raw, 0, binning.bins - 1))];
  }
  const double total = static_cast<double>(rr_s.size() - 1);
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return std::clamp(h / std::log(static_cast<double>(binning.bins)), 0.0, 1.0);
}

std::optional<double> turning_point_ratio(std::span<const double> rr_s) {
  if (rr_s.size() < kMinIntervalsTpr) return std::nullopt;
  std::size_t turns = 0;
  for (std::size_t i = 1; i + 1 < rr_s.size(); ++i) {
    if ((rr_s[i] - rr_s[i - 1]) * (rr_s[i + 1] - rr_s[i]) < 0.0) ++turns;
  }
  return static_cast<double>(turns) / static_cast<double>(rr_s.size() - 2);
}

double signal_quality(const RRSeries& rr, double saturated) {
  const std::size_t total = rr.interval_count();
  if (total == 0) return 0.0;
  const double in_band = static_cast<double>(rr.rr_s.size()) / static_cast<double>(total);
  return std::clamp(in_band * (1.0 - saturated), 0.0, 1.0);
}

double signal_quality(const SampleWindow& w, const RRSeries& rr, const PeakDetectorConfig& cfg) {
  return signal_quality(rr, saturated_fraction(w, cfg));
}

TachycardiaRatio tachycardia_trailing(std::span<const TimedHr> samples, double now_s, double horizon_s,
                                      double threshold_bpm) {
  TachycardiaRatio out;
  std::size_t above = 0;
  for (const auto& s : samples) {
    if (s.time_s > now_s + 1e-9 || now_s - s.time_s >= horizon_s - 1e-9) continue;
    ++out.sample_count;
    if (s.hr_bpm > threshold_bpm) ++above;
  }
  if (out.sample_count > 0) out.ratio = static_cast<double>(above) / static_cast<double>(out.sample_count);
  return out;
}

WindowFeatures compute_features(const RRSeries& rr, double quality, const EntropyBinning& binning) {
  WindowFeatures f;
  f.hr_bpm = heart_rate(rr.rr_s);
  f.sdnn_ms = sdnn(rr.rr_s);
  f.rmssd_ms = rmssd(rr.rr_s);
  f.cv = coeff_variation(rr.rr_s);
  f.delta_rr_entropy = delta_rr_entropy(rr.rr_s, binning);
  f.turning_point_ratio = turning_point_ratio(rr.rr_s);
  f.signal_quality_score = std::clamp(quality, 0.0, 1.0);
  f.n_beats = rr.peak_times_s.size();
  return f;
}

WindowAnalysis analyze_window(const SampleWindow& w, const PeakDetectorConfig& detector, const RRBand& band,
                              const EntropyBinning& binning) {
  WindowAnalysis a;
  a.peaks = detect_peaks(w, detector);
  a.rr = derive_rr(a.peaks.peak_times_s, band, w.window_index, w.window_index);
  a.features = compute_features(a.rr, signal_quality(a.rr, a.peaks.saturated_fraction), binning);
  return a;
}

}  // namespace vital
