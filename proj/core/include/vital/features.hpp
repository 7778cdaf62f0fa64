#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "vital/signal.hpp"

namespace vital {

/// Per-window physiological features. Anything that needs more RR
/// intervals than the window provides is absent, never zero.
struct WindowFeatures {
  std::optional<double> hr_bpm;
  std::optional<double> sdnn_ms;
  std::optional<double> rmssd_ms;
  std::optional<double> cv;
  std::optional<double> delta_rr_entropy;
  std::optional<double> turning_point_ratio;
  double signal_quality_score = 0.0;
  std::size_t n_beats = 0;

  bool operator==(const WindowFeatures&) const = default;
};

// Minimum in-band RR intervals per feature.
inline constexpr std::size_t kMinIntervalsHr = 1;
inline constexpr std::size_t kMinIntervalsSdnn = 2;
inline constexpr std::size_t kMinIntervalsRmssd = 3;
inline constexpr std::size_t kMinIntervalsEntropy = 3;
inline constexpr std::size_t kMinIntervalsTpr = 3;

/// 60 / mean(rr).
std::optional<double> heart_rate(std::span<const double> rr_s);
/// Population standard deviation of rr, in ms.
std::optional<double> sdnn(std::span<const double> rr_s);
/// sqrt(mean(dRR^2)), in ms.
std::optional<double> rmssd(std::span<const double> rr_s);
/// sdnn / mean(rr), unitless.
std::optional<double> coeff_variation(std::span<const double> rr_s);

struct EntropyBinning {
  int bins = 16;
  double half_range_s = 0.6;  // histogram spans [-half_range_s, +half_range_s]
};

/// Normalized Shannon entropy of successive RR differences over fixed
/// equal-width bins; out-of-range differences land in the edge bins.
std::optional<double> delta_rr_entropy(std::span<const double> rr_s, const EntropyBinning& binning = {});

/// Fraction of interior points that are strict local extrema. Ties are
/// not turning points.
std::optional<double> turning_point_ratio(std::span<const double> rr_s);

/// (in-band RR fraction) * (1 - saturated sample fraction), in [0, 1].
double signal_quality(const SampleWindow& w, const RRSeries& rr, const PeakDetectorConfig& cfg = {});
/// Same score when the saturated fraction is already known.
double signal_quality(const RRSeries& rr, double saturated_fraction);

struct TimedHr {
  double time_s;  // sample timestamp (window end)
  double hr_bpm;
};

struct TachycardiaRatio {
  std::optional<double> ratio;
  std::size_t sample_count = 0;
};

/// Fraction of HR samples in (now - horizon, now] above the threshold.
TachycardiaRatio tachycardia_trailing(std::span<const TimedHr> samples, double now_s, double horizon_s = 300.0,
                                      double threshold_bpm = 100.0);

WindowFeatures compute_features(const RRSeries& rr, double quality, const EntropyBinning& binning = {});

struct WindowAnalysis {
  PeakDetection peaks;
  RRSeries rr;
  WindowFeatures features;
};

/// detect_peaks -> derive_rr -> signal_quality -> compute_features.
WindowAnalysis analyze_window(const SampleWindow& w, const PeakDetectorConfig& detector = {}, const RRBand& band = {},
                              const EntropyBinning& binning = {});

}  // namespace vital
