#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vital/types.hpp"

namespace vital {

/// One fixed-length raw segment of a single-channel stream.
struct SampleWindow {
  std::string patient_id;
  Dataset dataset = Dataset::synthetic;
  Modality modality = Modality::ECG;
  double fs = 0.0;          // Hz
  double start_s = 0.0;
  double duration_s = 0.0;
  std::int64_t window_index = 0;
  std::vector<double> samples;

  double end_s() const { return start_s + duration_s; }
  bool operator==(const SampleWindow&) const = default;
};

/// round(fs * duration_s), the sample count every valid window carries.
std::size_t expected_sample_count(double fs, double duration_s);

/// Throws IntegrityError when the window breaks its schema invariants.
void validate_window(const SampleWindow& w);

void to_json(nlohmann::json& j, const SampleWindow& w);
void from_json(const nlohmann::json& j, SampleWindow& w);

/// Schema violations of a canonical window record, one message per problem.
/// Empty means the record is valid.
std::vector<std::string> window_schema_violations(const nlohmann::json& j);

struct StreamInfo {
  std::string patient_id = "synthetic-0";
  Dataset dataset = Dataset::synthetic;
  Modality modality = Modality::ECG;
  double start_s = 0.0;
  std::int64_t first_index = 0;
};

struct Segmentation {
  std::vector<SampleWindow> windows;
  std::size_t discarded_samples = 0;
};

/// Tiles `samples` left to right into non-overlapping windows of
/// `window_len_s`; a trailing remainder is dropped and tallied.
Segmentation segment_stream(std::span<const double> samples, double fs, double window_len_s = 10.0,
                            const StreamInfo& info = {});

enum class QualityFlag { ok, flat_line, saturated };
std::string_view to_string(QualityFlag q);

struct PeakDetectorConfig {
  double ecg_integration_s = 0.15;
  double ppg_integration_s = 0.30;
  double ecg_refractory_s = 0.25;
  double ppg_refractory_s = 0.30;
  double ecg_baseline_s = 0.6;
  double ppg_baseline_s = 1.5;
  double learning_s = 3.0;
  double saturation_run_s = 0.02;
  double saturated_window_fraction = 0.25;
  double flat_epsilon = 1e-9;
  double min_ecg_fs = 50.0;
  double min_ppg_fs = 25.0;
};

struct PeakDetection {
  std::vector<double> peak_times_s;
  QualityFlag quality = QualityFlag::ok;
  double saturated_fraction = 0.0;
};

/// Fraction of samples sitting in clipped plateaus at the window's peak
/// absolute amplitude.
double saturated_fraction(const SampleWindow& w, const PeakDetectorConfig& cfg = {});

/// Derivative -> square -> moving-window integration -> adaptive threshold
/// with searchback. PPG uses the same chain with longer windows.
PeakDetection detect_peaks(const SampleWindow& w, const PeakDetectorConfig& cfg = {});

struct RRBand {
  double min_s = 0.3;
  double max_s = 2.0;
  bool contains(double rr) const { return rr >= min_s && rr <= max_s; }
};

struct RRSeries {
  std::vector<double> peak_times_s;
  std::vector<double> rr_s;  // in-band successive differences
  std::int64_t first_window = 0;
  std::int64_t last_window = 0;
  std::size_t excluded = 0;  // out-of-band intervals

  std::size_t interval_count() const { return rr_s.size() + excluded; }
  bool empty() const { return rr_s.empty(); }
};

/// Successive differences of strictly increasing peak times, with
/// out-of-band intervals excluded and tallied.
RRSeries derive_rr(std::span<const double> peak_times_s, const RRBand& band = {},
                   std::int64_t first_window = 0, std::int64_t last_window = 0);

/// Builds an RRSeries straight from intervals (peaks at their cumulative
/// sums from 0), bypassing detection. No band is applied; every interval
/// must be finite and positive.
RRSeries rr_from_intervals(std::span<const double> rr_s);

}  // namespace vital
