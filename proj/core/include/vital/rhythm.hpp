#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vital/features.hpp"

namespace vital {

enum class RhythmClass { N, AF, Other, unknown };
std::string_view to_string(RhythmClass c);
RhythmClass parse_rhythm_class(std::string_view s);

struct ScreenConfig {
  double cv_min = 0.10;
  double entropy_min = 0.70;
  double tpr_lo = 0.54;
  double tpr_hi = 0.77;
  double hr_lo_bpm = 40.0;
  double hr_hi_bpm = 150.0;
  double q_min = 0.5;
  // Trailing RR span fed to the screen in streaming mode. Windows at
  // least this long are screened on their own RR.
  double context_s = 60.0;
  int entropy_bins = 16;

  bool operator==(const ScreenConfig&) const = default;
  /// Throws ConfigError when thresholds are out of order.
  void validate() const;
};

void to_json(nlohmann::json& j, const ScreenConfig& c);
void from_json(const nlohmann::json& j, ScreenConfig& c);

struct RhythmEvidence {
  std::optional<double> cv;
  std::optional<double> delta_rr_entropy;
  std::optional<double> turning_point_ratio;
  std::size_t n_beats = 0;
  bool operator==(const RhythmEvidence&) const = default;
};

struct RhythmAssessment {
  RhythmClass rhythm_class = RhythmClass::unknown;
  RhythmEvidence evidence;
  ScreenConfig thresholds_used;
  bool operator==(const RhythmAssessment&) const = default;
};

void to_json(nlohmann::json& j, const RhythmAssessment& a);

RhythmAssessment classify_rhythm(const WindowFeatures& f, const ScreenConfig& cfg = {});

struct LabeledFeatures {
  WindowFeatures features;
  bool is_af = false;
};

struct TuneResult {
  ScreenConfig config;
  double balanced_accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  bool used_defaults = false;  // empty or single-class dev set
};

struct TuneGrid {
  std::vector<double> cv_min;
  std::vector<double> entropy_min;
  std::vector<double> tpr_lo;
  std::vector<double> tpr_hi;
  static TuneGrid standard();
};

/// Exhaustive grid search maximizing balanced accuracy of AF-vs-rest.
/// Ties go to higher specificity, then to the earliest grid point.
TuneResult tune_thresholds(std::span<const LabeledFeatures> dev, const ScreenConfig& base = {},
                           const TuneGrid& grid = TuneGrid::standard());

}  // namespace vital
