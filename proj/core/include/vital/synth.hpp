#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vital/signal.hpp"

namespace vital {

enum class SegmentKind { normal, tachycardia, bradycardia, af_like };
std::string_view to_string(SegmentKind k);
SegmentKind parse_segment_kind(std::string_view s);

/// `param` is the target HR in bpm for normal/tachycardia/bradycardia and
/// the relative RR irregularity (half-width of the uniform spread around
/// the base RR) for af_like.
struct ScriptSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  SegmentKind kind = SegmentKind::normal;
  double param = 0.0;
  bool operator==(const ScriptSegment&) const = default;
};

struct StreamScript {
  double total_duration_s = 0.0;
  double base_hr_bpm = 70.0;
  std::vector<ScriptSegment> segments;
  std::uint64_t noise_seed = 0;
  bool operator==(const StreamScript&) const = default;
};

void to_json(nlohmann::json& j, const StreamScript& s);
void from_json(const nlohmann::json& j, StreamScript& s);

/// Ground-truth interval label as written to the synthetic annotation file.
struct Annotation {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;
  bool operator==(const Annotation&) const = default;
};

void to_json(nlohmann::json& j, const Annotation& a);
void from_json(const nlohmann::json& j, Annotation& a);

/// Annotation label used for each non-normal segment kind.
std::string annotation_label(SegmentKind k);

struct SyntheticStream {
  std::vector<double> samples;
  std::vector<Annotation> annotations;
  std::vector<double> beat_times_s;  // generator ground truth
};

/// Throws ConfigError on overlapping or out-of-range segments.
void validate_script(const StreamScript& s);

/// Deterministic in (script, fs, modality): one mt19937_64 stream seeded
/// with noise_seed drives beat jitter, AF irregularity and sensor noise.
SyntheticStream synthesize_stream(const StreamScript& script, double fs, Modality modality = Modality::ECG);

/// Generator RR model without waveform rendering.
std::vector<double> synthesize_beat_times(const StreamScript& script);

}  // namespace vital
