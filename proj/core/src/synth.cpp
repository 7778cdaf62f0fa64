#include "vital/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vital/error.hpp"

namespace vital {

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::normal: return "normal";
    case SegmentKind::tachycardia: return "tachycardia";
    case SegmentKind::bradycardia: return "bradycardia";
    case SegmentKind::af_like: return "af_like";
  }
  return "normal";
}

SegmentKind parse_segment_kind(std::string_view s) {
  const auto n = normalize_text(s);
  if (n == "normal") return SegmentKind::normal;
  if (n == "tachycardia") return SegmentKind::tachycardia;
  if (n == "bradycardia") return SegmentKind::bradycardia;
  if (n == "af_like") return SegmentKind::af_like;
  throw ParseError("unknown segment kind '" + std::string(s) + "'");
}

std::string annotation_label(SegmentKind k) {
  switch (k) {
    case SegmentKind::af_like: return "AF";
    case SegmentKind::tachycardia: return "tachycardia";
    case SegmentKind::bradycardia: return "bradycardia";
    case SegmentKind::normal: return "normal";
  }
  return "normal";
}

void to_json(nlohmann::json& j, const StreamScript& s) {
  auto segs = nlohmann::json::array();
  for (const auto& g : s.segments) {
    segs.push_back({{"start_s", g.start_s}, {"end_s", g.end_s}, {"kind", to_string(g.kind)}, {"param", g.param}});
  }
  j = {{"total_duration_s", s.total_duration_s},
       {"base_hr_bpm", s.base_hr_bpm},
       {"segments", segs},
       {"noise_seed", s.noise_seed}};
}

void from_json(const nlohmann::json& j, StreamScript& s) {
  try {
    s.total_duration_s = j.at("total_duration_s").get<double>();
    s.base_hr_bpm = j.value("base_hr_bpm", 70.0);
    s.noise_seed = j.value("noise_seed", std::uint64_t{0});
    s.segments.clear();
    for (const auto& g : j.value("segments", nlohmann::json::array())) {
      ScriptSegment seg;
      seg.start_s = g.at("start_s").get<double>();
      seg.end_s = g.at("end_s").get<double>();
      seg.kind = parse_segment_kind(g.at("kind").get<std::string>());
      seg.param = g.value("param", 0.0);
      s.segments.push_back(seg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("stream script: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const Annotation& a) {
  j = {{"start_s", a.start_s}, {"end_s", a.end_s}, {"label", a.label}};
}

void from_json(const nlohmann::json& j, Annotation& a) {
  a.start_s = j.at("start_s").get<double>();
  a.end_s = j.at("end_s").get<double>();
  a.label = j.at("label").get<std::string>();
}

void validate_script(const StreamScript& s) {
  if (!(s.total_duration_s > 0.0)) throw ConfigError("script: total_duration_s must be > 0");
  if (!(s.base_hr_bpm >= 20.0 && s.base_hr_bpm <= 250.0)) throw ConfigError("script: base_hr_bpm out of range");
  auto segs = s.segments;
  std::sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) { return a.start_s < b.start_s; });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& g = segs[i];
    if (!(g.start_s >= 0.0 && g.end_s <= s.total_duration_s && g.start_s < g.end_s)) {
      throw ConfigError("script: segment outside [0, total_duration_s] or empty");
    }
    if (i > 0 && g.start_s < segs[i - 1].end_s) throw ConfigError("script: overlapping segments");
    if (g.kind == SegmentKind::af_like) {
      if (!(g.param > 0.0 && g.param < 0.8)) throw ConfigError("script: af_like irregularity must be in (0, 0.8)");
    } else if (!(g.param >= 20.0 && g.param <= 250.0)) {
      throw ConfigError("script: segment HR must be in [20, 250] bpm");
    }
  }
}

namespace {

constexpr double kRsaAmplitude = 0.03;
constexpr double kRsaPeriodS = 5.0;
constexpr double kJitterS = 0.002;

const ScriptSegment* segment_at(const StreamScript& s, double t) {
  for (const auto& g : s.segments) {
    if (t >= g.start_s && t < g.end_s) return &g;
  }
  return nullptr;
}

std::vector<double> beat_times(const StreamScript& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, kJitterS);
  std::vector<double> beats;
  double t = unit(rng) * 60.0 / s.base_hr_bpm;
  while (t < s.total_duration_s) {
    beats.push_back(t);
    const ScriptSegment* seg = segment_at(s, t);
    double rr = 0.0;
    if (seg && seg->kind == SegmentKind::af_like) {
      const double mean = 60.0 / s.base_hr_bpm;
      rr = mean * (1.0 + seg->param * (2.0 * unit(rng) - 1.0));
    } else {
      const double hr = seg ? seg->param : s.base_hr_bpm;
      const double mean = 60.0 / hr;
      rr = mean * (1.0 + kRsaAmplitude * std::sin(2.0 * std::numbers::pi * t / kRsaPeriodS)) + jitter(rng);
    }
    t += std::max(rr, 0.2);
  }
  return beats;
}

struct Wave {
  double amplitude;
  double offset_s;  // relative to the fiducial, before RR scaling
  double width_s;
  bool scales;      // offset and width stretch with sqrt(RR)
};

constexpr Wave kEcgWaves[] = {
    {0.12, -0.20, 0.025, true},  // P
    {-0.12, -0.03, 0.010, false},
    {1.00, 0.00, 0.012, false},  // R
    {-0.25, 0.03, 0.010, false},
    {0.30, 0.30, 0.060, true},   // T
};

constexpr Wave kPpgWaves[] = {
    {1.00, 0.20, 0.070, true},  // systolic peak
    {0.35, 0.45, 0.090, true},  // diastolic wave
};

}  // namespace

std::vector<double> synthesize_beat_times(const StreamScript& script) {
  validate_script(script);
  std::mt19937_64 rng(script.noise_seed);
  return beat_times(script, rng);
}

SyntheticStream synthesize_stream(const StreamScript& script, double fs, Modality modality) {
  validate_script(script);
  if (!(fs > 0.0)) throw ConfigError("synthesize_stream: fs must be > 0");
  std::mt19937_64 rng(script.noise_seed);

  SyntheticStream out;
  out.beat_times_s = beat_times(script, rng);
  const std::size_t n = expected_sample_count(fs, script.total_duration_s);
  out.samples.assign(n, 0.0);

  const std::span<const Wave> waves = modality == Modality::ECG ? std::span<const Wave>(kEcgWaves)
                                                                : std::span<const Wave>(kPpgWaves);
  const auto& beats = out.beat_times_s;
  for (std::size_t b = 0; b < beats.size(); ++b) {
    const double rr = b + 1 < beats.size() ? beats[b + 1] - beats[b] : (b > 0 ? beats[b] - beats[b - 1] : 1.0);
    const double stretch = std::sqrt(std::clamp(rr, 0.3, 2.0));
    for (const Wave& wv : waves) {
      const double centre = beats[b] + (wv.scales ? wv.offset_s * stretch : wv.offset_s);
      const double width = wv.scales ? wv.width_s * stretch : wv.width_s;
      const double lo_t = centre - 5.0 * width, hi_t = centre + 5.0 * width;
      const auto lo = static_cast<std::ptrdiff_t>(std::ceil(lo_t * fs));
      const auto hi = static_cast<std::ptrdiff_t>(std::floor(hi_t * fs));
      for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(lo, 0); k <= hi && k < static_cast<std::ptrdiff_t>(n); ++k) {
        const double z = (static_cast<double>(k) / fs - centre) / width;
        out.samples[static_cast<std::size_t>(k)] += wv.amplitude * std::exp(-0.5 * z * z);
      }
    }
  }

  std::normal_distribution<double> noise(0.0, modality == Modality::ECG ? 0.01 : 0.005);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    out.samples[k] += 0.05 * std::sin(2.0 * std::numbers::pi * 0.2 * t) + noise(rng);
  }

  for (const auto& g : script.segments) {
    if (g.kind == SegmentKind::normal) continue;
    out.annotations.push_back({g.start_s, g.end_s, annotation_label(g.kind)});
  }
  std::sort(out.annotations.begin(), out.annotations.end(),
            [](const Annotation& a, const Annotation& b) { return a.start_s < b.start_s; });
  return out;
}

}  // namespace vital
