#include "vital/rhythm.hpp"

#include "vital/error.hpp"

namespace vital {

std::string_view to_string(RhythmClass c) {
  switch (c) {
    case RhythmClass::N: return "N";
    case RhythmClass::AF: return "AF";
    case RhythmClass::Other: return "Other";
    case RhythmClass::unknown: return "unknown";
  }
  return "unknown";
}

RhythmClass parse_rhythm_class(std::string_view s) {
  if (s == "N") return RhythmClass::N;
  if (s == "AF") return RhythmClass::AF;
  if (s == "Other" || s == "AFL") return RhythmClass::Other;
  if (s == "unknown") return RhythmClass::unknown;
  throw ParseError("unknown rhythm class: " + std::string(s));
}

void ScreenConfig::validate() const {
  if (!(cv_min > 0.0)) throw ConfigError("screen: cv_min must be > 0");
  if (!(entropy_min >= 0.0 && entropy_min <= 1.0)) throw ConfigError("screen: entropy_min outside [0, 1]");
  if (!(0.0 <= tpr_lo && tpr_lo <= tpr_hi && tpr_hi <= 1.0)) throw ConfigError("screen: tpr bounds out of order");
  if (!(0.0 < hr_lo_bpm && hr_lo_bpm < hr_hi_bpm)) throw ConfigError("screen: hr bounds out of order");
  if (!(q_min >= 0.0 && q_min <= 1.0)) throw ConfigError("screen: q_min outside [0, 1]");
  if (!(context_s > 0.0)) throw ConfigError("screen: context_s must be > 0");
  if (entropy_bins < 2) throw ConfigError("screen: entropy_bins must be >= 2");
}

void to_json(nlohmann::json& j, const ScreenConfig& c) {
  j = {{"cv_min", c.cv_min},       {"entropy_min", c.entropy_min}, {"tpr_lo", c.tpr_lo},
       {"tpr_hi", c.tpr_hi},       {"hr_lo_bpm", c.hr_lo_bpm},     {"hr_hi_bpm", c.hr_hi_bpm},
       {"q_min", c.q_min},         {"context_s", c.context_s},     {"entropy_bins", c.entropy_bins}};
}

void from_json(const nlohmann::json& j, ScreenConfig& c) {
  if (!j.is_object()) throw ConfigError("screen config must be an object");
  ScreenConfig out;
  for (const auto& [key, value] : j.items()) {
    if (key == "cv_min") out.cv_min = value.get<double>();
    else if (key == "entropy_min") out.entropy_min = value.get<double>();
    else if (key == "tpr_lo") out.tpr_lo = value.get<double>();
    else if (key == "tpr_hi") out.tpr_hi = value.get<double>();
    else if (key == "hr_lo_bpm") out.hr_lo_bpm = value.get<double>();
    else if (key == "hr_hi_bpm") out.hr_hi_bpm = value.get<double>();
    else if (key == "q_min") out.q_min = value.get<double>();
    else if (key == "context_s") out.context_s = value.get<double>();
    else if (key == "entropy_bins") out.entropy_bins = value.get<int>();
    else throw ConfigError("screen config: unknown key '" + key + "'");
  }
  out.validate();
  c = out;
}

void to_json(nlohmann::json& j, const RhythmAssessment& a) {
  j = {{"rhythm_class", to_string(a.rhythm_class)},
       {"evidence",
        {{"cv", a.evidence.cv},
         {"delta_rr_entropy", a.evidence.delta_rr_entropy},
         {"turning_point_ratio", a.evidence.turning_point_ratio},
         {"n_beats", a.evidence.n_beats}}},
       {"thresholds_used", a.thresholds_used}};
}

RhythmAssessment classify_rhythm(const WindowFeatures& f, const ScreenConfig& cfg) {
  RhythmAssessment a;
  a.thresholds_used = cfg;
  a.evidence = {f.cv, f.delta_rr_entropy, f.turning_point_ratio, f.n_beats};
  if (!f.cv || !f.delta_rr_entropy || !f.turning_point_ratio || !f.hr_bpm || f.signal_quality_score < cfg.q_min) {
    a.rhythm_class = RhythmClass::unknown;
    return a;
  }
  const double cv = *f.cv;
  const double h = *f.delta_rr_entropy;
  const double tpr = *f.turning_point_ratio;
  const bool tpr_in = tpr >= cfg.tpr_lo && tpr <= cfg.tpr_hi;
  if (cv >= cfg.cv_min && h >= cfg.entropy_min && tpr_in) {
    a.rhythm_class = RhythmClass::AF;
  } else if (cv < cfg.cv_min && h < cfg.entropy_min && !tpr_in && *f.hr_bpm >= cfg.hr_lo_bpm &&
             *f.hr_bpm <= cfg.hr_hi_bpm) {
    a.rhythm_class = RhythmClass::N;
  } else {
    a.rhythm_class = RhythmClass::Other;
  }
  return a;
}

TuneGrid TuneGrid::standard() {
  TuneGrid g;
  for (int i = 2; i <= 30; i += 2) g.cv_min.push_back(i / 100.0);
  for (int i = 30; i <= 90; i += 5) g.entropy_min.push_back(i / 100.0);
  g.tpr_lo = {0.40, 0.45, 0.50, 0.54, 0.58};
  g.tpr_hi = {0.72, 0.77, 0.82, 0.90, 1.00};
  return g;
}

TuneResult tune_thresholds(std::span<const LabeledFeatures> dev, const ScreenConfig& base, const TuneGrid& grid) {
  TuneResult best;
  best.config = base;
  std::size_t pos = 0;
  for (const auto& d : dev) pos += d.is_af ? 1 : 0;
  const std::size_t neg = dev.size() - pos;
  if (pos == 0 || neg == 0) {
    best.used_defaults = true;
    return best;
  }
  bool have = false;
  ScreenConfig cfg = base;
  for (double cv : grid.cv_min) {
    for (double h : grid.entropy_min) {
      for (double lo : grid.tpr_lo) {
        for (double hi : grid.tpr_hi) {
          if (lo > hi) continue;
          cfg.cv_min = cv;
          cfg.entropy_min = h;
          cfg.tpr_lo = lo;
          cfg.tpr_hi = hi;
          std::size_t tp = 0, tn = 0;
          for (const auto& d : dev) {
            const bool af = classify_rhythm(d.features, cfg).rhythm_class == RhythmClass::AF;
            if (af && d.is_af) ++tp;
            if (!af && !d.is_af) ++tn;
          }
          const double sens = static_cast<double>(tp) / static_cast<double>(pos);
          const double spec = static_cast<double>(tn) / static_cast<double>(neg);
          const double bal = 0.5 * (sens + spec);
          if (!have || bal > best.balanced_accuracy + 1e-12 ||
              (bal > best.balanced_accuracy - 1e-12 && spec > best.specificity + 1e-12)) {
            best = {cfg, bal, sens, spec, false};
            have = true;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace vital
