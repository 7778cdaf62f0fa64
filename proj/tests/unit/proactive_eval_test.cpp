#include <gtest/gtest.h>

#include <map>
#include <random>

#include "fixtures.hpp"
#include "vital/error.hpp"
#include "vital/jsonl.hpp"
#include "vital/proactive_eval.hpp"

using namespace vital;

namespace {

AlertRecord alert_at(double t, const std::string& pid = "p0") {
  return {pid, 0, t, AlertRule::extreme_tachycardia, Urgency::high, "", "", {}};
}

}  // namespace

TEST(EvalProactive, UnmatchedAlertsGiveFar) {
  std::vector<AlertRecord> alerts{alert_at(10.0), alert_at(20.0)};
  auto r = eval_proactive(alerts, {}, 1.0);
  EXPECT_DOUBLE_EQ(r.far_per_hour, 2.0);
  EXPECT_EQ(r.false_alerts, 2u);
  EXPECT_FALSE(r.latency_median_s.has_value());
}

TEST(EvalProactive, FirstMatchedAlertSetsLatency) {
  std::vector<EpisodeAnnotation> eps{{"p0", 100.0, 300.0, "tachycardia"}};
  std::vector<AlertRecord> alerts{alert_at(200.0), alert_at(150.0)};
  auto r = eval_proactive(alerts, eps, 1.0);
  EXPECT_EQ(r.matched_episodes, 1u);
  EXPECT_EQ(r.false_alerts, 0u);
  EXPECT_EQ(r.matched_alerts, 2u);
  EXPECT_EQ(r.latency_median_s, 50.0);
}

TEST(EvalProactive, BoundariesAndGrace) {
  std::vector<EpisodeAnnotation> eps{{"p0", 100.0, 200.0, "AF"}};
  std::vector<AlertRecord> on_edges{alert_at(100.0), alert_at(200.0)};
  EXPECT_EQ(eval_proactive(on_edges, eps, 1.0).false_alerts, 0u);
  std::vector<AlertRecord> late{alert_at(205.0)};
  EXPECT_EQ(eval_proactive(late, eps, 1.0).false_alerts, 1u);
  EXPECT_EQ(eval_proactive(late, eps, 1.0, {10.0}).false_alerts, 0u);
  std::vector<AlertRecord> other_patient{alert_at(150.0, "p1")};
  auto r = eval_proactive(other_patient, eps, 1.0);
  EXPECT_EQ(r.false_alerts, 1u);
  EXPECT_EQ(r.missed_episodes, 1u);
}

TEST(EvalProactive, RejectsBadInputs) {
  EXPECT_THROW(eval_proactive({}, {}, 0.0), ConfigError);
  std::vector<EpisodeAnnotation> overlap{{"p0", 0.0, 100.0, "AF"}, {"p0", 50.0, 150.0, "AF"}};
  EXPECT_THROW(eval_proactive({}, overlap, 1.0), IntegrityError);
  std::vector<EpisodeAnnotation> empty_span{{"p0", 10.0, 10.0, "AF"}};
  EXPECT_THROW(validate_episodes(empty_span), IntegrityError);
}

TEST(EvalProactive, CountsAlwaysBalance) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> t(0.0, 3600.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EpisodeAnnotation> eps;
    for (double s = 0.0; s < 3400.0; s += 600.0) {
      if (t(rng) < 1800.0) eps.push_back({"p0", s + 50.0, s + 250.0, "tachycardia"});
    }
    std::vector<AlertRecord> alerts;
    for (int k = 0; k < 8; ++k) alerts.push_back(alert_at(t(rng)));
    auto r = eval_proactive(alerts, eps, 1.0);
    EXPECT_EQ(r.matched_alerts + r.false_alerts, r.total_alerts);
    EXPECT_EQ(r.matched_episodes + r.missed_episodes, eps.size());
  }
}

TEST(Episodes, FromAnnotations) {
  std::vector<Annotation> ann{{0.0, 100.0, "normal"},
                              {100.0, 200.0, "AFIB"},
                              {200.0, 300.0, "af"},
                              {300.0, 400.0, "N"},
                              {400.0, 500.0, "tachycardia"}};
  auto eps = episodes_from_annotations("p0", ann);
  ASSERT_EQ(eps.size(), 2u);
  EXPECT_EQ(eps[0], (EpisodeAnnotation{"p0", 100.0, 300.0, "AF"}));
  EXPECT_EQ(eps[1].label, "tachycardia");
}

TEST(Episodes, ReadBothLineShapes) {
  testing_support::TempDir dir;
  write_jsonl(dir / "a.jsonl", {nlohmann::json{{"start_s", 10}, {"end_s", 20}, {"label", "AF"}},
                                nlohmann::json{{"patient_id", "q"}, {"onset_s", 5}, {"offset_s", 6}, {"label", "AF"}}});
  auto eps = read_episodes(dir / "a.jsonl", "dflt");
  ASSERT_EQ(eps.size(), 2u);
  std::map<std::string, EpisodeAnnotation> by_patient;
  for (const auto& e : eps) by_patient[e.patient_id] = e;
  EXPECT_EQ(by_patient["dflt"], (EpisodeAnnotation{"dflt", 10.0, 20.0, "AF"}));
  EXPECT_EQ(by_patient["q"], (EpisodeAnnotation{"q", 5.0, 6.0, "AF"}));
}

TEST(EvalRhythm, PerfectAndDegenerate) {
  std::vector<std::string> truth{"AF", "N", "AF", "Other"};
  auto perfect = eval_rhythm(truth, truth);
  EXPECT_EQ(perfect.sensitivity, 1.0);
  EXPECT_EQ(perfect.specificity, 1.0);
  EXPECT_EQ(perfect.balanced_accuracy, 1.0);
  std::vector<std::string> all_af(4, "AF");
  auto d = eval_rhythm(all_af, truth);
  EXPECT_EQ(d.sensitivity, 1.0);
  EXPECT_EQ(d.specificity, 0.0);
  EXPECT_EQ(d.balanced_accuracy, 0.5);
  std::vector<std::string> no_pos{"N", "N"};
  auto undefined = eval_rhythm(no_pos, no_pos);
  EXPECT_FALSE(undefined.sensitivity.has_value());
  EXPECT_FALSE(undefined.balanced_accuracy.has_value());
  EXPECT_EQ(undefined.specificity, 1.0);
  std::vector<std::string> short_pred{"AF"};
  EXPECT_THROW(eval_rhythm(short_pred, truth), Error);
}

TEST(EvalRhythm, ConfusionMatchesTally) {
  std::mt19937 rng(8);
  const char* labels[] = {"AF", "N", "Other", "unknown"};
  std::uniform_int_distribution<int> pick(0, 3);
  std::vector<std::string> p, t;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (int i = 0; i < 500; ++i) {
    p.push_back(labels[pick(rng)]);
    t.push_back(labels[pick(rng)]);
    const bool pp = p.back() == "AF", tt = t.back() == "AF";
    tp += pp && tt;
    fp += pp && !tt;
    tn += !pp && !tt;
    fn += !pp && tt;
  }
  auto r = eval_rhythm(p, t);
  EXPECT_EQ(r.tp, tp);
  EXPECT_EQ(r.fp, fp);
  EXPECT_EQ(r.tn, tn);
  EXPECT_EQ(r.fn, fn);
  EXPECT_NEAR(*r.balanced_accuracy,
              0.5 * (static_cast<double>(tp) / (tp + fn) + static_cast<double>(tn) / (tn + fp)), 1e-12);
}
