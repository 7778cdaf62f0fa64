#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "vital/error.hpp"
#include "vital/signal.hpp"

using namespace vital;

namespace {

SampleWindow impulse_window(double fs, double duration, double period, double first = 0.5) {
  SampleWindow w;
  w.patient_id = "imp";
  w.fs = fs;
  w.duration_s = duration;
  w.samples.assign(expected_sample_count(fs, duration), 0.0);
  for (double t = first; t < duration; t += period) {
    const auto k = static_cast<std::size_t>(std::lround(t * fs));
    if (k < w.samples.size()) w.samples[k] = 1.0;
  }
  return w;
}

}  // namespace

TEST(SegmentStream, ExactTiling) {
  std::vector<double> s(3000, 0.1);
  auto seg = segment_stream(s, 100.0, 10.0);
  ASSERT_EQ(seg.windows.size(), 3u);
  EXPECT_EQ(seg.discarded_samples, 0u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(seg.windows[i].samples.size(), 1000u);
    EXPECT_EQ(seg.windows[i].window_index, static_cast<std::int64_t>(i));
    EXPECT_DOUBLE_EQ(seg.windows[i].start_s, 10.0 * static_cast<double>(i));
  }
}

TEST(SegmentStream, RemainderIsDroppedAndCounted) {
  std::vector<double> s(3050, 0.1);
  auto seg = segment_stream(s, 100.0, 10.0);
  EXPECT_EQ(seg.windows.size(), 3u);
  EXPECT_EQ(seg.discarded_samples, 50u);
}

TEST(SegmentStream, EmptyInputGivesNoWindows) {
  auto seg = segment_stream({}, 100.0, 10.0);
  EXPECT_TRUE(seg.windows.empty());
  EXPECT_EQ(seg.discarded_samples, 0u);
}

TEST(SegmentStream, RejectsNonFiniteSamples) {
  std::vector<double> s(2000, 0.0);
  s[17] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(segment_stream(s, 100.0, 10.0), IntegrityError);
}

TEST(SegmentStream, RejectsBadParameters) {
  std::vector<double> s(100, 0.0);
  EXPECT_THROW(segment_stream(s, 0.0, 10.0), ConfigError);
  EXPECT_THROW(segment_stream(s, 100.0, 0.0), ConfigError);
}

TEST(SegmentStream, TilingConservesSamples) {
  for (std::size_t n : {0u, 1u, 999u, 1000u, 1001u, 12345u}) {
    std::vector<double> s(n, 0.0);
    auto seg = segment_stream(s, 100.0, 10.0);
    std::size_t total = seg.discarded_samples;
    for (const auto& w : seg.windows) total += w.samples.size();
    EXPECT_EQ(total, n);
  }
}

TEST(DetectPeaks, ImpulseTrainAtOneSecond) {
  auto w = impulse_window(250.0, 10.0, 1.0);
  auto p = detect_peaks(w);
  ASSERT_EQ(p.peak_times_s.size(), 10u);
  for (std::size_t i = 0; i < p.peak_times_s.size(); ++i) {
    EXPECT_NEAR(p.peak_times_s[i], 0.5 + static_cast<double>(i), 1.0 / 250.0);
  }
  EXPECT_EQ(p.quality, QualityFlag::ok);
}

TEST(DetectPeaks, FlatLineIsFlagged) {
  SampleWindow w;
  w.fs = 250.0;
  w.duration_s = 10.0;
  w.samples.assign(2500, 0.0);
  auto p = detect_peaks(w);
  EXPECT_TRUE(p.peak_times_s.empty());
  EXPECT_EQ(p.quality, QualityFlag::flat_line);
}

TEST(DetectPeaks, ClippedWindowIsFlaggedSaturated) {
  auto w = impulse_window(250.0, 10.0, 1.0);
  for (std::size_t k = 0; k < w.samples.size(); ++k) w.samples[k] = (k / 50) % 2 ? 1.0 : -1.0;
  auto p = detect_peaks(w);
  EXPECT_EQ(p.quality, QualityFlag::saturated);
  EXPECT_TRUE(p.peak_times_s.empty());
  EXPECT_GT(p.saturated_fraction, 0.25);
}

TEST(DetectPeaks, TimesAreStrictlyIncreasingAndInsideWindow) {
  auto w = impulse_window(250.0, 10.0, 0.43, 0.2);
  w.start_s = 1234.0;
  auto p = detect_peaks(w);
  ASSERT_FALSE(p.peak_times_s.empty());
  for (std::size_t i = 0; i < p.peak_times_s.size(); ++i) {
    EXPECT_GE(p.peak_times_s[i], w.start_s);
    EXPECT_LT(p.peak_times_s[i], w.end_s());
    if (i) {
      EXPECT_GT(p.peak_times_s[i], p.peak_times_s[i - 1]);
    }
  }
}

TEST(DetectPeaks, RejectsLowSamplingRate) {
  auto w = impulse_window(40.0, 10.0, 1.0);
  EXPECT_THROW(detect_peaks(w), ConfigError);
  w.modality = Modality::PPG;
  EXPECT_NO_THROW(detect_peaks(w));
}

TEST(DeriveRR, Differencing) {
  std::vector<double> peaks{0.0, 0.8, 1.6};
  auto rr = derive_rr(peaks);
  ASSERT_EQ(rr.rr_s.size(), 2u);
  EXPECT_DOUBLE_EQ(rr.rr_s[0], 0.8);
  EXPECT_DOUBLE_EQ(rr.rr_s[1], 0.8);
  EXPECT_EQ(rr.excluded, 0u);
}

TEST(DeriveRR, OutOfBandIntervalExcludedAndTallied) {
  std::vector<double> peaks{0.0, 0.8, 5.0};
  auto rr = derive_rr(peaks, RRBand{0.3, 2.0});
  ASSERT_EQ(rr.rr_s.size(), 1u);
  EXPECT_DOUBLE_EQ(rr.rr_s[0], 0.8);
  EXPECT_EQ(rr.excluded, 1u);
  EXPECT_EQ(rr.interval_count(), peaks.size() - 1);
}

TEST(DeriveRR, SinglePeakGivesEmptySeries) {
  std::vector<double> peaks{3.0};
  EXPECT_TRUE(derive_rr(peaks).empty());
  EXPECT_TRUE(derive_rr({}).empty());
}

TEST(DeriveRR, RejectsNonIncreasingPeaks) {
  std::vector<double> peaks{0.0, 1.0, 1.0};
  EXPECT_THROW(derive_rr(peaks), IntegrityError);
}

TEST(RRFromIntervals, BuildsCumulativePeaks) {
  std::vector<double> rr{0.5, 0.7, 0.6};
  auto s = rr_from_intervals(rr);
  EXPECT_EQ(s.rr_s, rr);
  ASSERT_EQ(s.peak_times_s.size(), 4u);
  EXPECT_NEAR(s.peak_times_s.back(), 1.8, 1e-12);
  std::vector<double> bad{0.5, -0.1};
  EXPECT_THROW(rr_from_intervals(bad), IntegrityError);
}

TEST(SampleWindowJson, RoundTripAndSchema) {
  auto w = impulse_window(100.0, 2.0, 0.5);
  w.dataset = Dataset::ppg_dalia;
  w.modality = Modality::PPG;
  w.window_index = 4;
  w.start_s = 8.0;
  nlohmann::json j = w;
  EXPECT_TRUE(window_schema_violations(j).empty());
  EXPECT_EQ(j.get<SampleWindow>(), w);

  j["samples"].erase(0);
  EXPECT_FALSE(window_schema_violations(j).empty());
  nlohmann::json missing = w;
  missing.erase("fs");
  EXPECT_FALSE(window_schema_violations(missing).empty());
}
