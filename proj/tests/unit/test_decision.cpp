// Copyright 2026  The soundscape authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "soundscape/decision.hpp"
#include "soundscape/error.hpp"

namespace soundscape {
namespace {

constexpr auto A = SoundClass::kAnthropophony;
constexpr auto B = SoundClass::kBiophony;
constexpr auto G = SoundClass::kGeophony;

ScoreMatrix matrix_of(std::vector<PerClass<double>> rows) {
  ScoreMatrix m;
  m.recording_id = "m";
  m.window_len_s = 10.0;
  for (std::size_t w = 0; w < rows.size(); ++w) {
    m.window_starts_s.push_back(10.0 * w);
    m.scores.insert(m.scores.end(), rows[w].begin(), rows[w].end());
  }
  return m;
}

PdaPolicy pda(std::optional<double> a, std::optional<double> b, std::optional<double> g,
              PdaMode mode = PdaMode::kSummed) {
  PdaPolicy p;
  p.fraction = {a, b, g};
  p.mode = mode;
  return p;
}

TEST(Pda, MinimumDuration) {
  EXPECT_DOUBLE_EQ(*pda({}, {}, 0.05).min_duration(G, 60.0), 3.0);
  EXPECT_FALSE(pda({}, {}, 0.05).min_duration(A, 60.0).has_value());
}

TEST(Pda, ShortGeophonyDropped) {
  AnnotationSet a;
  a.of(G).push_back({0.0, 2.0});
  EXPECT_TRUE(apply_pda(a, pda({}, {}, 0.05)).of(G).empty());
}

TEST(Pda, ExactlyAtMinimumIsKept) {
  AnnotationSet a;
  a.of(G).push_back({10.0, 13.0});
  EXPECT_FALSE(apply_pda(a, pda({}, {}, 0.05)).of(G).empty());
}

TEST(Pda, LongAnthropophonyRetained) {
  AnnotationSet a;
  a.of(A).push_back({10.0, 30.0});
  EXPECT_EQ(apply_pda(a, pda(0.25, {}, {})).of(A), (std::vector<Segment>{{10.0, 30.0}}));
}

TEST(Pda, UnsetClassUntouched) {
  AnnotationSet a;
  a.of(B).push_back({1.0, 1.5});
  a.of(B).push_back({5.0, 5.5});
  EXPECT_EQ(apply_pda(a, pda(0.5, {}, 0.5)).of(B).size(), 2u);
}

TEST(Pda, SummedVersusLongest) {
  AnnotationSet a;
  a.of(B) = {{0.0, 2.0}, {10.0, 12.0}};  // 4 s total, 2 s longest
  EXPECT_FALSE(apply_pda(a, pda({}, 0.05, {}, PdaMode::kSummed)).of(B).empty());
  EXPECT_TRUE(apply_pda(a, pda({}, 0.05, {}, PdaMode::kLongest)).of(B).empty());
}

TEST(Pda, OverlapsCountOnce) {
  AnnotationSet a;
  a.of(B) = {{0.0, 2.0}, {1.0, 2.5}};  // union 2.5 s
  EXPECT_TRUE(apply_pda(a, pda({}, 0.05, {})).of(B).empty());
}

TEST(Pda, RejectsBadFractions) {
  AnnotationSet a;
  EXPECT_THROW(apply_pda(a, pda(0.0, {}, {})), ValidationError);
  EXPECT_THROW(apply_pda(a, pda({}, 1.0, {})), ValidationError);
}

TEST(Pda, MatchesCellOracle) {
  std::mt19937_64 rng(31);
  const double fractions[] = {0.05, 0.1, 0.25};
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = testing::random_annotations(rng, "r" + std::to_string(trial));
    PerClass<std::optional<double>> f;
    for (auto& x : f) {
      if (rng() % 4) x = fractions[rng() % 3];
    }
    for (bool longest : {false, true}) {
      const auto kept = apply_pda(a, pda(f[0], f[1], f[2],
                                         longest ? PdaMode::kLongest : PdaMode::kSummed));
      ASSERT_EQ(kept.weak_labels(), testing::pda_oracle(a, f, longest)) << "trial " << trial;
    }
  }
}

TEST(Annotations, NormalizeMergesTouching) {
  AnnotationSet a;
  a.of(A) = {{5.0, 6.0}, {0.0, 2.0}, {2.0, 3.0}, {2.5, 4.0}};
  a.normalize();
  EXPECT_EQ(a.of(A), (std::vector<Segment>{{0.0, 4.0}, {5.0, 6.0}}));
}

TEST(Aggregate, MaxPerClass) {
  const auto m = matrix_of({{0.3, 0.4, 0.1}, {0.6, 0.4, 0.0}, {0.2, 0.4, 0.05}});
  EXPECT_EQ(aggregate(m), (PerClass<double>{0.6, 0.4, 0.1}));
  const auto one = matrix_of({{0.1, 0.2, 0.3}});
  EXPECT_EQ(aggregate(one), (PerClass<double>{0.1, 0.2, 0.3}));
}

TEST(Decide, GlobalThreshold) {
  const auto m = matrix_of({{0.1, 0.91, 0.5}});
  const auto d = decide(m, ThresholdPolicy::global(0.5));
  EXPECT_EQ(d.active, LabelSet::of({B}));  // 0.5 does not exceed 0.5
  EXPECT_FALSE(d.silence);
}

TEST(Decide, PerClassThresholds) {
  const auto m = matrix_of({{0.70, 0.93, 0.60}});
  const auto d = decide(m, ThresholdPolicy::per_class({0.722, 0.920, 0.571}));
  EXPECT_EQ(d.active, LabelSet::of({B, G}));
}

TEST(Decide, CountBased) {
  std::vector<PerClass<double>> rows(51, PerClass<double>{0.9, 0.9, 0.1});
  for (int w = 0; w < 9; ++w) rows[w][2] = 0.9;
  auto policy = ThresholdPolicy::global(0.5);
  policy.counts = PerClass<int>{2, 5, 10};
  const auto d = decide(matrix_of(rows), policy);
  EXPECT_EQ(d.active, LabelSet::of({A, B}));
  rows[20][2] = 0.9;
  EXPECT_EQ(decide(matrix_of(rows), policy).active, LabelSet::of({A, B, G}));
}

TEST(Decide, CountAboveWindowsRejected) {
  auto policy = ThresholdPolicy::global(0.5);
  policy.counts = PerClass<int>{1, 1, 7};
  EXPECT_THROW(decide(matrix_of(std::vector<PerClass<double>>(6, {0, 0, 0})), policy),
               ValidationError);
}

TEST(CountForFraction, Floor) {
  EXPECT_EQ(count_for_fraction(0.05, 51), 2);
  EXPECT_EQ(count_for_fraction(0.10, 51), 5);
  EXPECT_EQ(count_for_fraction(0.20, 51), 10);
  EXPECT_EQ(count_for_fraction(0.01, 51), 1);
  EXPECT_EQ(count_for_fraction(0.1, 60), 6);
}

TEST(DecideProperties, CountOneIsMaxAggregation) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = testing::random_matrix(rng, 1 + rng() % 60);
    const PerClass<double> th{u(rng), u(rng), std::round(u(rng) * 10) / 10};
    auto with_counts = ThresholdPolicy::per_class(th);
    with_counts.counts = PerClass<int>{1, 1, 1};
    const auto agg = aggregate(m);
    LabelSet expected;
    for (auto c : kTargetClasses) expected.set(c, agg[class_index(c)] > th[class_index(c)]);
    ASSERT_EQ(decide(m, with_counts).active, expected);
    ASSERT_EQ(decide(m, ThresholdPolicy::per_class(th)).active, expected);
  }
}

TEST(DecideProperties, Monotonicity) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t w = 1 + rng() % 60;
    const auto m = testing::random_matrix(rng, w);
    PerClass<double> lo{u(rng), u(rng), u(rng)};
    PerClass<int> c_lo{1 + static_cast<int>(rng() % w), 1 + static_cast<int>(rng() % w),
                       1 + static_cast<int>(rng() % w)};
    for (auto c : kTargetClasses) {
      auto hi = lo;
      hi[class_index(c)] = lo[class_index(c)] + (1.0 - lo[class_index(c)]) * u(rng);
      auto p_lo = ThresholdPolicy::per_class(lo);
      auto p_hi = ThresholdPolicy::per_class(hi);
      ASSERT_TRUE(decide(m, p_hi).active.is_subset_of(decide(m, p_lo).active));
      p_lo.counts = c_lo;
      auto c_hi = c_lo;
      c_hi[class_index(c)] = c_lo[class_index(c)] +
                             static_cast<int>(rng() % (w - c_lo[class_index(c)] + 1));
      auto p_chi = ThresholdPolicy::per_class(lo);
      p_chi.counts = c_hi;
      ASSERT_TRUE(decide(m, p_chi).active.is_subset_of(decide(m, p_lo).active));
    }
  }
}

TEST(DecideProperties, SilenceIffNothingActive) {
  for (std::uint8_t bits = 0; bits < 8; ++bits) {
    const auto d = make_decision("x", LabelSet(bits));
    EXPECT_EQ(d.silence, bits == 0);
    EXPECT_EQ(d.active.bits(), bits);
  }
  // The silence flag on an input set never counts as a target.
  EXPECT_TRUE(make_decision("x", LabelSet::of({SoundClass::kSilence})).silence);
}

TEST(LoadAnnotations, StrongSchema) {
  std::istringstream in(
      "recording_id,class,start_s,end_s\n"
      "r1,anthropophony,0,5\n"
      "r1,B,3,4\n"
      "r2,silence,0,60\n"
      "r1,anthropophony,4,8\n");
  const auto sets = load_annotations(in, "mem");
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].recording_id, "r1");
  EXPECT_EQ(sets[0].of(A), (std::vector<Segment>{{0.0, 8.0}}));
  EXPECT_EQ(sets[0].weak_labels(), LabelSet::of({A, B}));
  EXPECT_TRUE(sets[1].weak_labels().empty());
}

TEST(LoadAnnotations, DurationColumn) {
  std::istringstream in(
      "recording_id,class,start_s,end_s,duration_s\n"
      "r1,G,0,5,30\n");
  const auto sets = load_annotations(in, "mem");
  EXPECT_EQ(sets[0].duration_s, 30.0);
}

TEST(LoadAnnotations, WeakSchema) {
  std::istringstream in("recording_id,A,B,G\nr1,1,0,1\nr2,0,0,0\n");
  const auto sets = load_annotations(in, "mem", 60.0);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].weak_labels(), LabelSet::of({A, G}));
  EXPECT_EQ(sets[0].of(G), (std::vector<Segment>{{0.0, 60.0}}));
  EXPECT_TRUE(sets[1].weak_labels().empty());
}

TEST(LoadAnnotations, ErrorsNameTheLine) {
  std::istringstream in(
      "recording_id,class,start_s,end_s\n"
      "r1,A,0,5\n"
      "r1,A,7,3\n");
  try {
    load_annotations(in, "ann.csv");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("ann.csv:3"), std::string::npos) << e.what();
  }
  std::istringstream bad_class("recording_id,class,start_s,end_s\nr1,wind,0,5\n");
  EXPECT_THROW(load_annotations(bad_class, "m"), ValidationError);
  std::istringstream beyond("recording_id,class,start_s,end_s\nr1,A,50,61\n");
  EXPECT_THROW(load_annotations(beyond, "m"), ValidationError);
}

TEST(Decisions, WriteLoadRoundTrip) {
  std::vector<Decision> ds;
  for (std::uint8_t bits = 0; bits < 8; ++bits) {
    ds.push_back(make_decision("rec" + std::to_string(bits), LabelSet(bits)));
  }
  std::stringstream io;
  write_decisions(io, ds);
  EXPECT_EQ(load_decisions(io, "mem"), ds);
}

}  // namespace
}  // namespace soundscape
