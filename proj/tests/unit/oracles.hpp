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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "soundscape/decision.hpp"
#include "soundscape/scores.hpp"

namespace soundscape::testing {

// Annotations on a half-second grid so the oracle can work in whole cells.
inline constexpr double kCell = 0.5;

inline AnnotationSet random_annotations(std::mt19937_64& rng, const std::string& id,
                                        double duration_s = 60.0) {
  AnnotationSet a;
  a.recording_id = id;
  a.duration_s = duration_s;
  const int cells = static_cast<int>(duration_s / kCell);
  for (auto c : kTargetClasses) {
    const int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      // Lengths from half a second to a third of the recording.
      const int len = 1 + static_cast<int>(rng() % (cells / 3));
      const int start = static_cast<int>(rng() % (cells - len + 1));
      a.of(c).push_back({start * kCell, (start + len) * kCell});
    }
  }
  return a;
}

// Which classes survive a duration filter, by painting cells.
inline LabelSet pda_oracle(const AnnotationSet& a,
                           const PerClass<std::optional<double>>& fraction,
                           bool longest) {
  const int cells = static_cast<int>(a.duration_s / kCell + 0.5);
  LabelSet out;
  for (auto c : kTargetClasses) {
    std::vector<bool> covered(cells, false);
    for (const auto& s : a.of(c)) {
      for (int k = static_cast<int>(s.start_s / kCell + 0.5);
           k < static_cast<int>(s.end_s / kCell + 0.5); ++k) {
        covered[k] = true;
      }
    }
    int total = 0;
    int run = 0;
    int best_run = 0;
    for (bool b : covered) {
      total += b;
      run = b ? run + 1 : 0;
      best_run = std::max(best_run, run);
    }
    const int measured = longest ? best_run : total;
    if (measured == 0) continue;
    const auto& p = fraction[class_index(c)];
    // p * T is a whole number of cells in every suite that uses this.
    const int needed = p ? static_cast<int>(*p * a.duration_s / kCell + 0.5) : 0;
    if (measured >= needed) out.insert(c);
  }
  return out;
}

inline ScoreMatrix random_matrix(std::mt19937_64& rng, std::size_t windows,
                                 const std::string& id = "r") {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoreMatrix m;
  m.recording_id = id;
  m.window_len_s = 10.0;
  for (std::size_t w = 0; w < windows; ++w) {
    m.window_starts_s.push_back(static_cast<double>(w));
    for (int c = 0; c < 3; ++c) {
      // Quantised scores so exact ties with thresholds occur.
      m.scores.push_back(rng() % 4 == 0 ? static_cast<double>(rng() % 11) / 10.0 : u(rng));
    }
  }
  return m;
}

// Scores on k/1000 + 0.0005 so every cut between distinct scores has a
// point of the 0.001 grid inside it. Positives lean toward high scores.
struct TuneFixture {
  std::vector<PerClass<double>> scores;
  std::vector<LabelSet> truth;
};

inline TuneFixture random_tune_fixture(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TuneFixture f;
  for (std::size_t i = 0; i < n; ++i) {
    PerClass<double> s{};
    LabelSet t;
    for (auto c : kTargetClasses) {
      const double v = static_cast<double>(rng() % 1000) / 1000.0 + 0.0005;
      s[class_index(c)] = v;
      // Class-specific skew so the optimum differs between classes.
      const double lean = 0.3 + 0.2 * static_cast<double>(class_index(c));
      t.set(c, u(rng) < std::pow(v, 1.0 / lean) * 0.9 + 0.05);
    }
    f.scores.push_back(s);
    f.truth.push_back(t);
  }
  return f;
}

// Exhaustive search over thresholds 0, 0.001, ..., 1.
struct GridOptimum {
  double value = -2.0;
  std::vector<double> argmax;
};

template <typename Objective>
GridOptimum grid_search(Objective objective) {
  GridOptimum best;
  for (int k = 0; k <= 1000; ++k) {
    const double t = k / 1000.0;
    const double v = objective(t);
    if (v > best.value + 1e-12) {
      best.value = v;
      best.argmax = {t};
    } else if (std::abs(v - best.value) <= 1e-12) {
      best.argmax.push_back(t);
    }
  }
  return best;
}

// Twenty (truth, predicted) label codes whose stratified error table was
// worked out by hand; see kStratifyExpected.
inline const std::vector<std::pair<const char*, const char*>> kStratifyFixture = {
    {"A", "A"},   {"A", "AB"},  {"B", "-"},    {"G", "BG"},  {"AB", "A"},
    {"AB", "ABG"}, {"BG", "B"}, {"-", "-"},    {"-", "G"},   {"-", "A"},
    {"ABG", "ABG"}, {"ABG", "-"}, {"AG", "G"}, {"AG", "AB"}, {"B", "B"},
    {"B", "AB"},  {"G", "-"},   {"BG", "ABG"}, {"A", "G"},  {"AB", "AB"},
};

struct StratumRow {
  char target;
  const char* combination;
  bool false_positive;
  std::size_t count;
};

// Every non-zero tally of the fixture above.
inline const std::vector<StratumRow> kStratifyExpected = {
    {'A', "S", true, 1},  {'A', "B", true, 1},  {'A', "BG", true, 1},
    {'A', "S", false, 1}, {'A', "G", false, 1}, {'A', "BG", false, 1},
    {'B', "A", true, 1},  {'B', "G", true, 1},  {'B', "AG", true, 1},
    {'B', "S", false, 1}, {'B', "A", false, 1}, {'B', "AG", false, 1},
    {'G', "AB", true, 1}, {'G', "S", true, 1},  {'G', "A", true, 1},
    {'G', "B", false, 1}, {'G', "AB", false, 1}, {'G', "A", false, 1},
    {'G', "S", false, 1},
};

inline constexpr std::size_t kStratifyTotalErrors = 19;

}  // namespace soundscape::testing
