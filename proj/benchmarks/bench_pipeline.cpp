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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "soundscape/decision.hpp"
#include "soundscape/eval.hpp"
#include "soundscape/synthmix.hpp"

namespace {

using namespace soundscape;

// Tone sources synthesised from the path; nothing is read from disk.
SourcePool tone_pool() {
  SourcePool pool;
  const int rates[] = {32000, 44100, 48000};
  for (auto c : kTargetClasses) {
    for (int i = 0; i < 4; ++i) {
      SourceFile f;
      f.sample_rate_hz = rates[i % 3];
      f.duration_s = 2.0 + 2.0 * i;
      f.path = std::to_string(200 * (class_index(c) + 1) + 50 * i);
      pool.of(c).push_back(f);
    }
  }
  return pool;
}

AudioClip load_tone(const SourceFile& f) {
  AudioClip clip;
  clip.sample_rate_hz = f.sample_rate_hz;
  const double freq = std::stod(f.path);
  const auto n = static_cast<std::size_t>(f.duration_s * f.sample_rate_hz);
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    clip.samples[i] =
        0.5f * static_cast<float>(std::sin(2.0 * M_PI * freq * i / f.sample_rate_hz));
  }
  return clip;
}

void BM_RenderMix(benchmark::State& state) {
  const auto pool = tone_pool();
  const MixerConfig config;
  const auto all = LabelSet::parse_code("ABG");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto recipe = draw_recipe(pool, all, seed++, config);
    benchmark::DoNotOptimize(render_mix(recipe, pool, config, load_tone));
  }
}
BENCHMARK(BM_RenderMix)->Unit(benchmark::kMillisecond);

std::vector<ScoreMatrix> random_matrices(std::size_t n, std::size_t windows) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScoreMatrix> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    out[r].recording_id = "r" + std::to_string(r);
    out[r].window_len_s = 10.0;
    for (std::size_t w = 0; w < windows; ++w) {
      out[r].window_starts_s.push_back(static_cast<double>(w));
      for (int c = 0; c < 3; ++c) out[r].scores.push_back(u(rng));
    }
  }
  return out;
}

void BM_Decide(benchmark::State& state) {
  const auto matrices = random_matrices(1000, static_cast<std::size_t>(state.range(0)));
  auto policy = ThresholdPolicy::per_class({0.722, 0.920, 0.571});
  if (state.range(1)) policy.counts = PerClass<int>{2, 5, 10};
  for (auto _ : state) {
    for (const auto& m : matrices) benchmark::DoNotOptimize(decide(m, policy));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(matrices.size()));
}
BENCHMARK(BM_Decide)->Args({6, 0})->Args({51, 0})->Args({51, 1});

void BM_TuneThresholds(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<PerClass<double>> scores(n);
  std::vector<LabelSet> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto c : kTargetClasses) {
      const double s = u(rng);
      scores[i][class_index(c)] = s;
      truth[i].set(c, u(rng) < s);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(tune_thresholds(scores, truth, {TuneObjective::kF1, 0.001}));
  }
}
BENCHMARK(BM_TuneThresholds)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_EvaluateWithBootstrap(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::vector<LabelSet> truth, predicted;
  for (int i = 0; i < 1000; ++i) {
    truth.emplace_back(static_cast<std::uint8_t>(rng() % 8));
    predicted.push_back(rng() % 4 ? truth.back() : LabelSet(static_cast<std::uint8_t>(rng() % 8)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_labels(predicted, truth, {1000, 0.95, 1, 1}));
  }
}
BENCHMARK(BM_EvaluateWithBootstrap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
