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

#include "soundscape/audio_io.hpp"
#include "soundscape/features.hpp"
#include "soundscape/indices.hpp"

namespace {

using namespace soundscape;

AudioClip noisy_tone(int rate, double seconds) {
  AudioClip clip;
  clip.sample_rate_hz = rate;
  std::mt19937 rng(1);
  std::normal_distribution<float> noise(0.0f, 0.05f);
  const auto n = static_cast<std::size_t>(rate * seconds);
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    clip.samples[i] = 0.4f * static_cast<float>(std::sin(2.0 * M_PI * 3000.0 * i / rate)) +
                      noise(rng);
  }
  return clip;
}

void BM_StftMagnitude(benchmark::State& state) {
  const auto clip = noisy_tone(32000, 10.0);
  const auto window = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stft_magnitude(clip, window, 320));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(clip.size()));
}
BENCHMARK(BM_StftMagnitude)->Arg(512)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_LogMel(benchmark::State& state) {
  const auto spec = stft_magnitude(noisy_tone(32000, 10.0), 1024, 320);
  const auto bank = make_mel_filterbank(spec.bin_freqs_hz, 64, 0.0, 16000.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_mel(spec, bank));
  }
}
BENCHMARK(BM_LogMel)->Unit(benchmark::kMillisecond);

void BM_ExtractLogMel(benchmark::State& state) {
  const auto clip = noisy_tone(48000, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_log_mel(clip));
  }
}
BENCHMARK(BM_ExtractLogMel)->Unit(benchmark::kMillisecond);

// Source rates into 32 kHz.
void BM_Resample(benchmark::State& state) {
  const auto clip = noisy_tone(static_cast<int>(state.range(0)), 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(resample(clip, 32000));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(clip.size()));
}
BENCHMARK(BM_Resample)->Arg(16000)->Arg(44100)->Arg(48000)->Unit(benchmark::kMillisecond);

void BM_ComputeIndices(benchmark::State& state) {
  const auto clip = noisy_tone(32000, static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_indices(clip));
  }
}
BENCHMARK(BM_ComputeIndices)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Aci(benchmark::State& state) {
  const auto spec = stft_magnitude(noisy_tone(32000, 60.0), 512, 512);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aci(spec, 5.0));
  }
}
BENCHMARK(BM_Aci)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
