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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "soundscape/error.hpp"
#include "soundscape/features.hpp"
#include "test_support.hpp"

namespace soundscape {
namespace {

// Reference STFT: explicit reflection padding, periodic Hann, direct DFT.
std::vector<std::vector<double>> reference_stft(const std::vector<float>& x,
                                                std::size_t win, std::size_t hop) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  auto sample = [&](std::ptrdiff_t i) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
    return static_cast<double>(x[static_cast<std::size_t>(i)]);
  };
  std::vector<std::vector<double>> out;
  for (std::ptrdiff_t start = -static_cast<std::ptrdiff_t>(win / 2);
       start <= n - static_cast<std::ptrdiff_t>(win / 2);
       start += static_cast<std::ptrdiff_t>(hop)) {
    std::vector<double> mags(win / 2 + 1);
    for (std::size_t k = 0; k <= win / 2; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < win; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / win);
        acc += w * sample(start + static_cast<std::ptrdiff_t>(i)) *
               std::polar(1.0, -2.0 * std::numbers::pi * k * i / win);
      }
      mags[k] = std::abs(acc);
    }
    out.push_back(std::move(mags));
  }
  return out;
}

TEST(Stft, MatchesReferenceDft) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (auto [len, win, hop] : {std::tuple{300, 64, 16}, std::tuple{257, 32, 32},
                               std::tuple{100, 100, 7}}) {
    AudioClip clip;
    clip.sample_rate_hz = 8000;
    for (int i = 0; i < len; ++i) clip.samples.push_back(u(rng));
    const auto spec = stft_magnitude(clip, win, hop);
    const auto ref = reference_stft(clip.samples, win, hop);
    ASSERT_EQ(spec.frames, ref.size());
    ASSERT_EQ(spec.bins, static_cast<std::size_t>(win / 2 + 1));
    for (std::size_t t = 0; t < spec.frames; ++t) {
      for (std::size_t k = 0; k < spec.bins; ++k) {
        ASSERT_NEAR(spec.at(t, k), ref[t][k], 1e-4) << "frame " << t << " bin " << k;
      }
    }
  }
}

TEST(Stft, FrameCountFormula) {
  for (std::size_t n = 64; n < 2000; n += 37) {
    for (std::size_t hop : {1u, 7u, 32u, 64u}) {
      // Frames start every hop from -win/2 while the centre stays inside.
      std::size_t expected = 0;
      for (std::ptrdiff_t start = -32; start <= static_cast<std::ptrdiff_t>(n) - 32;
           start += static_cast<std::ptrdiff_t>(hop)) {
        ++expected;
      }
      ASSERT_EQ(centered_frame_count(n, hop), expected) << n << " " << hop;
      if (hop >= 32) {
        AudioClip clip;
        clip.sample_rate_hz = 1000;
        clip.samples.assign(n, 0.0f);
        ASSERT_EQ(stft_magnitude(clip, 64, hop).frames, expected);
      }
    }
  }
}

TEST(Stft, TenSecondShape) {
  const auto clip = testing::sine(440.0, 0.5, 32000, 320000);
  const auto spec = stft_magnitude(clip, 1024, 320);
  EXPECT_EQ(spec.frames, 1001u);
  EXPECT_EQ(spec.bins, 513u);
  EXPECT_DOUBLE_EQ(spec.frame_hop_s, 0.01);
  EXPECT_DOUBLE_EQ(spec.bin_freqs_hz[512], 16000.0);
}

TEST(Stft, SilenceGivesZeros) {
  AudioClip clip;
  clip.sample_rate_hz = 32000;
  clip.samples.assign(5000, 0.0f);
  const auto spec = stft_magnitude(clip, 1024, 320);
  for (float v : spec.values) ASSERT_EQ(v, 0.0f);
}

TEST(Stft, BinCentredToneConcentratesEnergy) {
  const std::size_t win = 1024;
  const auto probe = stft_magnitude(testing::sine(0.0, 0.0, 32000, win), win, win);
  for (std::size_t k : {10u, 57u, 300u}) {
    const auto clip = testing::sine(probe.bin_freqs_hz[k], 0.7, 32000, 32000);
    const auto spec = stft_magnitude(clip, win, 320);
    // Skip edge frames where reflection padding distorts the tone.
    for (std::size_t t = 4; t + 4 < spec.frames; ++t) {
      double total = 0.0;
      double near = 0.0;
      for (std::size_t b = 0; b < spec.bins; ++b) {
        const double e = static_cast<double>(spec.at(t, b)) * spec.at(t, b);
        total += e;
        if (b + 1 >= k && b <= k + 1) near += e;
      }
      // A Hann window spreads a bin-centred tone over exactly k-1..k+1 with
      // the centre holding 2/3 of the energy.
      ASSERT_GE(spec.at(t, k) * spec.at(t, k) / total, 0.66);
      ASSERT_GE(near / total, 0.95);
    }
  }
}

TEST(Stft, RejectsBadArguments) {
  const auto clip = testing::sine(100.0, 0.5, 8000, 100);
  EXPECT_THROW(stft_magnitude(clip, 256, 64), ValidationError);
  EXPECT_THROW(stft_magnitude(clip, 64, 0), ValidationError);
  EXPECT_THROW(stft_magnitude(clip, 64, 65), ValidationError);
}

TEST(Mel, ScaleAnchors) {
  EXPECT_NEAR(hz_to_mel(1000.0), 15.0, 1e-12);
  EXPECT_NEAR(hz_to_mel(200.0), 3.0, 1e-12);
  for (double hz : {0.0, 50.0, 999.0, 1000.0, 4000.0, 15999.0}) {
    EXPECT_NEAR(mel_to_hz(hz_to_mel(hz)), hz, 1e-9);
  }
}

TEST(Mel, FilterbankShape) {
  const auto spec = stft_magnitude(testing::sine(440.0, 0.5, 32000, 4096), 1024, 320);
  const auto bank = make_mel_filterbank(spec.bin_freqs_hz, 64, 0.0, 16000.0);
  EXPECT_EQ(bank.n_mels, 64u);
  EXPECT_EQ(bank.n_freqs, 513u);
  for (std::size_t m = 0; m < bank.n_mels; ++m) {
    double row = 0.0;
    for (std::size_t k = 0; k < bank.n_freqs; ++k) {
      ASSERT_GE(bank.at(m, k), 0.0);
      row += bank.at(m, k);
    }
    EXPECT_GT(row, 0.0) << "empty mel band " << m;
  }
  for (std::size_t m = 1; m < bank.n_mels; ++m) {
    EXPECT_GT(bank.center_freqs_hz[m], bank.center_freqs_hz[m - 1]);
  }
}

TEST(LogMel, TenSecondShape) {
  const auto clip = testing::sine(440.0, 0.5, 32000, 320000);
  const auto mel = extract_log_mel(clip);
  EXPECT_EQ(mel.frames, 1001u);
  EXPECT_EQ(mel.bins, 64u);
  EXPECT_EQ(mel.scale, SpectrogramScale::kLogMelDb);
}

TEST(LogMel, ZeroInputHitsFloor) {
  AudioClip clip;
  clip.sample_rate_hz = 32000;
  clip.samples.assign(4096, 0.0f);
  const auto mel = extract_log_mel(clip);
  const float floor_db = static_cast<float>(10.0 * std::log10(kLogMelFloor));
  for (float v : mel.values) ASSERT_EQ(v, floor_db);
}

TEST(LogMel, DoublingMagnitudeAddsSixDb) {
  std::mt19937 rng(11);
  std::normal_distribution<float> g(0.0f, 0.3f);
  AudioClip clip;
  clip.sample_rate_hz = 32000;
  for (int i = 0; i < 16000; ++i) clip.samples.push_back(g(rng));
  const auto mag = stft_magnitude(clip, 1024, 320);
  auto doubled = mag;
  for (auto& v : doubled.values) v *= 2.0f;
  const auto a = log_mel(mag, 64, 0.0, 16000.0);
  const auto b = log_mel(doubled, 64, 0.0, 16000.0);
  const double expected = 20.0 * std::log10(2.0);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    ASSERT_NEAR(b.values[i] - a.values[i], expected, 1e-3);
  }
}

TEST(LogMel, RequiresMagnitudeInput) {
  auto spec = stft_magnitude(testing::sine(440.0, 0.5, 32000, 4096), 1024, 320);
  spec.scale = SpectrogramScale::kPower;
  EXPECT_THROW(log_mel(spec, 64, 0.0, 16000.0), ValidationError);
}

TEST(SpectrogramFile, RoundTrip) {
  testing::TempDir dir("sspg");
  const auto spec = extract_log_mel(testing::sine(880.0, 0.3, 32000, 8000));
  write_spectrogram(dir.path() / "a.sspg", spec);
  const auto back = read_spectrogram(dir.path() / "a.sspg");
  EXPECT_EQ(back.frames, spec.frames);
  EXPECT_EQ(back.bins, spec.bins);
  EXPECT_EQ(back.values, spec.values);
  EXPECT_EQ(back.bin_freqs_hz, spec.bin_freqs_hz);
  EXPECT_EQ(back.frame_hop_s, spec.frame_hop_s);
  EXPECT_EQ(back.scale, spec.scale);
}

}  // namespace
}  // namespace soundscape
