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

#include "soundscape/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "soundscape/error.hpp"

namespace soundscape {
namespace {

constexpr int kTapsPerPhase = 64;
constexpr double kKaiserBeta = 8.0;
constexpr double kCutoffFraction = 0.9;
constexpr std::uint64_t kMaxCachedPhases = 4096;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Polyphase windowed-sinc interpolator for the rational ratio up/down.
class PolyphaseResampler {
 public:
  PolyphaseResampler(std::uint64_t up, std::uint64_t down)
      : up_(up), down_(down) {
    cutoff_ = kCutoffFraction * std::min(1.0, static_cast<double>(up) / down);
    i0_beta_ = std::cyl_bessel_i(0.0, kKaiserBeta);
    if (up_ <= kMaxCachedPhases) {
      table_.resize(up_ * kTapsPerPhase);
      for (std::uint64_t p = 0; p < up_; ++p) {
        fill_phase(p, std::span<double>(table_.data() + p * kTapsPerPhase,
                                        kTapsPerPhase));
      }
    }
  }

  std::vector<float> run(std::span<const float> in, std::size_t out_len) const {
    std::vector<float> out(out_len);
    std::vector<double> scratch(kTapsPerPhase);
    const auto n_in = static_cast<std::int64_t>(in.size());
    for (std::size_t n = 0; n < out_len; ++n) {
      const std::uint64_t pos = static_cast<std::uint64_t>(n) * down_;
      const auto base = static_cast<std::int64_t>(pos / up_);
      const std::uint64_t phase = pos % up_;
      std::span<const double> taps;
      if (!table_.empty()) {
        taps = {table_.data() + phase * kTapsPerPhase, kTapsPerPhase};
      } else {
        fill_phase(phase, scratch);
        taps = scratch;
      }
      double acc = 0.0;
      for (int k = 0; k < kTapsPerPhase; ++k) {
        const std::int64_t idx = base + k - (kTapsPerPhase / 2 - 1);
        if (idx < 0 || idx >= n_in) continue;
        acc += taps[k] * in[idx];
      }
      out[n] = static_cast<float>(acc);
    }
    return out;
  }

 private:
  // Taps for input offsets k - 31 relative to floor(t), where the output
  // instant sits `phase / up` of a sample after floor(t).
  void fill_phase(std::uint64_t phase, std::span<double> taps) const {
    const double frac = static_cast<double>(phase) / up_;
    const double half = kTapsPerPhase / 2.0;
    double sum = 0.0;
    for (int k = 0; k < kTapsPerPhase; ++k) {
      const double x = (k - (kTapsPerPhase / 2 - 1)) - frac;
      const double r = x / half;
      const double window =
          std::abs(r) >= 1.0
              ? 0.0
              : std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) /
                    i0_beta_;
      taps[k] = cutoff_ * sinc(cutoff_ * x) * window;
      sum += taps[k];
    }
    for (auto& t : taps) t /= sum;
  }

  std::uint64_t up_;
  std::uint64_t down_;
  double cutoff_ = 1.0;
  double i0_beta_ = 1.0;
  std::vector<double> table_;
};

}  // namespace

AudioClip resample(const AudioClip& clip, int target_hz) {
  if (target_hz <= 0) throw ValidationError("resample: target rate must be > 0");
  if (clip.sample_rate_hz <= 0) {
    throw ValidationError("resample: source rate must be > 0");
  }
  if (clip.sample_rate_hz == target_hz) return clip;

  const auto source = static_cast<std::uint64_t>(clip.sample_rate_hz);
  const auto target = static_cast<std::uint64_t>(target_hz);
  const std::uint64_t g = std::gcd(source, target);
  const std::size_t out_len =
      (clip.samples.size() * target + source / 2) / source;

  PolyphaseResampler resampler(target / g, source / g);
  AudioClip out;
  out.samples = resampler.run(clip.samples, out_len);
  for (auto& s : out.samples) s = std::clamp(s, -1.0f, 1.0f);
  out.sample_rate_hz = target_hz;
  out.source_id = clip.source_id;
  return out;
}

AudioClip slice(const AudioClip& clip, double start_s, double dur_s) {
  if (!(start_s >= 0.0) || !(dur_s >= 0.0)) {
    throw ValidationError("slice: start and duration must be non-negative");
  }
  const auto start = static_cast<std::size_t>(std::llround(start_s * clip.sample_rate_hz));
  const auto count = static_cast<std::size_t>(std::llround(dur_s * clip.sample_rate_hz));
  if (start + count > clip.samples.size()) {
    throw ValidationError("slice: [" + std::to_string(start_s) + ", " +
                          std::to_string(start_s + dur_s) +
                          ") s is outside a clip of " +
                          std::to_string(clip.duration_s()) + " s");
  }
  AudioClip out;
  out.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(start),
                     clip.samples.begin() + static_cast<std::ptrdiff_t>(start + count));
  out.sample_rate_hz = clip.sample_rate_hz;
  out.source_id = clip.source_id;
  return out;
}

double rms(std::span<const float> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : samples) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / samples.size());
}

double peak(std::span<const float> samples) {
  double p = 0.0;
  for (float s : samples) p = std::max(p, static_cast<double>(std::abs(s)));
  return p;
}

}  // namespace soundscape
