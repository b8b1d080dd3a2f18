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

#include "soundscape/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "fft.hpp"
#include "soundscape/error.hpp"

namespace soundscape {

std::size_t centered_frame_count(std::size_t num_samples, std::size_t hop) {
  return 1 + num_samples / hop;
}

std::vector<double> hann_window(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t i = 0; i < length; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / length);
  }
  return w;
}

Spectrogram stft_magnitude(const AudioClip& clip, std::size_t window_len,
                           std::size_t hop) {
  const std::size_t n = clip.samples.size();
  if (hop == 0 || hop > window_len) {
    throw ValidationError("stft: need 0 < hop <= window_len");
  }
  if (window_len > n) {
    throw ValidationError("stft: clip of " + std::to_string(n) +
                          " samples is shorter than one window of " +
                          std::to_string(window_len));
  }
  if (clip.sample_rate_hz <= 0) throw ValidationError("stft: invalid sample rate");

  // Reflection padding (edge sample not repeated).
  const std::size_t left = window_len / 2;
  const std::size_t right = window_len - left;
  std::vector<double> padded(n + left + right);
  for (std::size_t i = 0; i < padded.size(); ++i) {
    auto j = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(left);
    const auto last = static_cast<std::ptrdiff_t>(n) - 1;
    if (j < 0) j = -j;
    if (j > last) j = 2 * last - j;
    padded[i] = clip.samples[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, last))];
  }

  const auto window = hann_window(window_len);
  detail::RealFft fft(window_len);

  Spectrogram spec;
  spec.frames = centered_frame_count(n, hop);
  spec.bins = fft.bins();
  spec.values.resize(spec.frames * spec.bins);
  spec.frame_hop_s = static_cast<double>(hop) / clip.sample_rate_hz;
  spec.scale = SpectrogramScale::kLinearMagnitude;
  spec.bin_freqs_hz.resize(spec.bins);
  for (std::size_t k = 0; k < spec.bins; ++k) {
    spec.bin_freqs_hz[k] =
        static_cast<double>(k) * clip.sample_rate_hz / window_len;
  }

  auto in = fft.input();
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const double* frame = padded.data() + t * hop;
    for (std::size_t i = 0; i < window_len; ++i) in[i] = frame[i] * window[i];
    const auto out = fft.execute();
    for (std::size_t k = 0; k < spec.bins; ++k) {
      spec.at(t, k) = static_cast<float>(std::abs(out[k]));
    }
  }
  return spec;
}

double hz_to_mel(double hz) {
  constexpr double kLinearStep = 200.0 / 3.0;
  constexpr double kBreakHz = 1000.0;
  constexpr double kBreakMel = kBreakHz / kLinearStep;
  const double log_step = std::log(6.4) / 27.0;
  if (hz < kBreakHz) return hz / kLinearStep;
  return kBreakMel + std::log(hz / kBreakHz) / log_step;
}

double mel_to_hz(double mel) {
  constexpr double kLinearStep = 200.0 / 3.0;
  constexpr double kBreakHz = 1000.0;
  constexpr double kBreakMel = kBreakHz / kLinearStep;
  const double log_step = std::log(6.4) / 27.0;
  if (mel < kBreakMel) return mel * kLinearStep;
  return kBreakHz * std::exp(log_step * (mel - kBreakMel));
}

MelFilterbank make_mel_filterbank(std::span<const double> fft_freqs_hz,
                                  std::size_t n_mels, double fmin_hz,
                                  double fmax_hz) {
  if (n_mels == 0) throw ValidationError("mel filterbank: n_mels must be >= 1");
  if (fft_freqs_hz.empty()) throw ValidationError("mel filterbank: no frequencies");
  const double nyquist = fft_freqs_hz.back();
  if (!(fmin_hz >= 0.0) || !(fmin_hz < fmax_hz) || fmax_hz > nyquist + 1e-9) {
    throw ValidationError("mel filterbank: need 0 <= fmin < fmax <= " +
                          std::to_string(nyquist) + " Hz");
  }

  const double mel_lo = hz_to_mel(fmin_hz);
  const double mel_hi = hz_to_mel(fmax_hz);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(n_mels + 1));
  }

  MelFilterbank bank;
  bank.n_mels = n_mels;
  bank.n_freqs = fft_freqs_hz.size();
  bank.weights.assign(n_mels * bank.n_freqs, 0.0);
  bank.center_freqs_hz.assign(edges.begin() + 1, edges.end() - 1);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m];
    const double mid = edges[m + 1];
    const double hi = edges[m + 2];
    const double area_norm = 2.0 / (hi - lo);
    for (std::size_t k = 0; k < bank.n_freqs; ++k) {
      const double f = fft_freqs_hz[k];
      const double rising = (f - lo) / (mid - lo);
      const double falling = (hi - f) / (hi - mid);
      const double w = std::max(0.0, std::min(rising, falling));
      bank.weights[m * bank.n_freqs + k] = w * area_norm;
    }
  }
  return bank;
}

Spectrogram log_mel(const Spectrogram& spec, const MelFilterbank& bank) {
  if (spec.scale != SpectrogramScale::kLinearMagnitude) {
    throw ValidationError("log_mel: input must be a linear-magnitude spectrogram");
  }
  if (bank.n_freqs != spec.bins) {
    throw ValidationError("log_mel: filterbank expects " +
                          std::to_string(bank.n_freqs) + " bins, got " +
                          std::to_string(spec.bins));
  }
  Spectrogram out;
  out.frames = spec.frames;
  out.bins = bank.n_mels;
  out.values.resize(out.frames * out.bins);
  out.frame_hop_s = spec.frame_hop_s;
  out.bin_freqs_hz = bank.center_freqs_hz;
  out.scale = SpectrogramScale::kLogMelDb;

  std::vector<double> power(spec.bins);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const auto frame = spec.frame(t);
    for (std::size_t k = 0; k < spec.bins; ++k) {
      power[k] = static_cast<double>(frame[k]) * frame[k];
    }
    for (std::size_t m = 0; m < bank.n_mels; ++m) {
      const double* w = bank.weights.data() + m * bank.n_freqs;
      double acc = 0.0;
      for (std::size_t k = 0; k < spec.bins; ++k) acc += w[k] * power[k];
      out.at(t, m) = static_cast<float>(10.0 * std::log10(acc + kLogMelFloor));
    }
  }
  return out;
}

Spectrogram log_mel(const Spectrogram& spec, std::size_t n_mels,
                    double fmin_hz, double fmax_hz) {
  if (spec.scale != SpectrogramScale::kLinearMagnitude) {
    throw ValidationError("log_mel: input must be a linear-magnitude spectrogram");
  }
  return log_mel(spec, make_mel_filterbank(spec.bin_freqs_hz, n_mels, fmin_hz,
                                           fmax_hz));
}

Spectrogram extract_log_mel(const AudioClip& clip, const FeatureParams& params) {
  const AudioClip input = resample(clip, params.sample_rate_hz);
  const Spectrogram mag = stft_magnitude(input, params.window_len, params.hop);
  const double fmax = params.fmax_hz > 0.0 ? params.fmax_hz
                                           : params.sample_rate_hz / 2.0;
  return log_mel(mag, params.n_mels, params.fmin_hz, fmax);
}

namespace {

constexpr char kMagic[4] = {'S', 'S', 'P', 'G'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    buf[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  }
  out.write(buf, sizeof(U));
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char buf[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(U))) {
    throw ValidationError("spectrogram file truncated");
  }
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bits |= static_cast<U>(buf[i]) << (8 * i);
  }
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_spectrogram(const std::filesystem::path& path,
                       const Spectrogram& spec) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.scale));
  put_le<std::uint64_t>(out, spec.frames);
  put_le<std::uint64_t>(out, spec.bins);
  put_le<double>(out, spec.frame_hop_s);
  for (double f : spec.bin_freqs_hz) put_le<double>(out, f);
  for (float v : spec.values) put_le<float>(out, v);
  if (!out) throw IoError("write failed: " + path.string());
}

Spectrogram read_spectrogram(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw ValidationError(path.string() + ": not a spectrogram dump");
  }
  if (get_le<std::uint32_t>(in) != kVersion) {
    throw ValidationError(path.string() + ": unsupported dump version");
  }
  Spectrogram spec;
  const auto scale = get_le<std::uint32_t>(in);
  if (scale > 2) throw ValidationError(path.string() + ": bad scale tag");
  spec.scale = static_cast<SpectrogramScale>(scale);
  spec.frames = get_le<std::uint64_t>(in);
  spec.bins = get_le<std::uint64_t>(in);
  spec.frame_hop_s = get_le<double>(in);
  spec.bin_freqs_hz.resize(spec.bins);
  for (auto& f : spec.bin_freqs_hz) f = get_le<double>(in);
  spec.values.resize(spec.frames * spec.bins);
  for (auto& v : spec.values) v = get_le<float>(in);
  return spec;
}

}  // namespace soundscape
