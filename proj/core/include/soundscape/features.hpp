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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "soundscape/audio_io.hpp"

namespace soundscape {

enum class SpectrogramScale : std::uint32_t {
  kLinearMagnitude = 0,
  kPower = 1,
  kLogMelDb = 2,
};

/// Dense [frames x bins] matrix, row-major by frame.
struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<float> values;
  double frame_hop_s = 0.0;
  std::vector<double> bin_freqs_hz;  // strictly ascending, size == bins
  SpectrogramScale scale = SpectrogramScale::kLinearMagnitude;

  float at(std::size_t frame, std::size_t bin) const {
    return values[frame * bins + bin];
  }
  float& at(std::size_t frame, std::size_t bin) {
    return values[frame * bins + bin];
  }
  std::span<const float> frame(std::size_t t) const {
    return {values.data() + t * bins, bins};
  }
};

/// Frame count under centred framing: 1 + floor(num_samples / hop).
std::size_t centered_frame_count(std::size_t num_samples, std::size_t hop);

/// Periodic Hann window of the given length.
std::vector<double> hann_window(std::size_t length);

/// Hann-windowed short-time Fourier magnitude with centred framing: the
/// signal is reflection-padded by window_len/2 on both sides. Bins run from
/// DC to Nyquist (window_len/2 + 1 of them).
Spectrogram stft_magnitude(const AudioClip& clip, std::size_t window_len,
                           std::size_t hop);

/// Slaney mel scale (linear below 1 kHz, logarithmic above).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters, Slaney area normalisation, [n_mels x n_freqs].
struct MelFilterbank {
  std::size_t n_mels = 0;
  std::size_t n_freqs = 0;
  std::vector<double> weights;  // row-major by mel band
  std::vector<double> center_freqs_hz;

  double at(std::size_t mel, std::size_t freq) const {
    return weights[mel * n_freqs + freq];
  }
};

MelFilterbank make_mel_filterbank(std::span<const double> fft_freqs_hz,
                                  std::size_t n_mels, double fmin_hz,
                                  double fmax_hz);

inline constexpr double kLogMelFloor = 1e-10;

/// Projects |X|^2 through a mel filterbank and returns 10*log10(x + 1e-10).
/// Input must be a linear-magnitude spectrogram; fmax may not exceed the
/// top bin frequency (Nyquist).
Spectrogram log_mel(const Spectrogram& spec, std::size_t n_mels,
                    double fmin_hz, double fmax_hz);
/// Same with a prebuilt filterbank; shareable across threads.
Spectrogram log_mel(const Spectrogram& spec, const MelFilterbank& bank);

/// Feature extraction defaults (32 kHz input, 1024/320 framing, 64 mels).
struct FeatureParams {
  int sample_rate_hz = 32000;
  std::size_t window_len = 1024;
  std::size_t hop = 320;
  std::size_t n_mels = 64;
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;  // 0 means Nyquist
};

/// resample -> stft_magnitude -> log_mel.
Spectrogram extract_log_mel(const AudioClip& clip,
                            const FeatureParams& params = {});

/// Debug dump container, little-endian:
///   char[4] "SSPG" | u32 version (1) | u32 scale | u64 frames | u64 bins
///   | f64 frame_hop_s | f64 bin_freqs_hz[bins] | f32 values[frames*bins]
void write_spectrogram(const std::filesystem::path& path,
                       const Spectrogram& spec);
Spectrogram read_spectrogram(const std::filesystem::path& path);

}  // namespace soundscape
