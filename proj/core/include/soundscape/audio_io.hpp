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
#include <string>
#include <vector>

namespace soundscape {

/// Decoded mono waveform. Samples are in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate_hz = 0;
  std::string source_id;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// Reads a linear-PCM RIFF/WAVE file (8/16/24/32-bit integer or 32-bit
/// float, any channel count). Channels are averaged to mono; integer samples
/// are divided by 2^(bits-1). Throws IoError / ValidationError.
AudioClip decode_wav(const std::filesystem::path& path);

/// Same as decode_wav() on an in-memory file image.
AudioClip decode_wav_bytes(std::span<const std::uint8_t> bytes,
                           std::string source_id);

/// Header-only probe used to size source pools without decoding.
struct WavInfo {
  int sample_rate_hz = 0;
  int channels = 0;
  int bits_per_sample = 0;
  std::size_t frames = 0;
  double duration_s() const {
    return static_cast<double>(frames) / sample_rate_hz;
  }
};
WavInfo probe_wav(const std::filesystem::path& path);

/// 16-bit PCM mono encoding. Samples are clamped to [-1, 1] and scaled by
/// 32768 with round-half-away-from-zero, saturating at 32767.
std::vector<std::uint8_t> encode_wav_pcm16(const AudioClip& clip);
void write_wav_pcm16(const std::filesystem::path& path, const AudioClip& clip);

/// Band-limited sample-rate conversion (polyphase Kaiser-windowed sinc, 64
/// taps per phase). Output length is round(n * target / source). Returns the
/// input unchanged when the rates match.
AudioClip resample(const AudioClip& clip, int target_hz);

/// round(dur_s * rate) samples starting at round(start_s * rate). Throws
/// ValidationError when the range leaves the clip.
AudioClip slice(const AudioClip& clip, double start_s, double dur_s);

/// Root-mean-square level of a sample block (0 for empty input).
double rms(std::span<const float> samples);
/// Largest absolute sample value.
double peak(std::span<const float> samples);

}  // namespace soundscape
