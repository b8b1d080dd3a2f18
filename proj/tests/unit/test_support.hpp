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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "soundscape/audio_io.hpp"
#include "soundscape/synthmix.hpp"

namespace soundscape::testing {

inline AudioClip sine(double freq_hz, double amplitude, int rate_hz,
                      std::size_t n) {
  AudioClip clip;
  clip.sample_rate_hz = rate_hz;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    clip.samples[i] = static_cast<float>(
        amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * i / rate_hz));
  }
  return clip;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("soundscape_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Synthetic source pool: each "file" is a seeded tone-plus-noise clip whose
// length and rate are encoded in the path, so no audio touches the disk.
struct FakePool {
  SourcePool pool;

  explicit FakePool(std::uint64_t seed, std::size_t per_class = 6) {
    std::mt19937_64 rng(seed);
    const int rates[] = {32000, 48000, 44100};
    for (auto c : kTargetClasses) {
      for (std::size_t i = 0; i < per_class; ++i) {
        SourceFile f;
        f.sample_rate_hz = rates[rng() % 3];
        // Mix of sources shorter and longer than the 5 s target.
        f.duration_s = 1.0 + static_cast<double>(rng() % 900) / 100.0;
        f.path = std::string(class_name(c)) + "/" + std::to_string(i) + "@" +
                 std::to_string(f.sample_rate_hz) + "#" +
                 std::to_string(f.duration_s) + "$" + std::to_string(rng());
        pool.of(c).push_back(f);
      }
    }
  }

  static AudioClip load(const SourceFile& f) {
    const auto seed = std::hash<std::string>{}(f.path);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.05);
    const double freq = 200.0 + static_cast<double>(seed % 4000);
    const auto n = static_cast<std::size_t>(f.duration_s * f.sample_rate_hz);
    AudioClip clip = sine(freq, 0.3 + static_cast<double>(seed % 50) / 100.0,
                          f.sample_rate_hz, n);
    for (auto& s : clip.samples) s = static_cast<float>(s + noise(rng));
    clip.source_id = f.path;
    return clip;
  }
};

}  // namespace soundscape::testing
