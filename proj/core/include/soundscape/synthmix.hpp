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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soundscape/audio_io.hpp"
#include "soundscape/labels.hpp"

namespace soundscape {

enum class NoiseKind : std::uint8_t {
  kWhiteGaussian = 0,
  kWhiteUniform = 1,
  kPink = 2,
};
std::string_view noise_kind_name(NoiseKind kind);

/// Running-mix normalisation applied after every layer is added.
enum class MixNormalization : std::uint8_t { kPeak, kRms };

/// Every free parameter of the mixing procedure. The file-count masses are
/// exposed so their modes can be moved without code changes.
struct MixerConfig {
  // P(count = i + 1) per active class, by number of active classes.
  std::vector<double> single_class_counts{0.1, 0.4, 0.4, 0.1};
  std::vector<double> two_class_counts{0.6, 0.3, 0.1};
  std::vector<double> three_class_counts{0.7, 0.3};

  double gain_db_min = -30.0;
  double gain_db_max = 0.0;
  double snr_db_min = -5.0;
  double snr_db_max = 5.0;

  double noise_probability = 0.5;
  double noise_snr_db_min = -5.0;
  double noise_snr_db_max = 15.0;

  double silence_gain_db_min = -5.0;
  double silence_gain_db_max = 1.0;
  double silence_attenuation_db_min = -40.0;
  double silence_attenuation_db_max = -5.0;

  MixNormalization normalization = MixNormalization::kPeak;
  double peak_target = 0.99;
  double rms_target = 0.1;

  double crossfade_ms = 10.0;
  double target_len_s = 5.0;
  int target_rate_hz = 32000;

  std::size_t target_samples() const;
  const std::vector<double>& count_weights(int n_active) const;
  /// Throws ValidationError on inconsistent parameters.
  void validate() const;
};

struct SourceFile {
  std::string path;
  double duration_s = 0.0;
  int sample_rate_hz = 0;
};

/// Candidate source recordings per target class.
struct SourcePool {
  PerClass<std::vector<SourceFile>> files;

  const std::vector<SourceFile>& of(SoundClass c) const {
    return files[class_index(c)];
  }
  std::vector<SourceFile>& of(SoundClass c) { return files[class_index(c)]; }

  /// Reads a CSV `file,class` (class = anthropophony|biophony|geophony or
  /// A|B|G). Relative paths resolve against the manifest's directory.
  /// Durations come from the WAV headers.
  static SourcePool load_manifest(const std::filesystem::path& manifest);
};

using ClipLoader = std::function<AudioClip(const SourceFile&)>;
/// decode_wav on SourceFile::path.
AudioClip load_source_file(const SourceFile& file);

struct LayerDraw {
  SoundClass cls = SoundClass::kAnthropophony;
  std::size_t file_index = 0;
  double gain_db = 0.0;
  /// RMS(mix so far) / RMS(this layer) in dB; absent for the first layer.
  std::optional<double> snr_db;
  /// Crop start inside sources longer than the target length.
  double offset_s = 0.0;
};

struct NoiseDraw {
  NoiseKind kind = NoiseKind::kWhiteGaussian;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

/// Complete provenance of one mixture; rendering is a pure function of the
/// recipe, the pool and the mixer config.
struct MixRecipe {
  LabelSet active;
  std::vector<LayerDraw> layers;  // in order of addition
  std::optional<NoiseDraw> noise;
  double target_len_s = 5.0;
  int target_rate_hz = 32000;
  std::uint64_t seed = 0;

  PerClass<int> file_counts() const;
  /// Stable one-line text form; input to digest().
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), 16 hex digits.
  std::string digest() const;
};

struct SilenceDraw {
  NoiseKind kind = NoiseKind::kWhiteGaussian;
  double initial_gain_db = 0.0;
  double attenuation_db = 0.0;
  std::uint64_t noise_seed = 0;

  std::string canonical() const;
};

struct MixedClip {
  AudioClip clip;
  LabelSet labels;
  std::optional<MixRecipe> recipe;    // mixtures
  std::optional<SilenceDraw> silence; // silence clips
};

/// Samples file counts, files, gains, SNRs, crop offsets, layer order and
/// the optional noise layer. Deterministic in `seed`.
MixRecipe draw_recipe(const SourcePool& pool, LabelSet active,
                      std::uint64_t seed, const MixerConfig& config = {});

/// Checks the count/range invariants of a recipe against `config`.
void validate_recipe(const MixRecipe& recipe, const MixerConfig& config = {});

/// Noise normalised to peak 1. Pink noise uses the Voss-McCartney
/// algorithm with 16 rows.
std::vector<float> make_noise(NoiseKind kind, std::size_t n,
                              std::uint64_t seed);

/// Loops (with a linear crossfade) or crops `source` to `target` samples.
std::vector<float> fit_to_length(std::span<const float> source,
                                 std::size_t target, std::size_t offset,
                                 std::size_t crossfade);

/// One layer ready for mixing: loaded, resampled, fitted, per-file gain
/// applied.
std::vector<float> prepare_layer(const LayerDraw& layer,
                                 const SourcePool& pool,
                                 const ClipLoader& loader,
                                 const MixerConfig& config);

/// Factor applied to an incoming layer so that rms_mix / (factor *
/// rms_layer) equals `snr_db`. Returns 1 when either level is zero.
double snr_scale(double rms_mix, double rms_layer, double snr_db);

/// Sequential mixing: each layer is scaled to its drawn SNR against the
/// running mix, added, and the running mix is normalised.
MixedClip render_mix(const MixRecipe& recipe, const SourcePool& pool,
                     const MixerConfig& config = {},
                     const ClipLoader& loader = load_source_file);

SilenceDraw draw_silence(std::uint64_t seed, const MixerConfig& config = {});
/// Zero waveform + noise at the initial gain, then the attenuation stage.
AudioClip render_silence_draw(const SilenceDraw& draw,
                              const MixerConfig& config = {});
MixedClip render_silence(std::uint64_t seed, const MixerConfig& config = {});

/// Class combination -> number of clips. The silence combination is "S".
using CorpusCounts = std::map<LabelSet, std::size_t>;

/// "A=2,BG=3,S=1" -> counts.
CorpusCounts parse_corpus_counts(std::string_view text);

struct CorpusEntry {
  std::string file;
  LabelSet labels;
  std::uint64_t seed = 0;
  std::string recipe_digest;
};

/// Renders every requested clip as 16-bit 32 kHz mono WAV under `out_dir`
/// and writes `manifest.csv` there. Clip k (in A, B, G, AB, AG, BG, ABG, S
/// order) uses derive_seed(seed, k), so the corpus is identical for any
/// `jobs`.
std::vector<CorpusEntry> build_corpus(const SourcePool& pool,
                                      const CorpusCounts& counts,
                                      std::uint64_t seed,
                                      const std::filesystem::path& out_dir,
                                      const MixerConfig& config = {},
                                      std::size_t jobs = 1,
                                      const ClipLoader& loader = load_source_file);

/// Header: file,anthropophony,biophony,geophony,silence,seed,recipe
void write_corpus_manifest(std::ostream& out,
                           std::span<const CorpusEntry> entries);

}  // namespace soundscape
