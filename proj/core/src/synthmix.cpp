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

#include "soundscape/synthmix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "soundscape/csv.hpp"
#include "soundscape/error.hpp"
#include "soundscape/parallel.hpp"
#include "soundscape/rng.hpp"

namespace soundscape {
namespace {

double db_to_gain(double db) { return std::pow(10.0, db / 20.0); }

void check_range(double lo, double hi, const char* what) {
  if (!(lo <= hi)) {
    throw ValidationError(std::string("mixer config: ") + what +
                          " range is empty");
  }
}

void check_weights(const std::vector<double>& w, std::size_t max_len,
                   const char* what) {
  if (w.empty() || w.size() > max_len) {
    throw ValidationError(std::string("mixer config: ") + what +
                          " needs 1.." + std::to_string(max_len) + " weights");
  }
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) {
      throw ValidationError(std::string("mixer config: negative weight in ") + what);
    }
    total += x;
  }
  if (!(total > 0.0)) {
    throw ValidationError(std::string("mixer config: ") + what + " weights sum to 0");
  }
}

bool in_range(double v, double lo, double hi) {
  return v >= lo - 1e-12 && v <= hi + 1e-12;
}

void normalize(std::vector<float>& mix, const MixerConfig& config) {
  double factor = 1.0;
  const double p = peak(mix);
  if (config.normalization == MixNormalization::kPeak) {
    if (p > 0.0) factor = config.peak_target / p;
  } else {
    const double r = rms(mix);
    if (r > 0.0) factor = config.rms_target / r;
    if (p * factor > config.peak_target) factor = config.peak_target / p;
  }
  for (auto& s : mix) s = static_cast<float>(s * factor);
}

// Adds `layer` to the running mix at `snr_db` and renormalises.
void add_layer(std::vector<float>& mix, std::vector<float> layer,
               std::optional<double> snr_db, const MixerConfig& config) {
  if (snr_db) {
    const double scale = snr_scale(rms(mix), rms(layer), *snr_db);
    for (std::size_t i = 0; i < mix.size(); ++i) {
      mix[i] = static_cast<float>(mix[i] + scale * layer[i]);
    }
  } else {
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += layer[i];
  }
  normalize(mix, config);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string_view noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhiteGaussian: return "white-gaussian";
    case NoiseKind::kWhiteUniform: return "white-uniform";
    case NoiseKind::kPink: return "pink";
  }
  return "unknown";
}

std::size_t MixerConfig::target_samples() const {
  return static_cast<std::size_t>(std::llround(target_len_s * target_rate_hz));
}

const std::vector<double>& MixerConfig::count_weights(int n_active) const {
  switch (n_active) {
    case 1: return single_class_counts;
    case 2: return two_class_counts;
    case 3: return three_class_counts;
    default:
      throw ValidationError("mixer: need 1 to 3 active classes, got " +
                            std::to_string(n_active));
  }
}

void MixerConfig::validate() const {
  check_weights(single_class_counts, 4, "single_class_counts");
  check_weights(two_class_counts, 3, "two_class_counts");
  check_weights(three_class_counts, 2, "three_class_counts");
  check_range(gain_db_min, gain_db_max, "gain_db");
  check_range(snr_db_min, snr_db_max, "snr_db");
  check_range(noise_snr_db_min, noise_snr_db_max, "noise_snr_db");
  check_range(silence_gain_db_min, silence_gain_db_max, "silence_gain_db");
  check_range(silence_attenuation_db_min, silence_attenuation_db_max,
              "silence_attenuation_db");
  if (!(noise_probability >= 0.0 && noise_probability <= 1.0)) {
    throw ValidationError("mixer config: noise_probability must be in [0, 1]");
  }
  if (!(peak_target > 0.0 && peak_target <= 1.0)) {
    throw ValidationError("mixer config: peak_target must be in (0, 1]");
  }
  if (!(rms_target > 0.0)) {
    throw ValidationError("mixer config: rms_target must be positive");
  }
  if (!(crossfade_ms >= 0.0)) {
    throw ValidationError("mixer config: crossfade_ms must be >= 0");
  }
  if (!(target_len_s > 0.0) || target_rate_hz <= 0) {
    throw ValidationError("mixer config: target length and rate must be positive");
  }
}

SourcePool SourcePool::load_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open " + manifest.string());
  CsvReader csv(in, manifest.string());
  csv.read_header();
  const auto file_col = csv.require_column("file");
  const auto class_col = csv.require_column("class");
  const auto base = manifest.parent_path();

  SourcePool pool;
  std::vector<std::string> row;
  while (csv.next(row)) {
    const auto cls = parse_class(row[class_col]);
    if (!cls || *cls == SoundClass::kSilence) {
      csv.fail("class must be anthropophony, biophony or geophony, got '" +
               row[class_col] + "'");
    }
    std::filesystem::path path = row[file_col];
    if (path.is_relative()) path = base / path;
    const WavInfo info = probe_wav(path);
    pool.of(*cls).push_back(
        {path.string(), info.duration_s(), info.sample_rate_hz});
  }
  return pool;
}

AudioClip load_source_file(const SourceFile& file) {
  return decode_wav(file.path);
}

PerClass<int> MixRecipe::file_counts() const {
  PerClass<int> counts{};
  for (const auto& layer : layers) ++counts[class_index(layer.cls)];
  return counts;
}

std::string MixRecipe::canonical() const {
  std::ostringstream out;
  out << "active=" << active.code() << ";len=" << format_double(target_len_s)
      << ";rate=" << target_rate_hz << ";seed=" << seed;
  for (const auto& layer : layers) {
    out << ";layer=" << class_letter(layer.cls) << ':' << layer.file_index
        << ':' << format_double(layer.gain_db) << ':'
        << (layer.snr_db ? format_double(*layer.snr_db) : std::string("-"))
        << ':' << format_double(layer.offset_s);
  }
  if (noise) {
    out << ";noise=" << noise_kind_name(noise->kind) << ':'
        << format_double(noise->snr_db) << ':' << noise->seed;
  }
  return out.str();
}

std::string MixRecipe::digest() const { return hex64(fnv1a(canonical())); }

std::string SilenceDraw::canonical() const {
  std::ostringstream out;
  out << "silence=" << noise_kind_name(kind) << ':'
      << format_double(initial_gain_db) << ':' << format_double(attenuation_db)
      << ':' << noise_seed;
  return out.str();
}

MixRecipe draw_recipe(const SourcePool& pool, LabelSet active,
                      std::uint64_t seed, const MixerConfig& config) {
  config.validate();
  active = active.targets();
  if (active.empty()) throw ValidationError("draw_recipe: no active class");
  for (auto c : kTargetClasses) {
    if (active.contains(c) && pool.of(c).empty()) {
      throw ValidationError("draw_recipe: source pool has no " +
                            std::string(class_name(c)) + " files");
    }
  }

  Rng rng(seed);
  MixRecipe recipe;
  recipe.active = active;
  recipe.seed = seed;
  recipe.target_len_s = config.target_len_s;
  recipe.target_rate_hz = config.target_rate_hz;

  const auto& weights = config.count_weights(active.size());
  for (auto c : kTargetClasses) {
    if (!active.contains(c)) continue;
    const std::size_t count = 1 + rng.discrete(weights);
    const auto& files = pool.of(c);
    // Distinct files while the pool allows it, then with replacement.
    std::vector<std::size_t> order(files.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t pick;
      if (i < order.size()) {
        const std::size_t j = i + rng.index(order.size() - i);
        std::swap(order[i], order[j]);
        pick = order[i];
      } else {
        pick = rng.index(files.size());
      }
      LayerDraw layer;
      layer.cls = c;
      layer.file_index = pick;
      layer.gain_db = rng.uniform(config.gain_db_min, config.gain_db_max);
      const double spare = files[pick].duration_s - config.target_len_s;
      layer.offset_s = spare > 0.0 ? rng.uniform(0.0, spare) : 0.0;
      recipe.layers.push_back(layer);
    }
  }

  for (std::size_t i = recipe.layers.size(); i > 1; --i) {
    std::swap(recipe.layers[i - 1], recipe.layers[rng.index(i)]);
  }
  for (std::size_t i = 1; i < recipe.layers.size(); ++i) {
    recipe.layers[i].snr_db = rng.uniform(config.snr_db_min, config.snr_db_max);
  }

  if (rng.bernoulli(config.noise_probability)) {
    NoiseDraw noise;
    noise.kind = static_cast<NoiseKind>(rng.index(3));
    noise.snr_db = rng.uniform(config.noise_snr_db_min, config.noise_snr_db_max);
    noise.seed = rng.next_u64();
    recipe.noise = noise;
  }
  return recipe;
}

void validate_recipe(const MixRecipe& recipe, const MixerConfig& config) {
  const LabelSet active = recipe.active.targets();
  if (active.empty() || active != recipe.active) {
    throw ValidationError("recipe: active set must be a non-empty subset of {A, B, G}");
  }
  if (recipe.layers.empty()) throw ValidationError("recipe: no layers");
  const auto counts = recipe.file_counts();
  const auto max_per_class =
      static_cast<int>(config.count_weights(active.size()).size());
  int total = 0;
  for (auto c : kTargetClasses) {
    const int n = counts[class_index(c)];
    total += n;
    if (active.contains(c) != (n > 0)) {
      throw ValidationError("recipe: layers do not match the active classes");
    }
    if (n > max_per_class) {
      throw ValidationError("recipe: too many " + std::string(class_name(c)) +
                            " files (" + std::to_string(n) + ")");
    }
  }
  if (active.size() == 1 && total > 4) {
    throw ValidationError("recipe: single-class mixtures use at most 4 files");
  }
  for (std::size_t i = 0; i < recipe.layers.size(); ++i) {
    const auto& layer = recipe.layers[i];
    if (!in_range(layer.gain_db, config.gain_db_min, config.gain_db_max)) {
      throw ValidationError("recipe: gain out of range");
    }
    if ((i == 0) != !layer.snr_db.has_value()) {
      throw ValidationError("recipe: every layer after the first needs an SNR");
    }
    if (layer.snr_db &&
        !in_range(*layer.snr_db, config.snr_db_min, config.snr_db_max)) {
      throw ValidationError("recipe: layer SNR out of range");
    }
  }
  if (recipe.noise &&
      !in_range(recipe.noise->snr_db, config.noise_snr_db_min,
                config.noise_snr_db_max)) {
    throw ValidationError("recipe: noise SNR out of range");
  }
}

std::vector<float> make_noise(NoiseKind kind, std::size_t n,
                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n, 0.0);
  switch (kind) {
    case NoiseKind::kWhiteGaussian:
      for (auto& v : x) v = rng.normal();
      break;
    case NoiseKind::kWhiteUniform:
      for (auto& v : x) v = rng.uniform(-1.0, 1.0);
      break;
    case NoiseKind::kPink: {
      // Voss-McCartney: row r is redrawn every 2^r samples (the row picked
      // by the counter's trailing zeros), plus a white term every sample.
      constexpr int kRows = 16;
      std::array<double, kRows> rows{};
      double running = 0.0;
      for (auto& r : rows) {
        r = rng.uniform(-1.0, 1.0);
        running += r;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto counter = static_cast<std::uint64_t>(i + 1);
        const int row = std::min(kRows - 1, std::countr_zero(counter));
        running -= rows[row];
        rows[row] = rng.uniform(-1.0, 1.0);
        running += rows[row];
        x[i] = running + rng.uniform(-1.0, 1.0);
      }
      const double mean = n ? std::accumulate(x.begin(), x.end(), 0.0) / n : 0.0;
      for (auto& v : x) v -= mean;
      break;
    }
  }
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<float>(p > 0.0 ? x[i] / p : 0.0);
  }
  return out;
}

std::vector<float> fit_to_length(std::span<const float> source,
                                 std::size_t target, std::size_t offset,
                                 std::size_t crossfade) {
  if (source.empty()) throw ValidationError("fit_to_length: empty source");
  if (source.size() >= target) {
    offset = std::min(offset, source.size() - target);
    return {source.begin() + static_cast<std::ptrdiff_t>(offset),
            source.begin() + static_cast<std::ptrdiff_t>(offset + target)};
  }
  // Loop; each repetition overlaps the previous tail by `crossfade` samples.
  if (crossfade >= source.size()) crossfade = 0;
  std::vector<float> out(source.begin(), source.end());
  out.reserve(target + source.size());
  while (out.size() < target) {
    const std::size_t join = out.size() - crossfade;
    for (std::size_t i = 0; i < crossfade; ++i) {
      const double w = static_cast<double>(i + 1) / (crossfade + 1);
      out[join + i] = static_cast<float>((1.0 - w) * out[join + i] + w * source[i]);
    }
    out.insert(out.end(), source.begin() + static_cast<std::ptrdiff_t>(crossfade),
               source.end());
  }
  out.resize(target);
  return out;
}

std::vector<float> prepare_layer(const LayerDraw& layer,
                                 const SourcePool& pool,
                                 const ClipLoader& loader,
                                 const MixerConfig& config) {
  const auto& files = pool.of(layer.cls);
  if (layer.file_index >= files.size()) {
    throw ValidationError("recipe refers to missing " +
                          std::string(class_name(layer.cls)) + " file #" +
                          std::to_string(layer.file_index));
  }
  const AudioClip clip = resample(loader(files[layer.file_index]),
                                  config.target_rate_hz);
  const auto offset = static_cast<std::size_t>(
      std::llround(layer.offset_s * config.target_rate_hz));
  const auto crossfade = static_cast<std::size_t>(
      std::llround(config.crossfade_ms * 1e-3 * config.target_rate_hz));
  auto out = fit_to_length(clip.samples, config.target_samples(), offset,
                           crossfade);
  const double gain = db_to_gain(layer.gain_db);
  for (auto& s : out) s = static_cast<float>(s * gain);
  return out;
}

double snr_scale(double rms_mix, double rms_layer, double snr_db) {
  if (!(rms_mix > 0.0) || !(rms_layer > 0.0)) return 1.0;
  return rms_mix / (rms_layer * db_to_gain(snr_db));
}

MixedClip render_mix(const MixRecipe& recipe, const SourcePool& pool,
                     const MixerConfig& config, const ClipLoader& loader) {
  if (recipe.layers.empty()) throw ValidationError("render_mix: recipe has no layers");
  MixerConfig effective = config;
  effective.target_len_s = recipe.target_len_s;
  effective.target_rate_hz = recipe.target_rate_hz;
  const std::size_t n = effective.target_samples();

  std::vector<float> mix(n, 0.0f);
  for (const auto& layer : recipe.layers) {
    add_layer(mix, prepare_layer(layer, pool, loader, effective), layer.snr_db,
              effective);
  }
  if (recipe.noise) {
    add_layer(mix, make_noise(recipe.noise->kind, n, recipe.noise->seed),
              recipe.noise->snr_db, effective);
  }

  MixedClip out;
  out.clip.samples = std::move(mix);
  out.clip.sample_rate_hz = recipe.target_rate_hz;
  out.clip.source_id = "mix:" + recipe.digest();
  out.labels = recipe.active;
  out.recipe = recipe;
  return out;
}

SilenceDraw draw_silence(std::uint64_t seed, const MixerConfig& config) {
  config.validate();
  Rng rng(seed);
  SilenceDraw draw;
  draw.kind = static_cast<NoiseKind>(rng.index(3));
  draw.initial_gain_db =
      rng.uniform(config.silence_gain_db_min, config.silence_gain_db_max);
  draw.attenuation_db = rng.uniform(config.silence_attenuation_db_min,
                                    config.silence_attenuation_db_max);
  draw.noise_seed = rng.next_u64();
  return draw;
}

AudioClip render_silence_draw(const SilenceDraw& draw,
                              const MixerConfig& config) {
  const std::size_t n = config.target_samples();
  std::vector<float> samples(n, 0.0f);
  const auto noise = make_noise(draw.kind, n, draw.noise_seed);
  const double gain =
      db_to_gain(draw.initial_gain_db) * db_to_gain(draw.attenuation_db);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = static_cast<float>(
        std::clamp(samples[i] + gain * noise[i], -1.0, 1.0));
  }
  AudioClip clip;
  clip.samples = std::move(samples);
  clip.sample_rate_hz = config.target_rate_hz;
  clip.source_id = "silence";
  return clip;
}

MixedClip render_silence(std::uint64_t seed, const MixerConfig& config) {
  MixedClip out;
  out.silence = draw_silence(seed, config);
  out.clip = render_silence_draw(*out.silence, config);
  out.labels = LabelSet::of({SoundClass::kSilence});
  return out;
}

CorpusCounts parse_corpus_counts(std::string_view text) {
  CorpusCounts counts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ValidationError("counts: expected COMBO=N, got '" +
                              std::string(item) + "'");
      }
      LabelSet combo = LabelSet::parse_code(trim(item.substr(0, eq)));
      if (combo.contains(SoundClass::kSilence) &&
          combo != LabelSet::of({SoundClass::kSilence})) {
        throw ValidationError("counts: silence cannot be combined with other classes");
      }
      const auto num = trim(item.substr(eq + 1));
      long long n = -1;
      try {
        std::size_t used = 0;
        n = std::stoll(std::string(num), &used);
        if (used != num.size()) n = -1;
      } catch (const std::exception&) {
        n = -1;
      }
      if (n < 0) {
        throw ValidationError("counts: bad count in '" + std::string(item) + "'");
      }
      counts[combo] += static_cast<std::size_t>(n);
    }
    start = end + 1;
  }
  return counts;
}

namespace {

// Fixed generation order: A, B, G, AB, AG, BG, ABG, S.
std::vector<LabelSet> combination_order() {
  using enum SoundClass;
  return {LabelSet::of({kAnthropophony}),
          LabelSet::of({kBiophony}),
          LabelSet::of({kGeophony}),
          LabelSet::of({kAnthropophony, kBiophony}),
          LabelSet::of({kAnthropophony, kGeophony}),
          LabelSet::of({kBiophony, kGeophony}),
          LabelSet::of({kAnthropophony, kBiophony, kGeophony}),
          LabelSet::of({kSilence})};
}

}  // namespace

std::vector<CorpusEntry> build_corpus(const SourcePool& pool,
                                      const CorpusCounts& counts,
                                      std::uint64_t seed,
                                      const std::filesystem::path& out_dir,
                                      const MixerConfig& config,
                                      std::size_t jobs,
                                      const ClipLoader& loader) {
  config.validate();
  const auto order = combination_order();
  for (const auto& [combo, n] : counts) {
    if (std::find(order.begin(), order.end(), combo) == order.end()) {
      throw ValidationError("build_corpus: unsupported combination " + combo.code());
    }
  }

  struct Job {
    LabelSet combo;
    std::size_t index_in_combo;
  };
  std::vector<Job> work;
  for (const auto& combo : order) {
    const auto it = counts.find(combo);
    if (it == counts.end()) continue;
    for (std::size_t i = 0; i < it->second; ++i) work.push_back({combo, i});
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory " + out_dir.string());
  }

  std::vector<CorpusEntry> entries(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t k) {
    const Job& job = work[k];
    CorpusEntry& entry = entries[k];
    entry.seed = derive_seed(seed, k);
    entry.labels = job.combo;
    MixedClip clip;
    if (job.combo.contains(SoundClass::kSilence)) {
      clip = render_silence(entry.seed, config);
      entry.recipe_digest = hex64(fnv1a(clip.silence->canonical()));
    } else {
      const MixRecipe recipe = draw_recipe(pool, job.combo, entry.seed, config);
      clip = render_mix(recipe, pool, config, loader);
      entry.recipe_digest = recipe.digest();
    }
    char name[64];
    std::snprintf(name, sizeof(name), "%06zu_%s.wav", k, job.combo.code().c_str());
    entry.file = name;
    write_wav_pcm16(out_dir / entry.file, clip.clip);
  });

  std::ofstream manifest(out_dir / "manifest.csv", std::ios::trunc);
  if (!manifest) throw IoError("cannot write " + (out_dir / "manifest.csv").string());
  write_corpus_manifest(manifest, entries);
  if (!manifest) throw IoError("write failed: " + (out_dir / "manifest.csv").string());
  return entries;
}

void write_corpus_manifest(std::ostream& out,
                           std::span<const CorpusEntry> entries) {
  out << "file,anthropophony,biophony,geophony,silence,seed,recipe\n";
  for (const auto& e : entries) {
    out << e.file;
    for (auto c : {SoundClass::kAnthropophony, SoundClass::kBiophony,
                   SoundClass::kGeophony, SoundClass::kSilence}) {
      out << ',' << (e.labels.contains(c) ? 1 : 0);
    }
    out << ',' << e.seed << ',' << e.recipe_digest << '\n';
  }
}

}  // namespace soundscape
