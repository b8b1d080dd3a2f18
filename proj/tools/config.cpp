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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

#include "soundscape/error.hpp"

namespace soundscape::cli {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw ValidationError("config: '" + std::string(where) + "' must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ValidationError("config: unknown key '" + key + "' in '" +
                            std::string(where) + "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: bad value for '") + key +
                          "': " + e.what());
  }
}

template <typename T>
void read_optional(const json& obj, const char* key, std::optional<T>& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (it->is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(obj, key, value);
  out = value;
}

PerClass<double> read_per_class(const json& obj, std::string_view where) {
  check_keys(obj, where, {"anthropophony", "biophony", "geophony"});
  PerClass<double> out{};
  for (auto c : kTargetClasses) {
    const auto name = std::string(class_name(c));
    if (!obj.contains(name) || !obj[name].is_number()) {
      throw ValidationError("config: '" + std::string(where) + "' needs a number for " + name);
    }
    out[class_index(c)] = obj[name].get<double>();
  }
  return out;
}

json per_class_json(const PerClass<double>& v) {
  json out = json::object();
  for (auto c : kTargetClasses) out[std::string(class_name(c))] = v[class_index(c)];
  return out;
}

FrequencyBand read_band(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ValidationError(std::string("config: '") + what +
                          "' must be [low_hz, high_hz]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

void parse_thresholds(const json& t, RunConfig& cfg) {
  const std::string mode = t.value("mode", "global");
  if (mode == "global") {
    check_keys(t, "thresholds", {"mode", "value"});
    double value = 0.5;
    read(t, "value", value);
    cfg.thresholds.mode = ThresholdMode::kGlobal;
    cfg.thresholds.thresholds = {value, value, value};
  } else if (mode == "per-class") {
    check_keys(t, "thresholds", {"mode", "anthropophony", "biophony", "geophony"});
    json values = t;
    values.erase("mode");
    cfg.thresholds.mode = ThresholdMode::kPerClass;
    cfg.thresholds.thresholds = read_per_class(values, "thresholds");
  } else {
    throw ValidationError("config: thresholds.mode must be 'global' or 'per-class'");
  }
}

void parse_pda(const json& p, RunConfig& cfg) {
  check_keys(p, "pda", {"mode", "anthropophony", "biophony", "geophony"});
  const std::string mode = p.value("mode", "summed");
  if (mode == "summed") {
    cfg.pda.mode = PdaMode::kSummed;
  } else if (mode == "longest") {
    cfg.pda.mode = PdaMode::kLongest;
  } else {
    throw ValidationError("config: pda.mode must be 'summed' or 'longest'");
  }
  for (auto c : kTargetClasses) {
    read_optional(p, std::string(class_name(c)).c_str(),
                  cfg.pda.fraction[class_index(c)]);
  }
}

void parse_indices(const json& j, IndexParams& ix) {
  check_keys(j, "indices", {"window_len", "hop", "aci_chunk_s", "adi", "ndsi"});
  read(j, "window_len", ix.window_len);
  read(j, "hop", ix.hop);
  read_optional(j, "aci_chunk_s", ix.aci_chunk_s);
  if (j.contains("adi")) {
    const auto& a = j["adi"];
    check_keys(a, "indices.adi",
               {"band_width_hz", "max_freq_hz", "db_threshold", "reference_magnitude"});
    read(a, "band_width_hz", ix.adi.band_width_hz);
    read(a, "max_freq_hz", ix.adi.max_freq_hz);
    read(a, "db_threshold", ix.adi.db_threshold);
    read_optional(a, "reference_magnitude", ix.adi.reference_magnitude);
  }
  if (j.contains("ndsi")) {
    const auto& n = j["ndsi"];
    check_keys(n, "indices.ndsi", {"anthro", "bio", "segment_len", "power_floor"});
    if (n.contains("anthro")) ix.ndsi.anthro = read_band(n["anthro"], "ndsi.anthro");
    if (n.contains("bio")) ix.ndsi.bio = read_band(n["bio"], "ndsi.bio");
    read(n, "segment_len", ix.ndsi.segment_len);
    read(n, "power_floor", ix.ndsi.power_floor);
  }
}

void parse_mixer(const json& j, MixerConfig& m) {
  check_keys(j, "mixer",
             {"single_class_counts", "two_class_counts", "three_class_counts",
              "gain_db", "snr_db", "noise_probability", "noise_snr_db",
              "silence_gain_db", "silence_attenuation_db", "normalization",
              "peak_target", "rms_target", "crossfade_ms", "target_len_s",
              "target_rate_hz"});
  read(j, "single_class_counts", m.single_class_counts);
  read(j, "two_class_counts", m.two_class_counts);
  read(j, "three_class_counts", m.three_class_counts);
  auto range = [&](const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const auto& r = j[key];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
      throw ValidationError(std::string("config: mixer.") + key + " must be [min, max]");
    }
    lo = r[0].get<double>();
    hi = r[1].get<double>();
  };
  range("gain_db", m.gain_db_min, m.gain_db_max);
  range("snr_db", m.snr_db_min, m.snr_db_max);
  range("noise_snr_db", m.noise_snr_db_min, m.noise_snr_db_max);
  range("silence_gain_db", m.silence_gain_db_min, m.silence_gain_db_max);
  range("silence_attenuation_db", m.silence_attenuation_db_min,
        m.silence_attenuation_db_max);
  read(j, "noise_probability", m.noise_probability);
  if (j.contains("normalization")) {
    const std::string norm = j["normalization"].get<std::string>();
    if (norm == "peak") {
      m.normalization = MixNormalization::kPeak;
    } else if (norm == "rms") {
      m.normalization = MixNormalization::kRms;
    } else {
      throw ValidationError("config: mixer.normalization must be 'peak' or 'rms'");
    }
  }
  read(j, "peak_target", m.peak_target);
  read(j, "rms_target", m.rms_target);
  read(j, "crossfade_ms", m.crossfade_ms);
  read(j, "target_len_s", m.target_len_s);
  read(j, "target_rate_hz", m.target_rate_hz);
}

}  // namespace

std::size_t RunConfig::expected_windows() const {
  return enumerate_windows(default_duration_s, windows).size();
}

void RunConfig::validate() const {
  windows.validate();
  if (!(default_duration_s > 0.0)) {
    throw ValidationError("config: annotations.default_duration_s must be positive");
  }
  pda.validate();
  thresholds.validate(expected_windows());
  mixer.validate();
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ValidationError("config: evaluation.confidence must be in (0, 1)");
  }
  if (jobs == 0) throw ValidationError("config: jobs must be >= 1");
}

EvalOptions RunConfig::eval_options() const {
  EvalOptions o;
  o.bootstrap_resamples = bootstrap_resamples;
  o.confidence = confidence;
  o.seed = seed;
  o.jobs = jobs;
  return o;
}

RunConfig parse_config(const json& doc) {
  if (doc.is_null()) {
    RunConfig cfg;
    cfg.validate();
    return cfg;
  }
  check_keys(doc, "<root>",
             {"seed", "jobs", "windows", "thresholds", "counts",
              "count_fractions", "pda", "annotations", "indices", "mixer",
              "evaluation"});
  RunConfig cfg;
  read(doc, "seed", cfg.seed);
  read(doc, "jobs", cfg.jobs);
  if (doc.contains("windows")) {
    const auto& w = doc["windows"];
    check_keys(w, "windows", {"window_len_s", "step_s", "pad_last"});
    read(w, "window_len_s", cfg.windows.window_len_s);
    read(w, "step_s", cfg.windows.step_s);
    read(w, "pad_last", cfg.windows.pad_last);
  }
  if (doc.contains("annotations")) {
    const auto& a = doc["annotations"];
    check_keys(a, "annotations", {"default_duration_s"});
    read(a, "default_duration_s", cfg.default_duration_s);
  }
  if (doc.contains("thresholds")) parse_thresholds(doc["thresholds"], cfg);
  if (doc.contains("pda") && !doc["pda"].is_null()) parse_pda(doc["pda"], cfg);
  if (doc.contains("indices")) parse_indices(doc["indices"], cfg.indices);
  if (doc.contains("mixer")) parse_mixer(doc["mixer"], cfg.mixer);
  if (doc.contains("evaluation")) {
    const auto& e = doc["evaluation"];
    check_keys(e, "evaluation", {"bootstrap_resamples", "confidence"});
    read(e, "bootstrap_resamples", cfg.bootstrap_resamples);
    read(e, "confidence", cfg.confidence);
  }

  const bool has_counts = doc.contains("counts") && !doc["counts"].is_null();
  const bool has_fractions =
      doc.contains("count_fractions") && !doc["count_fractions"].is_null();
  if (has_counts && has_fractions) {
    throw ValidationError("config: give either 'counts' or 'count_fractions', not both");
  }
  if (has_counts) {
    const auto values = read_per_class(doc["counts"], "counts");
    PerClass<int> counts{};
    for (std::size_t c = 0; c < kNumTargetClasses; ++c) {
      if (values[c] != std::floor(values[c])) {
        throw ValidationError("config: counts must be integers");
      }
      counts[c] = static_cast<int>(values[c]);
    }
    cfg.thresholds.counts = counts;
  }
  if (has_fractions) {
    cfg.count_fractions = read_per_class(doc["count_fractions"], "count_fractions");
    cfg.windows.validate();
    const std::size_t w = cfg.expected_windows();
    PerClass<int> counts{};
    for (std::size_t c = 0; c < kNumTargetClasses; ++c) {
      counts[c] = count_for_fraction((*cfg.count_fractions)[c], w);
    }
    cfg.thresholds.counts = counts;
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(std::span<const std::filesystem::path> paths) {
  json merged = json::object();
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json doc;
    try {
      doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
    try {
      merged.merge_patch(doc);
    } catch (const json::exception& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  }
  try {
    return parse_config(merged);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

json threshold_fragment(const ThresholdPolicy& policy) {
  json t;
  if (policy.mode == ThresholdMode::kGlobal) {
    t = {{"mode", "global"}, {"value", policy.thresholds[0]}};
  } else {
    t = per_class_json(policy.thresholds);
    t["mode"] = "per-class";
  }
  json out = {{"thresholds", t}};
  if (policy.counts) {
    json counts = json::object();
    for (auto c : kTargetClasses) {
      counts[std::string(class_name(c))] = (*policy.counts)[class_index(c)];
    }
    out["counts"] = counts;
  }
  return out;
}

json to_json(const RunConfig& cfg) {
  json out = threshold_fragment(cfg.thresholds);
  out["seed"] = cfg.seed;
  out["jobs"] = cfg.jobs;
  out["windows"] = {{"window_len_s", cfg.windows.window_len_s},
                    {"step_s", cfg.windows.step_s},
                    {"pad_last", cfg.windows.pad_last}};
  json pda = {{"mode", cfg.pda.mode == PdaMode::kSummed ? "summed" : "longest"}};
  for (auto c : kTargetClasses) {
    const auto& p = cfg.pda.fraction[class_index(c)];
    pda[std::string(class_name(c))] = p ? json(*p) : json(nullptr);
  }
  out["pda"] = pda;
  out["annotations"] = {{"default_duration_s", cfg.default_duration_s}};
  const auto& ix = cfg.indices;
  out["indices"] = {
      {"window_len", ix.window_len},
      {"hop", ix.hop},
      {"aci_chunk_s", ix.aci_chunk_s ? json(*ix.aci_chunk_s) : json(nullptr)},
      {"adi",
       {{"band_width_hz", ix.adi.band_width_hz},
        {"max_freq_hz", ix.adi.max_freq_hz},
        {"db_threshold", ix.adi.db_threshold},
        {"reference_magnitude", ix.adi.reference_magnitude
                                    ? json(*ix.adi.reference_magnitude)
                                    : json(nullptr)}}},
      {"ndsi",
       {{"anthro", {ix.ndsi.anthro.low_hz, ix.ndsi.anthro.high_hz}},
        {"bio", {ix.ndsi.bio.low_hz, ix.ndsi.bio.high_hz}},
        {"segment_len", ix.ndsi.segment_len},
        {"power_floor", ix.ndsi.power_floor}}}};
  const auto& m = cfg.mixer;
  out["mixer"] = {
      {"single_class_counts", m.single_class_counts},
      {"two_class_counts", m.two_class_counts},
      {"three_class_counts", m.three_class_counts},
      {"gain_db", {m.gain_db_min, m.gain_db_max}},
      {"snr_db", {m.snr_db_min, m.snr_db_max}},
      {"noise_probability", m.noise_probability},
      {"noise_snr_db", {m.noise_snr_db_min, m.noise_snr_db_max}},
      {"silence_gain_db", {m.silence_gain_db_min, m.silence_gain_db_max}},
      {"silence_attenuation_db",
       {m.silence_attenuation_db_min, m.silence_attenuation_db_max}},
      {"normalization", m.normalization == MixNormalization::kPeak ? "peak" : "rms"},
      {"peak_target", m.peak_target},
      {"rms_target", m.rms_target},
      {"crossfade_ms", m.crossfade_ms},
      {"target_len_s", m.target_len_s},
      {"target_rate_hz", m.target_rate_hz}};
  out["evaluation"] = {{"bootstrap_resamples", cfg.bootstrap_resamples},
                       {"confidence", cfg.confidence}};
  return out;
}

}  // namespace soundscape::cli
