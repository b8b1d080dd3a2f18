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
#include <optional>
#include <span>

#include <json.hpp>

#include "soundscape/decision.hpp"
#include "soundscape/eval.hpp"
#include "soundscape/indices.hpp"
#include "soundscape/scores.hpp"
#include "soundscape/synthmix.hpp"

namespace soundscape::cli {

/// Everything a command needs beyond its input files. Loaded from one or
/// more JSON documents; every embedded policy is validated on load.
struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  WindowSpec windows;
  ThresholdPolicy thresholds = ThresholdPolicy::global(0.5);
  /// Count-based mode given as fractions of the window count (resolved into
  /// thresholds.counts with count_for_fraction on load).
  std::optional<PerClass<double>> count_fractions;
  PdaPolicy pda;
  double default_duration_s = 60.0;
  IndexParams indices;
  MixerConfig mixer;
  std::size_t bootstrap_resamples = 1000;
  double confidence = 0.95;

  /// Windows per recording of default_duration_s under `windows`.
  std::size_t expected_windows() const;
  void validate() const;
  EvalOptions eval_options() const;
};

/// Parses one JSON document. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
/// Merges the documents in order (RFC 7386 merge patch) and parses the
/// result. An empty list yields the defaults.
RunConfig load_config(std::span<const std::filesystem::path> paths);

nlohmann::json to_json(const RunConfig& config);
/// `{"thresholds": {...}}`, directly consumable as a --config layer.
nlohmann::json threshold_fragment(const ThresholdPolicy& policy);

}  // namespace soundscape::cli
