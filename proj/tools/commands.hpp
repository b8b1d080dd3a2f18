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
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace soundscape::cli {

/// Options shared by every subcommand. `seed` and `jobs` override the
/// config file when set.
struct CommonOptions {
  std::vector<std::filesystem::path> config_paths;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::filesystem::path> out;

  RunConfig load() const;
};

/// Data goes to `out` (or files under --out); logs go to `log`. Every
/// command returns the process exit code: 0 iff nothing failed.

struct IndicesArgs {
  std::filesystem::path audio_dir;
};
/// One CSV row per WAV in the directory (sorted by name). Per-file wall
/// clock goes to the log and, with --out, to timings.csv.
int cmd_indices(const IndicesArgs& args, const CommonOptions& common,
                std::ostream& out, std::ostream& log);

struct MixArgs {
  std::filesystem::path pool_manifest;
  std::string counts;
};
int cmd_mix(const MixArgs& args, const CommonOptions& common,
            std::ostream& out, std::ostream& log);

struct EvaluateArgs {
  std::filesystem::path scores;
  std::filesystem::path annotations;
};
/// PDA -> decide -> evaluate -> stratify. Writes report.json, report.txt,
/// decisions.csv, curves.csv and stratified.csv under --out (default ".").
int cmd_evaluate(const EvaluateArgs& args, const CommonOptions& common,
                 std::ostream& out, std::ostream& log);

struct TuneArgs {
  std::filesystem::path scores;
  std::filesystem::path annotations;
  std::string objective = "f1";
  double grid_step = 0.0;
};
/// Emits a thresholds config fragment (stdout, or thresholds.json under
/// --out).
int cmd_tune(const TuneArgs& args, const CommonOptions& common,
             std::ostream& out, std::ostream& log);

struct CaseStudyArgs {
  std::filesystem::path indices;
  std::filesystem::path diversity;
  std::optional<std::filesystem::path> truth_labels;
  std::optional<std::filesystem::path> model_labels;
  std::vector<std::string> filters{"all", "B", "AB", "BG"};
};
/// `index,filter,label_source,r,n,status` rows.
int cmd_case_study(const CaseStudyArgs& args, const CommonOptions& common,
                   std::ostream& out, std::ostream& log);

struct FeaturesArgs {
  std::filesystem::path wav;
  bool log_mel = true;
};
/// Writes a spectrogram dump (see write_spectrogram) to --out.
int cmd_features(const FeaturesArgs& args, const CommonOptions& common,
                 std::ostream& out, std::ostream& log);

/// Reads `recording_id,aci,adi,ndsi` (extra columns ignored, empty ndsi =
/// undefined).
std::vector<IndexResult> load_index_csv(const std::filesystem::path& path);
/// `recording_id,species_count`.
std::map<std::string, double> load_diversity_csv(const std::filesystem::path& path);
/// Accepts weak annotations (`recording_id,A,B,G`), strong annotations, or
/// a decisions CSV; returns the active target classes per recording.
std::map<std::string, LabelSet> load_label_csv(const std::filesystem::path& path,
                                               double default_duration_s);

}  // namespace soundscape::cli
