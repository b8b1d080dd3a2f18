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

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "soundscape/error.hpp"

namespace {

void add_common(CLI::App* app, soundscape::cli::CommonOptions& common) {
  app->add_option("--config", common.config_paths,
                  "JSON config file; repeat to layer overrides")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", common.seed, "master seed (overrides config)");
  app->add_option("--jobs", common.jobs, "worker threads (overrides config)")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", common.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace soundscape::cli;

  CLI::App app{"soundscape: synthetic soundscape mixing, indices and evaluation"};
  app.require_subcommand(1);

  CommonOptions common;
  int rc = 0;

  IndicesArgs indices;
  auto* c_indices = app.add_subcommand("indices", "ACI/ADI/NDSI per WAV in a directory");
  c_indices->add_option("audio_dir", indices.audio_dir)->required();
  add_common(c_indices, common);
  c_indices->callback([&] { rc = cmd_indices(indices, common, std::cout, std::cerr); });

  MixArgs mix;
  auto* c_mix = app.add_subcommand("mix", "render a labelled synthetic corpus");
  c_mix->add_option("pool_manifest", mix.pool_manifest, "CSV with file,class")
      ->required()
      ->check(CLI::ExistingFile);
  c_mix->add_option("--counts", mix.counts, "clips per combination, e.g. A=10,AB=5,S=2")
      ->required();
  add_common(c_mix, common);
  c_mix->callback([&] { rc = cmd_mix(mix, common, std::cout, std::cerr); });

  EvaluateArgs evaluate;
  auto* c_eval = app.add_subcommand("evaluate", "decide, score and stratify");
  c_eval->add_option("scores", evaluate.scores)->required()->check(CLI::ExistingFile);
  c_eval->add_option("annotations", evaluate.annotations)
      ->required()
      ->check(CLI::ExistingFile);
  add_common(c_eval, common);
  c_eval->callback([&] { rc = cmd_evaluate(evaluate, common, std::cout, std::cerr); });

  TuneArgs tune;
  auto* c_tune = app.add_subcommand("tune", "search per-class thresholds");
  c_tune->add_option("scores", tune.scores)->required()->check(CLI::ExistingFile);
  c_tune->add_option("annotations", tune.annotations)->required()->check(CLI::ExistingFile);
  c_tune->add_option("--objective", tune.objective, "f1 or youden")
      ->check(CLI::IsMember({"f1", "youden"}));
  c_tune->add_option("--grid-step", tune.grid_step,
                     "snap thresholds to this grid; 0 uses exact cut points");
  add_common(c_tune, common);
  c_tune->callback([&] { rc = cmd_tune(tune, common, std::cout, std::cerr); });

  CaseStudyArgs cs;
  auto* c_cs = app.add_subcommand("case-study", "correlate indices with species counts");
  c_cs->add_option("indices", cs.indices)->required()->check(CLI::ExistingFile);
  c_cs->add_option("diversity", cs.diversity, "CSV with recording_id,species_count")
      ->required()
      ->check(CLI::ExistingFile);
  c_cs->add_option("--truth", cs.truth_labels, "annotation CSV")->check(CLI::ExistingFile);
  c_cs->add_option("--model", cs.model_labels, "decisions or annotation CSV")
      ->check(CLI::ExistingFile);
  c_cs->add_option("--filter", cs.filters, "label filters (all, B, AB, BG, ...)");
  add_common(c_cs, common);
  c_cs->callback([&] { rc = cmd_case_study(cs, common, std::cout, std::cerr); });

  FeaturesArgs features;
  auto* c_feat = app.add_subcommand("features", "dump a spectrogram for one WAV");
  c_feat->add_option("wav", features.wav)->required()->check(CLI::ExistingFile);
  c_feat->add_flag("!--linear", features.log_mel, "STFT magnitude instead of log-mel");
  add_common(c_feat, common);
  c_feat->callback([&] { rc = cmd_features(features, common, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const soundscape::Error& e) {
    std::cerr << "soundscape: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "soundscape: internal error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
