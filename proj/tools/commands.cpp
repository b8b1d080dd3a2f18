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

#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "soundscape/csv.hpp"
#include "soundscape/error.hpp"
#include "soundscape/features.hpp"
#include "soundscape/parallel.hpp"

namespace soundscape::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

fs::path ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
  return dir;
}

bool is_wav(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".wav";
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

// Scores and annotations must cover the same recordings; returns annotation
// sets reordered to match the score matrices.
std::vector<AnnotationSet> align_truth(const std::vector<ScoreMatrix>& matrices,
                                       std::vector<AnnotationSet> truth) {
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < truth.size(); ++i) by_id[truth[i].recording_id] = i;
  std::vector<std::string> missing_truth;
  std::set<std::string> scored;
  std::vector<AnnotationSet> out;
  for (const auto& m : matrices) {
    scored.insert(m.recording_id);
    const auto it = by_id.find(m.recording_id);
    if (it == by_id.end()) {
      missing_truth.push_back(m.recording_id);
    } else {
      out.push_back(truth[it->second]);
    }
  }
  std::vector<std::string> missing_scores;
  for (const auto& a : truth) {
    if (!scored.count(a.recording_id)) missing_scores.push_back(a.recording_id);
  }
  if (!missing_truth.empty()) {
    throw ValidationError("recordings with scores but no annotations: " +
                          join_ids(missing_truth));
  }
  if (!missing_scores.empty()) {
    throw ValidationError("recordings with annotations but no scores: " +
                          join_ids(missing_scores));
  }
  return out;
}

std::vector<AnnotationSet> adapt(const std::vector<AnnotationSet>& truth,
                                 const PdaPolicy& pda) {
  std::vector<AnnotationSet> out;
  out.reserve(truth.size());
  for (const auto& a : truth) out.push_back(apply_pda(a, pda));
  return out;
}

std::string parameter_comment(const IndexParams& p) {
  std::ostringstream out;
  out << "# window_len=" << p.window_len << " hop=" << p.hop << " aci_chunk_s="
      << (p.aci_chunk_s ? format_double(*p.aci_chunk_s) : std::string("full"))
      << "\n# adi_band_width_hz=" << format_double(p.adi.band_width_hz)
      << " adi_max_freq_hz=" << format_double(p.adi.max_freq_hz)
      << " adi_db_threshold=" << format_double(p.adi.db_threshold)
      << " adi_reference_magnitude="
      << (p.adi.reference_magnitude ? format_double(*p.adi.reference_magnitude)
                                    : std::string("full-scale-sine"))
      << "\n# ndsi_anthro_hz=" << format_double(p.ndsi.anthro.low_hz) << '-'
      << format_double(p.ndsi.anthro.high_hz)
      << " ndsi_bio_hz=" << format_double(p.ndsi.bio.low_hz) << '-'
      << format_double(p.ndsi.bio.high_hz)
      << " ndsi_segment_len=" << p.ndsi.segment_len
      << " ndsi_power_floor=" << format_double(p.ndsi.power_floor) << '\n';
  return out.str();
}

json metrics_json(const ClassMetrics& m) {
  return {{"tp", m.counts.tp},       {"fp", m.counts.fp},
          {"fn", m.counts.fn},       {"tn", m.counts.tn},
          {"precision", m.precision}, {"recall", m.recall},
          {"f1", m.f1}};
}

void write_report_text(std::ostream& out, const EvalReport& r,
                       double confidence) {
  out << std::left << std::setw(15) << "class" << std::right << std::setw(10)
      << "precision" << std::setw(8) << "recall" << std::setw(8) << "f1"
      << std::setw(7) << "tp" << std::setw(7) << "fp" << std::setw(7) << "fn"
      << std::setw(7) << "tn" << '\n';
  out << std::fixed << std::setprecision(3);
  for (auto c : kTargetClasses) {
    const auto& m = r.per_class[class_index(c)];
    out << std::left << std::setw(15) << class_name(c) << std::right
        << std::setw(10) << m.precision << std::setw(8) << m.recall
        << std::setw(8) << m.f1 << std::setw(7) << m.counts.tp << std::setw(7)
        << m.counts.fp << std::setw(7) << m.counts.fn << std::setw(7)
        << m.counts.tn << '\n';
  }
  out << "macro F1 " << r.macro_f1 << " (" << std::setprecision(0)
      << confidence * 100 << "% CI " << std::setprecision(3) << r.ci_low << " - "
      << r.ci_high << ")\n";
  out << "recordings " << r.num_recordings << ", predicted silence "
      << std::setprecision(1) << r.predicted_silence_rate * 100
      << "%, annotated silence " << r.true_silence_rate * 100 << "%\n";
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

}  // namespace

RunConfig CommonOptions::load() const {
  RunConfig cfg = load_config(config_paths);
  if (seed) cfg.seed = *seed;
  if (jobs) cfg.jobs = std::max<std::size_t>(1, *jobs);
  return cfg;
}

int cmd_indices(const IndicesArgs& args, const CommonOptions& common,
                std::ostream& out, std::ostream& log) {
  const RunConfig cfg = common.load();
  if (!fs::is_directory(args.audio_dir)) {
    throw IoError("not a directory: " + args.audio_dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.audio_dir)) {
    if (entry.is_regular_file() && is_wav(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::optional<IndexResult>> results(files.size());
  std::vector<std::string> errors(files.size());
  std::vector<double> seconds(files.size(), 0.0);
  parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      AudioClip clip = decode_wav(files[i]);
      clip.source_id = files[i].stem().string();
      results[i] = compute_indices(clip, cfg.indices);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });

  std::ostringstream csv;
  csv << "# soundscape indices\n" << parameter_comment(cfg.indices);
  csv << "recording_id,aci,adi,ndsi\n";
  std::ostringstream timings;
  timings << "recording_id,seconds\n";
  int failures = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string id = files[i].stem().string();
    if (!results[i]) {
      ++failures;
      log << "soundscape indices: " << files[i].string() << ": " << errors[i] << '\n';
      continue;
    }
    const auto& r = *results[i];
    csv << r.recording_id << ',' << format_double(r.aci) << ','
        << format_double(r.adi) << ',';
    if (r.ndsi) csv << format_double(*r.ndsi);
    csv << '\n';
    timings << id << ',' << format_double(seconds[i], 6) << '\n';
    log << "soundscape indices: " << id << " " << format_double(seconds[i], 4)
        << " s\n";
  }

  if (common.out) {
    const auto dir = ensure_dir(*common.out);
    open_output(dir / "indices.csv") << csv.str();
    open_output(dir / "timings.csv") << timings.str();
  } else {
    out << csv.str();
  }
  log << "soundscape indices: " << files.size() - failures << " ok, " << failures
      << " failed\n";
  return failures == 0 ? 0 : 1;
}

int cmd_mix(const MixArgs& args, const CommonOptions& common, std::ostream& out,
            std::ostream& log) {
  const RunConfig cfg = common.load();
  if (!common.out) throw ValidationError("mix: --out <dir> is required");
  const SourcePool pool = SourcePool::load_manifest(args.pool_manifest);
  const CorpusCounts counts = parse_corpus_counts(args.counts);
  log << "soundscape mix: seed " << cfg.seed << '\n';
  const auto entries =
      build_corpus(pool, counts, cfg.seed, *common.out, cfg.mixer, cfg.jobs);
  out << (*common.out / "manifest.csv").string() << '\n';
  log << "soundscape mix: wrote " << entries.size() << " clips\n";
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args, const CommonOptions& common,
                 std::ostream& out, std::ostream& log) {
  const RunConfig cfg = common.load();
  const auto matrices = load_scores(args.scores, cfg.windows.window_len_s);
  if (matrices.empty()) throw ValidationError(args.scores.string() + ": no score rows");
  const auto truth = adapt(
      align_truth(matrices, load_annotations(args.annotations, cfg.default_duration_s)),
      cfg.pda);

  std::vector<Decision> decisions;
  std::vector<PerClass<double>> aggregated;
  for (const auto& m : matrices) {
    decisions.push_back(decide(m, cfg.thresholds));
    aggregated.push_back(aggregate(m));
  }
  log << "soundscape evaluate: seed " << cfg.seed << '\n';
  const EvalReport report = evaluate(decisions, truth, cfg.eval_options());
  const StratifiedErrors strata = stratify_errors(decisions, truth);
  const auto labels = weak_labels(truth);

  json doc;
  doc["num_recordings"] = report.num_recordings;
  json per_class = json::object();
  for (auto c : kTargetClasses) {
    per_class[std::string(class_name(c))] = metrics_json(report.per_class[class_index(c)]);
  }
  doc["per_class"] = per_class;
  doc["macro_f1"] = report.macro_f1;
  doc["macro_f1_ci"] = {report.ci_low, report.ci_high};
  doc["confidence"] = cfg.confidence;
  doc["predicted_silence_rate"] = report.predicted_silence_rate;
  doc["true_silence_rate"] = report.true_silence_rate;
  doc["config"] = to_json(cfg);

  write_report_text(out, report, cfg.confidence);

  if (common.out) {
    const auto dir = ensure_dir(*common.out);
    open_output(dir / "report.json") << doc.dump(2) << '\n';
    {
      auto f = open_output(dir / "report.txt");
      write_report_text(f, report, cfg.confidence);
    }
    {
      auto f = open_output(dir / "decisions.csv");
      write_decisions(f, decisions);
    }
    {
      auto f = open_output(dir / "stratified.csv");
      write_stratified_errors(f, strata);
    }
    auto f = open_output(dir / "curves.csv");
    f << "class,kind,x,y,threshold\n";
    std::vector<double> s(aggregated.size());
    std::unique_ptr<bool[]> t(new bool[aggregated.size()]);
    for (auto c : kTargetClasses) {
      for (std::size_t i = 0; i < aggregated.size(); ++i) {
        s[i] = aggregated[i][class_index(c)];
        t[i] = labels[i].contains(c);
      }
      const std::span<const bool> truth_flags(t.get(), aggregated.size());
      for (auto kind : {CurveKind::kPrecisionRecall, CurveKind::kRoc}) {
        Curve cv;
        try {
          cv = curve(s, truth_flags, kind);
        } catch (const ValidationError& e) {
          log << "soundscape evaluate: skipping " << class_name(c) << " curve: "
              << e.what() << '\n';
          continue;
        }
        for (const auto& p : cv.points) {
          f << class_name(c) << ','
            << (kind == CurveKind::kPrecisionRecall ? "PR" : "ROC") << ','
            << format_double(p.x) << ',' << format_double(p.y) << ','
            << format_double(p.threshold) << '\n';
        }
      }
    }
  }
  return 0;
}

int cmd_tune(const TuneArgs& args, const CommonOptions& common,
             std::ostream& out, std::ostream& log) {
  const RunConfig cfg = common.load();
  TuneOptions options;
  if (args.objective == "f1") {
    options.objective = TuneObjective::kF1;
  } else if (args.objective == "youden") {
    options.objective = TuneObjective::kYouden;
  } else {
    throw ValidationError("tune: objective must be 'f1' or 'youden'");
  }
  options.grid_step = args.grid_step;

  const auto matrices = load_scores(args.scores, cfg.windows.window_len_s);
  if (matrices.empty()) throw ValidationError(args.scores.string() + ": no score rows");
  const auto truth = adapt(
      align_truth(matrices, load_annotations(args.annotations, cfg.default_duration_s)),
      cfg.pda);
  std::vector<PerClass<double>> aggregated;
  for (const auto& m : matrices) aggregated.push_back(aggregate(m));
  const auto labels = weak_labels(truth);

  const TunedThresholds tuned = tune_thresholds(aggregated, labels, options);
  for (auto c : kTargetClasses) {
    log << "soundscape tune: " << class_name(c) << " threshold "
        << format_double(tuned.thresholds[class_index(c)]) << " "
        << args.objective << ' ' << format_double(tuned.objective[class_index(c)], 6)
        << '\n';
  }
  const std::string fragment =
      threshold_fragment(ThresholdPolicy::per_class(tuned.thresholds)).dump(2);
  if (common.out) {
    const auto dir = ensure_dir(*common.out);
    open_output(dir / "thresholds.json") << fragment << '\n';
  } else {
    out << fragment << '\n';
  }
  return 0;
}

std::vector<IndexResult> load_index_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvReader csv(in, path.string());
  csv.read_header();
  const auto id = csv.require_column("recording_id");
  const auto aci_col = csv.require_column("aci");
  const auto adi_col = csv.require_column("adi");
  const auto ndsi_col = csv.require_column("ndsi");
  std::vector<IndexResult> out;
  std::vector<std::string> row;
  while (csv.next(row)) {
    IndexResult r;
    r.recording_id = row[id];
    r.aci = csv.parse_double(row[aci_col], "aci");
    r.adi = csv.parse_double(row[adi_col], "adi");
    if (!row[ndsi_col].empty()) r.ndsi = csv.parse_double(row[ndsi_col], "ndsi");
    out.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, double> load_diversity_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvReader csv(in, path.string());
  csv.read_header();
  const auto id = csv.require_column("recording_id");
  const auto count = csv.require_column("species_count");
  std::map<std::string, double> out;
  std::vector<std::string> row;
  while (csv.next(row)) {
    const double v = csv.parse_double(row[count], "species_count");
    if (!(v >= 0.0)) csv.fail("species_count must be >= 0");
    if (!out.emplace(row[id], v).second) csv.fail("duplicate recording_id " + row[id]);
  }
  return out;
}

std::map<std::string, LabelSet> load_label_csv(const fs::path& path,
                                               double default_duration_s) {
  std::string header;
  {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    while (std::getline(in, header)) {
      const auto t = trim(header);
      if (!t.empty() && t.front() != '#') break;
    }
  }
  const auto fields = split_fields(header);
  const bool is_decisions =
      std::find(fields.begin(), fields.end(), "anthropophony") != fields.end();
  std::map<std::string, LabelSet> out;
  if (is_decisions) {
    for (const auto& d : load_decisions(path)) out[d.recording_id] = d.active;
  } else {
    for (const auto& a : load_annotations(path, default_duration_s)) {
      out[a.recording_id] = a.weak_labels();
    }
  }
  return out;
}

int cmd_case_study(const CaseStudyArgs& args, const CommonOptions& common,
                   std::ostream& out, std::ostream& log) {
  const RunConfig cfg = common.load();
  if (!args.truth_labels && !args.model_labels) {
    throw ValidationError("case-study: give --truth and/or --model labels");
  }
  const auto indices = load_index_csv(args.indices);
  const auto diversity = load_diversity_csv(args.diversity);

  std::vector<std::pair<std::string, std::map<std::string, LabelSet>>> sources;
  if (args.truth_labels) {
    sources.emplace_back("truth", load_label_csv(*args.truth_labels, cfg.default_duration_s));
  }
  if (args.model_labels) {
    sources.emplace_back("model", load_label_csv(*args.model_labels, cfg.default_duration_s));
  }
  std::vector<LabelFilter> filters;
  for (const auto& f : args.filters) filters.push_back(LabelFilter::parse(f));

  int failures = 0;
  std::vector<std::string> no_diversity;
  for (const auto& r : indices) {
    if (!diversity.count(r.recording_id)) no_diversity.push_back(r.recording_id);
  }
  if (!no_diversity.empty()) {
    ++failures;
    log << "soundscape case-study: no species count for " << join_ids(no_diversity) << '\n';
  }
  for (const auto& [name, labels] : sources) {
    std::vector<std::string> missing;
    for (const auto& r : indices) {
      if (!labels.count(r.recording_id)) missing.push_back(r.recording_id);
    }
    if (!missing.empty()) {
      ++failures;
      log << "soundscape case-study: no " << name << " labels for "
          << join_ids(missing) << '\n';
    }
  }

  std::ostringstream csv;
  csv << "index,filter,label_source,r,n,status\n";
  for (auto kind : {IndexKind::kAci, IndexKind::kAdi, IndexKind::kNdsi}) {
    for (const auto& filter : filters) {
      for (const auto& [name, labels] : sources) {
        const auto pairs = correlation_pairs(indices, diversity, labels, filter, kind);
        csv << index_name(kind) << ',' << filter.name() << ',' << name << ',';
        try {
          const double r = pearson(pairs.index_values, pairs.species_counts);
          csv << format_double(r) << ',' << pairs.index_values.size() << ",ok\n";
        } catch (const ValidationError& e) {
          ++failures;
          std::string msg = e.what();
          std::replace(msg.begin(), msg.end(), ',', ';');
          csv << ',' << pairs.index_values.size() << ",error: " << msg << '\n';
          log << "soundscape case-study: " << index_name(kind) << '/'
              << filter.name() << '/' << name << ": " << e.what() << '\n';
        }
      }
    }
  }
  if (common.out) {
    const auto dir = ensure_dir(*common.out);
    open_output(dir / "correlations.csv") << csv.str();
  } else {
    out << csv.str();
  }
  return failures == 0 ? 0 : 1;
}

int cmd_features(const FeaturesArgs& args, const CommonOptions& common,
                 std::ostream& out, std::ostream& log) {
  if (!common.out) throw ValidationError("features: --out <dir> is required");
  const AudioClip clip = decode_wav(args.wav);
  const FeatureParams params;
  Spectrogram spec;
  if (args.log_mel) {
    spec = extract_log_mel(clip, params);
  } else {
    spec = stft_magnitude(resample(clip, params.sample_rate_hz), params.window_len,
                          params.hop);
  }
  const auto dir = ensure_dir(*common.out);
  const auto path = dir / (args.wav.stem().string() + ".sspg");
  write_spectrogram(path, spec);
  log << "soundscape features: " << spec.frames << " x " << spec.bins << '\n';
  out << path.string() << '\n';
  return 0;
}

}  // namespace soundscape::cli
