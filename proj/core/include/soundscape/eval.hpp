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
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "soundscape/decision.hpp"
#include "soundscape/indices.hpp"
#include "soundscape/labels.hpp"

namespace soundscape {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

/// Precision, recall and F1. A class that is neither present nor predicted
/// scores 1 on all three; any other undefined ratio is 0.
struct ClassMetrics {
  ConfusionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};
ClassMetrics metrics_from_counts(const ConfusionCounts& counts);

/// Unweighted mean.
double macro_f1(std::span<const double> per_class_f1);

struct EvalOptions {
  std::size_t bootstrap_resamples = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct EvalReport {
  PerClass<ClassMetrics> per_class;
  double macro_f1 = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t num_recordings = 0;
  /// Fraction of decisions with no active target class.
  double predicted_silence_rate = 0.0;
  double true_silence_rate = 0.0;
};

/// Pairs predictions with weak truth labels by recording id. Both lists must
/// cover the same ids. Silence is not a scored class.
EvalReport evaluate(std::span<const Decision> decisions,
                    std::span<const AnnotationSet> truth,
                    const EvalOptions& options = {});

/// Same on already aligned label sets.
EvalReport evaluate_labels(std::span<const LabelSet> predicted,
                           std::span<const LabelSet> truth,
                           const EvalOptions& options = {});

/// Percentile bootstrap over recordings. Endpoints are widened to include
/// the point estimate when the percentile interval misses it.
std::pair<double, double> bootstrap_macro_f1_ci(
    std::span<const LabelSet> predicted, std::span<const LabelSet> truth,
    const EvalOptions& options);

enum class CurveKind { kPrecisionRecall, kRoc };

struct CurvePoint {
  double x = 0.0;  // recall (PR) or false-positive rate (ROC)
  double y = 0.0;  // precision (PR) or true-positive rate (ROC)
  double threshold = 0.0;
  double objective = 0.0;  // F1 (PR) or Youden's J (ROC)
};

/// Operating points for every distinct cut of the scores.
///
/// Points are ordered by descending threshold. Decisions use "score >
/// threshold"; the threshold reported for a cut lies halfway between the
/// two adjacent distinct scores, with sentinels 1.0 (nothing positive) and
/// 0.0 (everything positive, only when the smallest score is above 0).
struct Curve {
  CurveKind kind = CurveKind::kPrecisionRecall;
  std::vector<CurvePoint> points;
  /// Best point by objective; ties go to the higher threshold.
  CurvePoint best;
};

/// ROC needs at least one positive and one negative; PR accepts any
/// non-empty input.
Curve curve(std::span<const double> scores, std::span<const bool> truth,
            CurveKind kind);

enum class TuneObjective { kF1, kYouden };

struct TuneOptions {
  TuneObjective objective = TuneObjective::kF1;
  /// Move each threshold to a multiple of this step inside its optimal
  /// interval when one exists (0 disables).
  double grid_step = 0.0;
};

struct TunedThresholds {
  PerClass<double> thresholds{};
  PerClass<double> objective{};
};

/// Per-class threshold maximising the objective over aggregated scores.
TunedThresholds tune_thresholds(std::span<const PerClass<double>> scores,
                                std::span<const LabelSet> truth,
                                const TuneOptions& options = {});

/// Binary F1 of predicting "score > threshold".
double f1_at_threshold(std::span<const double> scores,
                       std::span<const bool> truth, double threshold);
/// TPR - FPR of predicting "score > threshold".
double youden_at_threshold(std::span<const double> scores,
                           std::span<const bool> truth, double threshold);

enum class ErrorKind { kFalsePositive, kFalseNegative };

struct StratumTally {
  std::size_t count = 0;
  /// Recordings with this combination where the error was possible
  /// (target absent for FP, present for FN).
  std::size_t denominator = 0;
  double rate() const {
    return denominator == 0 ? 0.0 : static_cast<double>(count) / denominator;
  }
};

/// For each target class, errors keyed by the ground-truth combination of
/// the other target classes ("S" when none of them is active).
struct StratifiedErrors {
  PerClass<std::map<LabelSet, StratumTally>> false_positives;
  PerClass<std::map<LabelSet, StratumTally>> false_negatives;

  std::size_t total(SoundClass target, ErrorKind kind) const;
};

StratifiedErrors stratify_errors(std::span<const Decision> decisions,
                                 std::span<const AnnotationSet> truth);
StratifiedErrors stratify_labels(std::span<const LabelSet> predicted,
                                 std::span<const LabelSet> truth);

/// `target,combination,kind,count,rate`; rate is empty when the
/// denominator is 0.
void write_stratified_errors(std::ostream& out, const StratifiedErrors& errors);

/// Pearson r. Throws ValidationError for n < 2, mismatched lengths or zero
/// variance.
double pearson(std::span<const double> x, std::span<const double> y);

enum class IndexKind { kAci, kAdi, kNdsi };
std::string_view index_name(IndexKind kind);

/// Recording filter for the case study: passes when the recording's active
/// set is non-empty and a subset of `allowed`.
struct LabelFilter {
  LabelSet allowed = LabelSet::of({SoundClass::kAnthropophony,
                                   SoundClass::kBiophony,
                                   SoundClass::kGeophony});
  bool passes(LabelSet labels) const;
  std::string name() const;
  /// "all", "B", "AB", "BG", ...
  static LabelFilter parse(std::string_view text);
};

struct CorrelationResult {
  std::string filter;
  IndexKind index = IndexKind::kAci;
  double rho = 0.0;
  std::size_t n = 0;
};

/// (index value, species count) pairs of the recordings that pass `filter`
/// under `labels`. Recordings missing from `diversity` or `labels`, or with
/// an undefined NDSI, are skipped.
struct CorrelationPairs {
  std::vector<double> index_values;
  std::vector<double> species_counts;
};
CorrelationPairs correlation_pairs(std::span<const IndexResult> indices,
                                   const std::map<std::string, double>& diversity,
                                   const std::map<std::string, LabelSet>& labels,
                                   const LabelFilter& filter, IndexKind index);

/// Pearson r between an index and species counts over the recordings that
/// pass `filter` under `labels` (see correlation_pairs).
CorrelationResult correlate(std::span<const IndexResult> indices,
                            const std::map<std::string, double>& diversity,
                            const std::map<std::string, LabelSet>& labels,
                            const LabelFilter& filter, IndexKind index);

}  // namespace soundscape
