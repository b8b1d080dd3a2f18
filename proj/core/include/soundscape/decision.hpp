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
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "soundscape/labels.hpp"
#include "soundscape/scores.hpp"

namespace soundscape {

struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  double duration() const { return end_s - start_s; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Strong (segment-level) ground truth for one recording.
struct AnnotationSet {
  std::string recording_id;
  double duration_s = 60.0;
  PerClass<std::vector<Segment>> segments;

  const std::vector<Segment>& of(SoundClass c) const {
    return segments[class_index(c)];
  }
  std::vector<Segment>& of(SoundClass c) { return segments[class_index(c)]; }

  /// Weak labels: a class is active iff it has at least one segment.
  LabelSet weak_labels() const;

  /// Sorts and merges overlapping or touching segments per class.
  void normalize();
  /// 0 <= start < end <= duration for every segment. Throws ValidationError.
  void validate() const;

  friend bool operator==(const AnnotationSet&,
                         const AnnotationSet&) = default;
};

/// Weak truth labels for a list of annotation sets, same order.
std::vector<LabelSet> weak_labels(std::span<const AnnotationSet> truth);

enum class PdaMode {
  kSummed,   // total merged duration of the class
  kLongest,  // longest single merged segment
};

/// Proportional duration adaptation: a class keeps its label only when its
/// annotated duration reaches p * T. Classes without p are left untouched.
struct PdaPolicy {
  PerClass<std::optional<double>> fraction;
  PdaMode mode = PdaMode::kSummed;

  /// Every set fraction lies in (0, 1).
  void validate() const;
  /// p * T for class c, or nullopt.
  std::optional<double> min_duration(SoundClass c, double duration_s) const;
};

AnnotationSet apply_pda(const AnnotationSet& annotations,
                        const PdaPolicy& policy);

enum class ThresholdMode { kGlobal, kPerClass };

/// Recording-level decision parameters. A class is active when its
/// max-over-windows score exceeds its threshold, or, with counts, when at
/// least c windows exceed it. Comparisons are strict.
struct ThresholdPolicy {
  ThresholdMode mode = ThresholdMode::kGlobal;
  PerClass<double> thresholds{0.5, 0.5, 0.5};
  std::optional<PerClass<int>> counts;

  static ThresholdPolicy global(double threshold);
  static ThresholdPolicy per_class(PerClass<double> thresholds);

  /// Thresholds in [0, 1]; global mode has equal thresholds; counts >= 1
  /// and, when `num_windows` is given, <= num_windows.
  void validate(std::optional<std::size_t> num_windows = {}) const;
};

struct Decision {
  std::string recording_id;
  LabelSet active;  // target classes only
  bool silence = true;

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Decision whose silence flag follows the active set.
Decision make_decision(std::string recording_id, LabelSet active);

/// Per-class maximum over windows (target classes only).
PerClass<double> aggregate(const ScoreMatrix& matrix);

/// Number of windows whose score for c is strictly above `threshold`.
std::size_t count_exceedances(const ScoreMatrix& matrix, SoundClass c,
                              double threshold);

Decision decide(const ScoreMatrix& matrix, const ThresholdPolicy& policy);

/// floor(p * w), at least 1. Throws ValidationError unless p in (0, 1] and
/// w >= 1.
int count_for_fraction(double p, std::size_t w);

/// Strong schema: `recording_id,class,start_s,end_s[,duration_s]`.
/// A `silence` row only registers the recording. Weak schema:
/// `recording_id,A,B,G` with 0/1 flags, mapped to full-length segments.
/// The schema is detected from the header. Recordings keep order of first
/// appearance; every set is normalised and validated.
std::vector<AnnotationSet> load_annotations(std::istream& in,
                                            const std::string& source_name,
                                            double default_duration_s = 60.0);
std::vector<AnnotationSet> load_annotations(const std::filesystem::path& path,
                                            double default_duration_s = 60.0);

/// `recording_id,anthropophony,biophony,geophony,silence`, 0/1 flags.
void write_decisions(std::ostream& out, std::span<const Decision> decisions);
std::vector<Decision> load_decisions(std::istream& in,
                                     const std::string& source_name);
std::vector<Decision> load_decisions(const std::filesystem::path& path);

}  // namespace soundscape
