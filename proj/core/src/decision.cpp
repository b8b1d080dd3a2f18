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

#include "soundscape/decision.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "soundscape/csv.hpp"
#include "soundscape/error.hpp"

namespace soundscape {
namespace {

// Absorbs float rounding in p * T comparisons (0.05 * 60 != 3 exactly).
constexpr double kDurationTolerance = 1e-9;

}  // namespace

LabelSet AnnotationSet::weak_labels() const {
  LabelSet out;
  for (auto c : kTargetClasses) out.set(c, !of(c).empty());
  return out;
}

void AnnotationSet::normalize() {
  for (auto& list : segments) {
    std::sort(list.begin(), list.end(), [](const Segment& a, const Segment& b) {
      return a.start_s < b.start_s || (a.start_s == b.start_s && a.end_s < b.end_s);
    });
    std::vector<Segment> merged;
    for (const auto& s : list) {
      if (!merged.empty() && s.start_s <= merged.back().end_s) {
        merged.back().end_s = std::max(merged.back().end_s, s.end_s);
      } else {
        merged.push_back(s);
      }
    }
    list = std::move(merged);
  }
}

void AnnotationSet::validate() const {
  if (!(duration_s > 0.0)) {
    throw ValidationError(recording_id + ": duration must be positive");
  }
  for (auto c : kTargetClasses) {
    for (const auto& s : of(c)) {
      if (!(s.start_s >= 0.0 && s.start_s < s.end_s &&
            s.end_s <= duration_s + kDurationTolerance)) {
        throw ValidationError(recording_id + ": " + std::string(class_name(c)) +
                              " segment [" + format_double(s.start_s) + ", " +
                              format_double(s.end_s) + ") outside [0, " +
                              format_double(duration_s) + "]");
      }
    }
  }
}

std::vector<LabelSet> weak_labels(std::span<const AnnotationSet> truth) {
  std::vector<LabelSet> out;
  out.reserve(truth.size());
  for (const auto& a : truth) out.push_back(a.weak_labels());
  return out;
}

void PdaPolicy::validate() const {
  for (auto c : kTargetClasses) {
    const auto& p = fraction[class_index(c)];
    if (p && !(*p > 0.0 && *p < 1.0)) {
      throw ValidationError("PDA fraction for " + std::string(class_name(c)) +
                            " must be in (0, 1)");
    }
  }
}

std::optional<double> PdaPolicy::min_duration(SoundClass c,
                                              double duration_s) const {
  const auto& p = fraction[class_index(c)];
  if (!p) return std::nullopt;
  return *p * duration_s;
}

AnnotationSet apply_pda(const AnnotationSet& annotations,
                        const PdaPolicy& policy) {
  policy.validate();
  AnnotationSet out = annotations;
  out.normalize();
  for (auto c : kTargetClasses) {
    const auto min = policy.min_duration(c, out.duration_s);
    if (!min) continue;
    auto& list = out.of(c);
    double measured = 0.0;
    for (const auto& s : list) {
      measured = policy.mode == PdaMode::kSummed
                     ? measured + s.duration()
                     : std::max(measured, s.duration());
    }
    if (measured + kDurationTolerance < *min) list.clear();
  }
  return out;
}

ThresholdPolicy ThresholdPolicy::global(double threshold) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::kGlobal;
  p.thresholds = {threshold, threshold, threshold};
  return p;
}

ThresholdPolicy ThresholdPolicy::per_class(PerClass<double> thresholds) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::kPerClass;
  p.thresholds = thresholds;
  return p;
}

void ThresholdPolicy::validate(std::optional<std::size_t> num_windows) const {
  for (auto c : kTargetClasses) {
    const double t = thresholds[class_index(c)];
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ValidationError("threshold for " + std::string(class_name(c)) +
                            " must be in [0, 1]");
    }
  }
  if (mode == ThresholdMode::kGlobal &&
      !(thresholds[0] == thresholds[1] && thresholds[1] == thresholds[2])) {
    throw ValidationError("global threshold mode needs one threshold for all classes");
  }
  if (counts) {
    for (auto c : kTargetClasses) {
      const int n = (*counts)[class_index(c)];
      if (n < 1) {
        throw ValidationError("window count for " + std::string(class_name(c)) +
                              " must be >= 1");
      }
      if (num_windows && static_cast<std::size_t>(n) > *num_windows) {
        throw ValidationError("window count " + std::to_string(n) + " for " +
                              std::string(class_name(c)) + " exceeds the " +
                              std::to_string(*num_windows) + " available windows");
      }
    }
  }
}

Decision make_decision(std::string recording_id, LabelSet active) {
  Decision d;
  d.recording_id = std::move(recording_id);
  d.active = active.targets();
  d.silence = d.active.empty();
  return d;
}

PerClass<double> aggregate(const ScoreMatrix& matrix) {
  if (matrix.windows() == 0) {
    throw ValidationError(matrix.recording_id + ": no score windows");
  }
  PerClass<double> out{};
  for (auto c : kTargetClasses) {
    double best = matrix.at(0, c);
    for (std::size_t w = 1; w < matrix.windows(); ++w) {
      best = std::max(best, matrix.at(w, c));
    }
    out[class_index(c)] = best;
  }
  return out;
}

std::size_t count_exceedances(const ScoreMatrix& matrix, SoundClass c,
                              double threshold) {
  std::size_t n = 0;
  for (std::size_t w = 0; w < matrix.windows(); ++w) {
    if (matrix.at(w, c) > threshold) ++n;
  }
  return n;
}

Decision decide(const ScoreMatrix& matrix, const ThresholdPolicy& policy) {
  if (matrix.windows() == 0) {
    throw ValidationError(matrix.recording_id + ": no score windows");
  }
  policy.validate(matrix.windows());
  LabelSet active;
  if (policy.counts) {
    for (auto c : kTargetClasses) {
      const auto need = static_cast<std::size_t>((*policy.counts)[class_index(c)]);
      active.set(c, count_exceedances(matrix, c, policy.thresholds[class_index(c)]) >= need);
    }
  } else {
    const auto maxima = aggregate(matrix);
    for (auto c : kTargetClasses) {
      active.set(c, maxima[class_index(c)] > policy.thresholds[class_index(c)]);
    }
  }
  return make_decision(matrix.recording_id, active);
}

int count_for_fraction(double p, std::size_t w) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ValidationError("count_for_fraction: p must be in (0, 1]");
  }
  if (w == 0) throw ValidationError("count_for_fraction: need at least one window");
  const auto c = static_cast<int>(std::floor(p * static_cast<double>(w) + 1e-9));
  return std::max(1, c);
}

namespace {

std::vector<AnnotationSet> load_strong(CsvReader& csv,
                                       double default_duration_s) {
  const auto id_col = csv.require_column("recording_id");
  const auto class_col = csv.require_column("class");
  const auto start_col = csv.require_column("start_s");
  const auto end_col = csv.require_column("end_s");
  const auto dur_col = csv.column("duration_s");

  std::vector<std::string> order;
  std::map<std::string, AnnotationSet> sets;
  std::map<std::string, bool> duration_given;
  std::vector<std::string> row;
  while (csv.next(row)) {
    const std::string& id = row[id_col];
    if (id.empty()) csv.fail("empty recording_id");
    auto [it, inserted] = sets.try_emplace(id);
    AnnotationSet& set = it->second;
    if (inserted) {
      order.push_back(id);
      set.recording_id = id;
      set.duration_s = default_duration_s;
    }
    if (dur_col != std::string_view::npos && !row[dur_col].empty()) {
      const double d = csv.parse_double(row[dur_col], "duration_s");
      if (!(d > 0.0)) csv.fail("duration_s must be positive");
      if (duration_given[id] && d != set.duration_s) {
        csv.fail("conflicting duration_s for " + id);
      }
      set.duration_s = d;
      duration_given[id] = true;
    }
    const auto cls = parse_class(row[class_col]);
    if (!cls) csv.fail("unknown class '" + row[class_col] + "'");
    if (*cls == SoundClass::kSilence) continue;
    Segment s;
    s.start_s = csv.parse_double(row[start_col], "start_s");
    s.end_s = csv.parse_double(row[end_col], "end_s");
    if (!(s.start_s >= 0.0 && s.start_s < s.end_s)) {
      csv.fail("segment needs 0 <= start_s < end_s");
    }
    set.of(*cls).push_back(s);
  }

  std::vector<AnnotationSet> out;
  out.reserve(order.size());
  for (const auto& id : order) {
    AnnotationSet set = std::move(sets[id]);
    set.normalize();
    try {
      set.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(csv.source() + ": " + e.what());
    }
    out.push_back(std::move(set));
  }
  return out;
}

std::vector<AnnotationSet> load_weak(CsvReader& csv, double default_duration_s) {
  const auto id_col = csv.require_column("recording_id");
  const PerClass<std::size_t> cols = {csv.require_column("A"),
                                      csv.require_column("B"),
                                      csv.require_column("G")};
  std::vector<AnnotationSet> out;
  std::map<std::string, bool> seen;
  std::vector<std::string> row;
  while (csv.next(row)) {
    if (row[id_col].empty()) csv.fail("empty recording_id");
    if (seen[row[id_col]]) csv.fail("duplicate recording_id " + row[id_col]);
    seen[row[id_col]] = true;
    AnnotationSet set;
    set.recording_id = row[id_col];
    set.duration_s = default_duration_s;
    for (auto c : kTargetClasses) {
      const auto flag = csv.parse_int(row[cols[class_index(c)]], "label flag");
      if (flag != 0 && flag != 1) csv.fail("label flags must be 0 or 1");
      if (flag == 1) set.of(c).push_back({0.0, default_duration_s});
    }
    out.push_back(std::move(set));
  }
  return out;
}

}  // namespace

std::vector<AnnotationSet> load_annotations(std::istream& in,
                                            const std::string& source_name,
                                            double default_duration_s) {
  if (!(default_duration_s > 0.0)) {
    throw ValidationError("default annotation duration must be positive");
  }
  CsvReader csv(in, source_name);
  csv.read_header();
  if (csv.column("class") != std::string_view::npos) {
    return load_strong(csv, default_duration_s);
  }
  if (csv.column("A") != std::string_view::npos) {
    return load_weak(csv, default_duration_s);
  }
  csv.fail(
      "unrecognised annotation header (expected recording_id,class,start_s,"
      "end_s[,duration_s] or recording_id,A,B,G)");
}

std::vector<AnnotationSet> load_annotations(const std::filesystem::path& path,
                                            double default_duration_s) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_annotations(in, path.string(), default_duration_s);
}

void write_decisions(std::ostream& out, std::span<const Decision> decisions) {
  out << "recording_id,anthropophony,biophony,geophony,silence\n";
  for (const auto& d : decisions) {
    out << d.recording_id;
    for (auto c : kTargetClasses) out << ',' << (d.active.contains(c) ? 1 : 0);
    out << ',' << (d.silence ? 1 : 0) << '\n';
  }
}

std::vector<Decision> load_decisions(std::istream& in,
                                     const std::string& source_name) {
  CsvReader csv(in, source_name);
  csv.read_header();
  const auto id_col = csv.require_column("recording_id");
  const PerClass<std::size_t> cols = {csv.require_column("anthropophony"),
                                      csv.require_column("biophony"),
                                      csv.require_column("geophony")};
  const auto silence_col = csv.column("silence");
  std::vector<Decision> out;
  std::vector<std::string> row;
  while (csv.next(row)) {
    LabelSet active;
    for (auto c : kTargetClasses) {
      const auto flag = csv.parse_int(row[cols[class_index(c)]], "decision flag");
      if (flag != 0 && flag != 1) csv.fail("decision flags must be 0 or 1");
      active.set(c, flag == 1);
    }
    Decision d = make_decision(row[id_col], active);
    if (silence_col != std::string_view::npos) {
      const auto flag = csv.parse_int(row[silence_col], "silence flag");
      if ((flag == 1) != d.silence) {
        csv.fail("silence flag must be 1 exactly when no class is active");
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Decision> load_decisions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_decisions(in, path.string());
}

}  // namespace soundscape
