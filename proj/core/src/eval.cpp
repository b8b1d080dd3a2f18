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

#include "soundscape/eval.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>

#include "soundscape/error.hpp"
#include "soundscape/parallel.hpp"
#include "soundscape/rng.hpp"

namespace soundscape {
namespace {

PerClass<ConfusionCounts> confusion(std::span<const LabelSet> predicted,
                                    std::span<const LabelSet> truth,
                                    std::span<const std::size_t> rows) {
  PerClass<ConfusionCounts> out{};
  for (std::size_t i : rows) {
    for (auto c : kTargetClasses) {
      const bool p = predicted[i].contains(c);
      const bool t = truth[i].contains(c);
      auto& k = out[class_index(c)];
      if (p && t) ++k.tp;
      else if (p) ++k.fp;
      else if (t) ++k.fn;
      else ++k.tn;
    }
  }
  return out;
}

double macro_from_counts(const PerClass<ConfusionCounts>& counts) {
  PerClass<double> f1{};
  for (std::size_t c = 0; c < kNumTargetClasses; ++c) {
    f1[c] = metrics_from_counts(counts[c]).f1;
  }
  return macro_f1(f1);
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(sorted.size() - 1, lo + 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// One operating point per distinct cut; `lo`/`hi` bound the thresholds that
// realise the same cut under "score > threshold" (lo <= t < hi, or t <= hi
// for the top sentinel).
struct Cut {
  double threshold;
  double lo;
  double hi;
  std::size_t tp;
  std::size_t fp;
};

std::vector<Cut> enumerate_cuts(std::span<const double> scores,
                                std::span<const bool> truth) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<Cut> cuts;
  const double top = scores[order.front()];
  cuts.push_back({1.0, top, 1.0, 0, 0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double level = scores[order[i]];
    while (i < order.size() && scores[order[i]] == level) {
      truth[order[i]] ? ++tp : ++fp;
      ++i;
    }
    if (i < order.size()) {
      const double next = scores[order[i]];
      double mid = 0.5 * (level + next);
      if (!(mid < level)) mid = next;
      cuts.push_back({mid, next, level, tp, fp});
    } else if (level > 0.0) {
      cuts.push_back({0.0, 0.0, level, tp, fp});
    }
  }
  return cuts;
}

CurvePoint make_point(CurveKind kind, std::size_t tp, std::size_t fp,
                      std::size_t positives, std::size_t negatives,
                      double threshold) {
  CurvePoint p;
  p.threshold = threshold;
  const double tpr = positives ? static_cast<double>(tp) / positives : 0.0;
  if (kind == CurveKind::kPrecisionRecall) {
    p.x = tpr;
    p.y = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 1.0;
    const std::size_t fn = positives - tp;
    p.objective = tp                         ? 2.0 * tp / (2.0 * tp + fp + fn)
                  : (fp == 0 && positives == 0) ? 1.0
                                                : 0.0;
  } else {
    p.x = negatives ? static_cast<double>(fp) / negatives : 0.0;
    p.y = tpr;
    p.objective = p.y - p.x;
  }
  return p;
}

void check_binary_input(std::span<const double> scores,
                        std::span<const bool> truth) {
  if (scores.size() != truth.size()) {
    throw ValidationError("curve: scores and labels differ in length");
  }
  if (scores.empty()) throw ValidationError("curve: no items");
  for (double s : scores) {
    if (!std::isfinite(s)) throw ValidationError("curve: non-finite score");
  }
}

std::vector<std::size_t> align(std::span<const Decision> decisions,
                               std::span<const AnnotationSet> truth) {
  if (decisions.empty()) throw ValidationError("evaluate: no recordings");
  if (decisions.size() != truth.size()) {
    throw ValidationError("evaluate: " + std::to_string(decisions.size()) +
                          " decisions vs " + std::to_string(truth.size()) +
                          " annotated recordings");
  }
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!by_id.emplace(truth[i].recording_id, i).second) {
      throw ValidationError("evaluate: duplicate annotation id " +
                            truth[i].recording_id);
    }
  }
  std::vector<std::size_t> index(decisions.size());
  std::vector<bool> used(truth.size(), false);
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto it = by_id.find(decisions[i].recording_id);
    if (it == by_id.end()) {
      throw ValidationError("evaluate: no annotations for " +
                            decisions[i].recording_id);
    }
    if (used[it->second]) {
      throw ValidationError("evaluate: duplicate decision for " +
                            decisions[i].recording_id);
    }
    used[it->second] = true;
    index[i] = it->second;
  }
  return index;
}

}  // namespace

ClassMetrics metrics_from_counts(const ConfusionCounts& counts) {
  ClassMetrics m;
  m.counts = counts;
  const auto predicted = counts.tp + counts.fp;
  const auto actual = counts.tp + counts.fn;
  if (predicted == 0 && actual == 0) {
    // Class absent and never predicted: nothing was gotten wrong.
    m.precision = m.recall = m.f1 = 1.0;
    return m;
  }
  m.precision = predicted ? static_cast<double>(counts.tp) / predicted : 0.0;
  m.recall = actual ? static_cast<double>(counts.tp) / actual : 0.0;
  m.f1 = counts.tp ? 2.0 * counts.tp / (2.0 * counts.tp + counts.fp + counts.fn)
                   : 0.0;
  return m;
}

double macro_f1(std::span<const double> per_class_f1) {
  if (per_class_f1.empty()) throw ValidationError("macro_f1: no classes");
  return std::accumulate(per_class_f1.begin(), per_class_f1.end(), 0.0) /
         static_cast<double>(per_class_f1.size());
}

std::pair<double, double> bootstrap_macro_f1_ci(
    std::span<const LabelSet> predicted, std::span<const LabelSet> truth,
    const EvalOptions& options) {
  const std::size_t n = predicted.size();
  if (n == 0 || truth.size() != n) {
    throw ValidationError("bootstrap: need aligned, non-empty inputs");
  }
  if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
    throw ValidationError("bootstrap: confidence must be in (0, 1)");
  }
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const double point = macro_from_counts(confusion(predicted, truth, all));
  if (options.bootstrap_resamples == 0) return {point, point};

  std::vector<double> stats(options.bootstrap_resamples);
  parallel_for(stats.size(), options.jobs, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, r));
    std::vector<std::size_t> rows(n);
    for (auto& i : rows) i = rng.index(n);
    stats[r] = macro_from_counts(confusion(predicted, truth, rows));
  });
  std::sort(stats.begin(), stats.end());
  const double alpha = 1.0 - options.confidence;
  const double low = quantile(stats, alpha / 2.0);
  const double high = quantile(stats, 1.0 - alpha / 2.0);
  return {std::min(low, point), std::max(high, point)};
}

EvalReport evaluate_labels(std::span<const LabelSet> predicted,
                           std::span<const LabelSet> truth,
                           const EvalOptions& options) {
  if (predicted.empty()) throw ValidationError("evaluate: no recordings");
  if (predicted.size() != truth.size()) {
    throw ValidationError("evaluate: predictions and truth differ in length");
  }
  std::vector<std::size_t> all(predicted.size());
  std::iota(all.begin(), all.end(), 0);
  const auto counts = confusion(predicted, truth, all);

  EvalReport report;
  report.num_recordings = predicted.size();
  PerClass<double> f1{};
  for (std::size_t c = 0; c < kNumTargetClasses; ++c) {
    report.per_class[c] = metrics_from_counts(counts[c]);
    f1[c] = report.per_class[c].f1;
  }
  report.macro_f1 = macro_f1(f1);
  std::tie(report.ci_low, report.ci_high) =
      bootstrap_macro_f1_ci(predicted, truth, options);

  std::size_t pred_silent = 0;
  std::size_t true_silent = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].targets().empty()) ++pred_silent;
    if (truth[i].targets().empty()) ++true_silent;
  }
  report.predicted_silence_rate =
      static_cast<double>(pred_silent) / predicted.size();
  report.true_silence_rate = static_cast<double>(true_silent) / predicted.size();
  return report;
}

EvalReport evaluate(std::span<const Decision> decisions,
                    std::span<const AnnotationSet> truth,
                    const EvalOptions& options) {
  const auto index = align(decisions, truth);
  std::vector<LabelSet> predicted;
  std::vector<LabelSet> actual;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    predicted.push_back(decisions[i].active);
    actual.push_back(truth[index[i]].weak_labels());
  }
  return evaluate_labels(predicted, actual, options);
}

Curve curve(std::span<const double> scores, std::span<const bool> truth,
            CurveKind kind) {
  check_binary_input(scores, truth);
  const auto positives =
      static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
  const std::size_t negatives = truth.size() - positives;
  if (kind == CurveKind::kRoc && (positives == 0 || negatives == 0)) {
    throw ValidationError(
        "ROC curve needs at least one positive and one negative item");
  }

  Curve out;
  out.kind = kind;
  for (const auto& cut : enumerate_cuts(scores, truth)) {
    out.points.push_back(
        make_point(kind, cut.tp, cut.fp, positives, negatives, cut.threshold));
  }
  out.best = out.points.front();
  for (const auto& p : out.points) {
    if (p.objective > out.best.objective) out.best = p;
  }
  return out;
}

double f1_at_threshold(std::span<const double> scores,
                       std::span<const bool> truth, double threshold) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool p = scores[i] > threshold;
    if (p && truth[i]) ++tp;
    else if (p) ++fp;
    else if (truth[i]) ++fn;
  }
  if (tp + fp + fn == 0) return 1.0;
  return tp ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
}

double youden_at_threshold(std::span<const double> scores,
                           std::span<const bool> truth, double threshold) {
  std::size_t tp = 0, fp = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool p = scores[i] > threshold;
    if (truth[i]) {
      ++pos;
      if (p) ++tp;
    } else {
      ++neg;
      if (p) ++fp;
    }
  }
  const double tpr = pos ? static_cast<double>(tp) / pos : 0.0;
  const double fpr = neg ? static_cast<double>(fp) / neg : 0.0;
  return tpr - fpr;
}

TunedThresholds tune_thresholds(std::span<const PerClass<double>> scores,
                                std::span<const LabelSet> truth,
                                const TuneOptions& options) {
  if (scores.size() != truth.size()) {
    throw ValidationError("tune: scores and labels differ in length");
  }
  if (scores.empty()) throw ValidationError("tune: no recordings");
  if (options.grid_step < 0.0) throw ValidationError("tune: negative grid step");
  const CurveKind kind = options.objective == TuneObjective::kF1
                             ? CurveKind::kPrecisionRecall
                             : CurveKind::kRoc;
  TunedThresholds out;
  std::vector<double> s(scores.size());
  std::unique_ptr<bool[]> t(new bool[scores.size()]);
  for (auto c : kTargetClasses) {
    const auto ci = class_index(c);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      s[i] = scores[i][ci];
      t[i] = truth[i].contains(c);
    }
    const std::span<const bool> labels(t.get(), scores.size());
    check_binary_input(s, labels);
    const auto positives =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    const std::size_t negatives = labels.size() - positives;
    if (kind == CurveKind::kRoc && (positives == 0 || negatives == 0)) {
      throw ValidationError("tune: " + std::string(class_name(c)) +
                            " needs positive and negative examples for ROC");
    }

    const auto cuts = enumerate_cuts(s, labels);
    std::size_t best = 0;
    double best_value = -2.0;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      const double v = make_point(kind, cuts[k].tp, cuts[k].fp, positives,
                                  negatives, cuts[k].threshold).objective;
      if (v > best_value) {
        best_value = v;
        best = k;
      }
    }
    double threshold = cuts[best].threshold;
    if (options.grid_step > 0.0) {
      // Grid values g that realise the same cut: lo <= g < hi (g <= 1 at
      // the top sentinel). Pick the one nearest the midpoint.
      const auto& cut = cuts[best];
      const double step = options.grid_step;
      const bool top = best == 0;
      const double first = std::ceil(cut.lo / step - 1e-9) * step;
      // Divide by 1/step when it is whole so 0.001 grids print as 0.92.
      const double per_unit = std::round(1.0 / step);
      const bool whole = std::abs(1.0 / step - per_unit) < 1e-9;
      std::optional<double> pick;
      for (double g = first; g <= cut.hi + 1e-12; g += step) {
        const double k = std::round(g / step);
        const double gv = whole ? k / per_unit : k * step;
        const bool inside = gv >= cut.lo && (top ? gv <= cut.hi : gv < cut.hi) &&
                            gv >= 0.0 && gv <= 1.0;
        if (!inside) continue;
        if (!pick || std::abs(gv - cut.threshold) < std::abs(*pick - cut.threshold)) {
          pick = gv;
        }
      }
      if (pick) threshold = *pick;
    }
    out.thresholds[ci] = threshold;
    out.objective[ci] = best_value;
  }
  return out;
}

std::size_t StratifiedErrors::total(SoundClass target, ErrorKind kind) const {
  const auto& table = kind == ErrorKind::kFalsePositive
                          ? false_positives[class_index(target)]
                          : false_negatives[class_index(target)];
  std::size_t n = 0;
  for (const auto& [combo, tally] : table) n += tally.count;
  return n;
}

StratifiedErrors stratify_labels(std::span<const LabelSet> predicted,
                                 std::span<const LabelSet> truth) {
  if (predicted.size() != truth.size()) {
    throw ValidationError("stratify: predictions and truth differ in length");
  }
  const LabelSet silence = LabelSet::of({SoundClass::kSilence});
  StratifiedErrors out;
  for (auto target : kTargetClasses) {
    // Every combination of the other two classes, including none ("S").
    LabelSet others;
    for (auto c : kTargetClasses) {
      if (c != target) others.insert(c);
    }
    for (std::uint8_t bits = 0; bits < 8; ++bits) {
      const LabelSet combo(bits);
      if (!combo.is_subset_of(others)) continue;
      const LabelSet key = combo.empty() ? silence : combo;
      out.false_positives[class_index(target)][key];
      out.false_negatives[class_index(target)][key];
    }
  }

  for (std::size_t i = 0; i < truth.size(); ++i) {
    const LabelSet actual = truth[i].targets();
    for (auto target : kTargetClasses) {
      LabelSet combo = actual;
      combo.erase(target);
      const LabelSet key = combo.empty() ? silence : combo;
      const bool predicted_on = predicted[i].contains(target);
      if (actual.contains(target)) {
        auto& tally = out.false_negatives[class_index(target)][key];
        ++tally.denominator;
        if (!predicted_on) ++tally.count;
      } else {
        auto& tally = out.false_positives[class_index(target)][key];
        ++tally.denominator;
        if (predicted_on) ++tally.count;
      }
    }
  }
  return out;
}

StratifiedErrors stratify_errors(std::span<const Decision> decisions,
                                 std::span<const AnnotationSet> truth) {
  const auto index = align(decisions, truth);
  std::vector<LabelSet> predicted;
  std::vector<LabelSet> actual;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    predicted.push_back(decisions[i].active);
    actual.push_back(truth[index[i]].weak_labels());
  }
  return stratify_labels(predicted, actual);
}

void write_stratified_errors(std::ostream& out, const StratifiedErrors& errors) {
  out << "target,combination,kind,count,rate\n";
  for (auto target : kTargetClasses) {
    for (auto kind : {ErrorKind::kFalsePositive, ErrorKind::kFalseNegative}) {
      const auto& table = kind == ErrorKind::kFalsePositive
                              ? errors.false_positives[class_index(target)]
                              : errors.false_negatives[class_index(target)];
      for (const auto& [combo, tally] : table) {
        out << class_name(target) << ',' << combo.code() << ','
            << (kind == ErrorKind::kFalsePositive ? "FP" : "FN") << ','
            << tally.count << ',';
        if (tally.denominator > 0) out << tally.rate();
        out << '\n';
      }
    }
  }
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("pearson: inputs differ in length");
  }
  if (x.size() < 2) {
    throw ValidationError("pearson: need at least 2 points, got " +
                          std::to_string(x.size()));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw ValidationError("pearson: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::string_view index_name(IndexKind kind) {
  switch (kind) {
    case IndexKind::kAci: return "aci";
    case IndexKind::kAdi: return "adi";
    case IndexKind::kNdsi: return "ndsi";
  }
  return "unknown";
}

bool LabelFilter::passes(LabelSet labels) const {
  const LabelSet t = labels.targets();
  return !t.empty() && labels == t && t.is_subset_of(allowed);
}

std::string LabelFilter::name() const {
  if (allowed == LabelSet::of({SoundClass::kAnthropophony, SoundClass::kBiophony,
                               SoundClass::kGeophony})) {
    return "all";
  }
  return allowed.code();
}

LabelFilter LabelFilter::parse(std::string_view text) {
  LabelFilter f;
  f.allowed = LabelSet::parse_code(text);
  if (f.allowed.empty() || f.allowed.contains(SoundClass::kSilence)) {
    throw ValidationError("filter must name target classes (A, B, G) or 'all'");
  }
  return f;
}

CorrelationPairs correlation_pairs(std::span<const IndexResult> indices,
                                   const std::map<std::string, double>& diversity,
                                   const std::map<std::string, LabelSet>& labels,
                                   const LabelFilter& filter, IndexKind index) {
  CorrelationPairs out;
  for (const auto& r : indices) {
    const auto d = diversity.find(r.recording_id);
    const auto l = labels.find(r.recording_id);
    if (d == diversity.end() || l == labels.end()) continue;
    if (!filter.passes(l->second)) continue;
    std::optional<double> value;
    switch (index) {
      case IndexKind::kAci: value = r.aci; break;
      case IndexKind::kAdi: value = r.adi; break;
      case IndexKind::kNdsi: value = r.ndsi; break;
    }
    if (!value) continue;
    out.index_values.push_back(*value);
    out.species_counts.push_back(d->second);
  }
  return out;
}

CorrelationResult correlate(std::span<const IndexResult> indices,
                            const std::map<std::string, double>& diversity,
                            const std::map<std::string, LabelSet>& labels,
                            const LabelFilter& filter, IndexKind index) {
  const auto pairs = correlation_pairs(indices, diversity, labels, filter, index);
  CorrelationResult out;
  out.filter = filter.name();
  out.index = index;
  out.n = pairs.index_values.size();
  out.rho = pearson(pairs.index_values, pairs.species_counts);
  return out;
}

}  // namespace soundscape
