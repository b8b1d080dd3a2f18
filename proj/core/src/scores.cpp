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

#include "soundscape/scores.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <string>

#include "soundscape/csv.hpp"
#include "soundscape/error.hpp"

namespace soundscape {
namespace {

constexpr double kTimeTolerance = 1e-6;

}  // namespace

void WindowSpec::validate() const {
  if (!(window_len_s > 0.0)) {
    throw ValidationError("window spec: window length must be positive");
  }
  if (!(step_s > 0.0) || step_s > window_len_s + kTimeTolerance) {
    throw ValidationError("window spec: need 0 < step <= window length");
  }
}

std::vector<double> enumerate_windows(double duration_s,
                                      const WindowSpec& spec) {
  spec.validate();
  if (!(duration_s + kTimeTolerance >= spec.window_len_s)) {
    throw ValidationError("enumerate_windows: duration " +
                          std::to_string(duration_s) +
                          " s is shorter than one window");
  }
  const double span = std::max(0.0, duration_s - spec.window_len_s);
  const auto count =
      static_cast<std::size_t>(std::floor(span / spec.step_s + 1e-9)) + 1;
  std::vector<double> starts(count);
  for (std::size_t i = 0; i < count; ++i) starts[i] = i * spec.step_s;
  if (spec.pad_last &&
      starts.back() + spec.window_len_s < duration_s - kTimeTolerance) {
    starts.push_back(count * spec.step_s);
  }
  return starts;
}

void ScoreMatrix::validate() const {
  if (num_classes != 3 && num_classes != 4) {
    throw ValidationError(recording_id + ": expected 3 or 4 score columns");
  }
  if (scores.size() != window_starts_s.size() * num_classes) {
    throw ValidationError(recording_id + ": score rows do not match windows");
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ValidationError(recording_id + ": score " + format_double(s) +
                            " outside [0, 1]");
    }
  }
  for (std::size_t i = 1; i < window_starts_s.size(); ++i) {
    if (!(window_starts_s[i] > window_starts_s[i - 1])) {
      throw ValidationError(recording_id + ": window starts not strictly ascending");
    }
  }
  if (window_starts_s.size() > 2) {
    const double step = window_starts_s[1] - window_starts_s[0];
    for (std::size_t i = 2; i < window_starts_s.size(); ++i) {
      const double d = window_starts_s[i] - window_starts_s[i - 1];
      if (std::abs(d - step) > kTimeTolerance * std::max(1.0, step)) {
        throw ValidationError(recording_id + ": non-uniform window spacing (" +
                              format_double(step) + " vs " + format_double(d) +
                              " s)");
      }
    }
  }
}

std::vector<ScoreMatrix> load_scores(std::istream& in,
                                     const std::string& source_name,
                                     std::optional<double> window_len_s) {
  CsvReader csv(in, source_name);
  const auto& header = csv.read_header();
  static const std::vector<std::string> kBase = {
      "recording_id", "window_start_s", "anthropophony", "biophony",
      "geophony"};
  const bool with_silence = header.size() == 6 && header[5] == "silence";
  if (header.size() < 5 || !std::equal(kBase.begin(), kBase.end(), header.begin()) ||
      (header.size() == 6 && !with_silence) || header.size() > 6) {
    csv.fail(
        "expected header recording_id,window_start_s,anthropophony,biophony,"
        "geophony[,silence]");
  }
  const std::size_t num_classes = with_silence ? 4 : 3;

  struct Row {
    double start;
    std::vector<double> scores;
    std::size_t line;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>> rows;
  std::vector<std::string> fields;
  while (csv.next(fields)) {
    if (fields[0].empty()) csv.fail("empty recording_id");
    Row row;
    row.line = csv.line();
    row.start = csv.parse_double(fields[1], "window_start_s");
    if (!(row.start >= 0.0)) csv.fail("negative window_start_s");
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double s = csv.parse_double(fields[2 + c], header[2 + c]);
      if (!(s >= 0.0 && s <= 1.0)) {
        csv.fail("score " + fields[2 + c] + " for " + header[2 + c] +
                 " outside [0, 1]");
      }
      row.scores.push_back(s);
    }
    auto [it, inserted] = rows.try_emplace(fields[0]);
    if (inserted) order.push_back(fields[0]);
    it->second.push_back(std::move(row));
  }

  std::vector<ScoreMatrix> out;
  out.reserve(order.size());
  for (const auto& id : order) {
    auto& group = rows[id];
    std::stable_sort(group.begin(), group.end(),
                     [](const Row& a, const Row& b) { return a.start < b.start; });
    ScoreMatrix m;
    m.recording_id = id;
    m.num_classes = num_classes;
    for (const auto& row : group) {
      m.window_starts_s.push_back(row.start);
      m.scores.insert(m.scores.end(), row.scores.begin(), row.scores.end());
    }
    if (window_len_s) {
      m.window_len_s = *window_len_s;
    } else if (m.windows() > 1) {
      m.window_len_s = m.window_starts_s[1] - m.window_starts_s[0];
    }
    try {
      m.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(source_name + ":" +
                            std::to_string(group.front().line) + ": " + e.what());
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<ScoreMatrix> load_scores(const std::filesystem::path& path,
                                     std::optional<double> window_len_s) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_scores(in, path.string(), window_len_s);
}

void dump_scores(std::ostream& out, std::span<const ScoreMatrix> matrices) {
  const std::size_t num_classes =
      matrices.empty() ? 3 : matrices.front().num_classes;
  out << "recording_id,window_start_s,anthropophony,biophony,geophony";
  if (num_classes == 4) out << ",silence";
  out << '\n';
  for (const auto& m : matrices) {
    if (m.num_classes != num_classes) {
      throw ValidationError("dump_scores: mixed class counts");
    }
    for (std::size_t w = 0; w < m.windows(); ++w) {
      out << m.recording_id << ',' << format_double(m.window_starts_s[w]);
      for (std::size_t c = 0; c < num_classes; ++c) {
        out << ',' << format_double(m.at(w, c));
      }
      out << '\n';
    }
  }
}

}  // namespace soundscape
