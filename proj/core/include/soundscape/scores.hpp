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

namespace soundscape {

/// Sliding-window layout for inference over a recording.
struct WindowSpec {
  double window_len_s = 10.0;
  double step_s = 10.0;
  /// Emit one extra window when trailing audio is shorter than a window.
  bool pad_last = false;

  /// 0 < step_s <= window_len_s. Throws ValidationError.
  void validate() const;
};

/// Window start times {0, step, 2*step, ...} with start + len <= duration,
/// i.e. floor((duration - len) / step) + 1 of them.
std::vector<double> enumerate_windows(double duration_s,
                                      const WindowSpec& spec);

/// Per-window class confidences of one recording.
///
/// Columns follow the fixed class order (anthropophony, biophony,
/// geophony[, silence]).
struct ScoreMatrix {
  std::string recording_id;
  std::vector<double> window_starts_s;
  double window_len_s = 0.0;
  std::size_t num_classes = 3;
  std::vector<double> scores;  // [windows x num_classes], row-major

  std::size_t windows() const { return window_starts_s.size(); }
  double at(std::size_t window, std::size_t cls) const {
    return scores[window * num_classes + cls];
  }
  double& at(std::size_t window, std::size_t cls) {
    return scores[window * num_classes + cls];
  }
  double at(std::size_t window, SoundClass cls) const {
    return at(window, class_index(cls));
  }

  /// Checks score range, ordering and uniform spacing.
  void validate() const;
};

/// Reads `recording_id,window_start_s,anthropophony,biophony,geophony
/// [,silence]`. Rows are grouped by recording (in order of first
/// appearance) and sorted by start time. When `window_len_s` is not given
/// the window length is taken to be the step (0 for single-window
/// recordings).
std::vector<ScoreMatrix> load_scores(std::istream& in,
                                     const std::string& source_name,
                                     std::optional<double> window_len_s = {});
std::vector<ScoreMatrix> load_scores(const std::filesystem::path& path,
                                     std::optional<double> window_len_s = {});

/// Writes the load_scores() format using shortest round-trip decimals, so
/// load_scores(dump_scores(m)) == m. All matrices
/// must share the same class count.
void dump_scores(std::ostream& out, std::span<const ScoreMatrix> matrices);

}  // namespace soundscape
