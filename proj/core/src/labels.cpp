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

#include "soundscape/labels.hpp"

#include <bit>
#include <cctype>
#include <string>

#include "soundscape/error.hpp"

namespace soundscape {

std::string_view class_name(SoundClass c) {
  switch (c) {
    case SoundClass::kAnthropophony: return "anthropophony";
    case SoundClass::kBiophony: return "biophony";
    case SoundClass::kGeophony: return "geophony";
    case SoundClass::kSilence: return "silence";
  }
  return "unknown";
}

char class_letter(SoundClass c) {
  static constexpr char kLetters[] = {'A', 'B', 'G', 'S'};
  return kLetters[class_index(c)];
}

std::optional<SoundClass> parse_class(std::string_view text) {
  std::string lower;
  for (char ch : text) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  for (auto c : {SoundClass::kAnthropophony, SoundClass::kBiophony,
                 SoundClass::kGeophony, SoundClass::kSilence}) {
    if (lower == class_name(c)) return c;
    if (lower.size() == 1 &&
        lower[0] == std::tolower(static_cast<unsigned char>(class_letter(c)))) {
      return c;
    }
  }
  return std::nullopt;
}

int LabelSet::size() const { return std::popcount(bits_); }

std::string LabelSet::code() const {
  if (empty()) return "-";
  std::string out;
  for (auto c : {SoundClass::kAnthropophony, SoundClass::kBiophony,
                 SoundClass::kGeophony, SoundClass::kSilence}) {
    if (contains(c)) out.push_back(class_letter(c));
  }
  return out;
}

LabelSet LabelSet::parse_code(std::string_view code) {
  if (code == "all" || code == "ALL") {
    return of({SoundClass::kAnthropophony, SoundClass::kBiophony,
               SoundClass::kGeophony});
  }
  if (code == "-") return {};
  if (code.empty()) throw ValidationError("empty label combination");
  LabelSet out;
  for (char ch : code) {
    auto c = parse_class(std::string_view(&ch, 1));
    if (!c) {
      throw ValidationError("bad label combination '" + std::string(code) +
                            "' (expected letters from A, B, G, S)");
    }
    out.insert(*c);
  }
  return out;
}

}  // namespace soundscape
