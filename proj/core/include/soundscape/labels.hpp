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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace soundscape {

/// The coarse soundscape classes. The first three are the target classes;
/// silence is derived (no target class active).
enum class SoundClass : std::uint8_t {
  kAnthropophony = 0,
  kBiophony = 1,
  kGeophony = 2,
  kSilence = 3,
};

inline constexpr std::size_t kNumTargetClasses = 3;
inline constexpr std::array<SoundClass, kNumTargetClasses> kTargetClasses = {
    SoundClass::kAnthropophony, SoundClass::kBiophony, SoundClass::kGeophony};

/// Per-target-class value, indexed by class_index().
template <typename T>
using PerClass = std::array<T, kNumTargetClasses>;

constexpr std::size_t class_index(SoundClass c) {
  return static_cast<std::size_t>(c);
}

/// Full lower-case name, e.g. "biophony".
std::string_view class_name(SoundClass c);
/// One-letter code: A, B, G or S.
char class_letter(SoundClass c);
/// Accepts full names or one-letter codes, case-insensitive.
std::optional<SoundClass> parse_class(std::string_view text);

/// A set of sound classes stored as a bitmask.
class LabelSet {
 public:
  constexpr LabelSet() = default;
  constexpr explicit LabelSet(std::uint8_t bits) : bits_(bits & 0x0F) {}

  static constexpr LabelSet of(std::initializer_list<SoundClass> classes) {
    LabelSet s;
    for (auto c : classes) s.insert(c);
    return s;
  }

  constexpr bool contains(SoundClass c) const {
    return (bits_ >> class_index(c)) & 1U;
  }
  constexpr void insert(SoundClass c) {
    bits_ = static_cast<std::uint8_t>(bits_ | (1U << class_index(c)));
  }
  constexpr void erase(SoundClass c) {
    bits_ = static_cast<std::uint8_t>(bits_ & ~(1U << class_index(c)));
  }
  constexpr void set(SoundClass c, bool on) { on ? insert(c) : erase(c); }

  /// Restriction to the three target classes.
  constexpr LabelSet targets() const { return LabelSet(bits_ & 0x07); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr bool is_subset_of(LabelSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  int size() const;

  /// Canonical letter code in A, B, G, S order ("BG", "S", ...). The empty
  /// set renders as "-".
  std::string code() const;
  /// Inverse of code(); also accepts "all" (= ABG). Throws ValidationError.
  static LabelSet parse_code(std::string_view code);

  friend constexpr bool operator==(LabelSet, LabelSet) = default;
  friend constexpr auto operator<=>(LabelSet a, LabelSet b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::uint8_t bits_ = 0;
};

}  // namespace soundscape
