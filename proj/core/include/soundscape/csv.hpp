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
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace soundscape {

/// Minimal reader for the comma-separated formats used by the toolkit.
/// No quoting; fields are trimmed of surrounding whitespace; blank lines and
/// lines starting with '#' are skipped.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string source_name);

  /// Reads the header row. Throws ValidationError if the input is empty.
  const std::vector<std::string>& read_header();
  /// Next data row; false at end of input.
  bool next(std::vector<std::string>& fields);

  /// 1-based line number of the row returned last.
  std::size_t line() const { return line_; }
  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }

  /// Column position in the header, or npos.
  std::size_t column(std::string_view name) const;
  /// Like column() but throws ValidationError naming the missing column.
  std::size_t require_column(std::string_view name) const;

  /// "<source>:<line>: <what>" as a ValidationError.
  [[noreturn]] void fail(std::string_view what) const;

  double parse_double(const std::string& field, std::string_view what) const;
  long long parse_int(const std::string& field, std::string_view what) const;

 private:
  bool read_line(std::string& out);

  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::size_t line_ = 0;
};

std::vector<std::string> split_fields(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

/// Shortest round-trippable decimal form of a double ("%.17g" trimmed).
std::string format_double(double v);
/// Fixed number of significant digits ("%.<digits>g").
std::string format_double(double v, int digits);

}  // namespace soundscape
