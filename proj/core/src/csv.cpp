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

#include "soundscape/csv.hpp"

#include <charconv>
#include <cstdio>
#include <string>

#include "soundscape/error.hpp"

namespace soundscape {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

CsvReader::CsvReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {}

bool CsvReader::read_line(std::string& out) {
  while (std::getline(in_, out)) {
    ++line_;
    const auto t = trim(out);
    if (t.empty() || t.front() == '#') continue;
    return true;
  }
  return false;
}

const std::vector<std::string>& CsvReader::read_header() {
  std::string line;
  if (!read_line(line)) fail("missing header row");
  header_ = split_fields(line);
  return header_;
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  if (!read_line(line)) return false;
  fields = split_fields(line);
  if (!header_.empty() && fields.size() != header_.size()) {
    fail("expected " + std::to_string(header_.size()) + " fields, got " +
         std::to_string(fields.size()));
  }
  return true;
}

std::size_t CsvReader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::string_view::npos;
}

std::size_t CsvReader::require_column(std::string_view name) const {
  const auto i = column(name);
  if (i == std::string_view::npos) {
    throw ValidationError(source_ + ": missing column '" + std::string(name) +
                          "'");
  }
  return i;
}

void CsvReader::fail(std::string_view what) const {
  throw ValidationError(source_ + ":" + std::to_string(line_) + ": " +
                        std::string(what));
}

double CsvReader::parse_double(const std::string& field,
                               std::string_view what) const {
  double v = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail("bad " + std::string(what) + " '" + field + "'");
  }
  return v;
}

long long CsvReader::parse_int(const std::string& field,
                               std::string_view what) const {
  long long v = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail("bad " + std::string(what) + " '" + field + "'");
  }
  return v;
}

}  // namespace soundscape
