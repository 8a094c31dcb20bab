// Copyright 2026 The mslm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mslm/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>

#include "mslm/error.h"

namespace mslm {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

double parse_cell(std::string_view cell, const std::string& source, std::size_t line,
                  const std::string& column) {
  std::string_view text = cell;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw Error(ErrorCode::kParse, where(source, line) + ": column '" + column +
                                       "' is not a finite number: '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace

Dataset ingest_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;

  // Header (skipping a UTF-8 BOM and leading blank lines).
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!trim(line).empty()) {
      header_line = line;
      header = split(header_line);
      break;
    }
  }
  if (header.empty()) {
    throw Error(ErrorCode::kParse, source + ": missing header row 'group,x,y1,...,yq'");
  }
  if (header.size() < 3 || header[0] != "group" || header[1] != "x") {
    throw Error(ErrorCode::kParse, where(source, line_no) +
                                       ": header must be 'group,x,y1,...,yq', got '" +
                                       header_line + "'");
  }

  Dataset ds;
  for (std::size_t j = 2; j < header.size(); ++j) ds.response_names.emplace_back(header[j]);
  const std::size_t q = ds.q();

  struct Accum {
    std::vector<double> x;
    std::vector<double> y;
  };
  std::vector<std::string> order;
  std::map<std::string, Accum> accum;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kParse, where(source, line_no) + ": expected " +
                                         std::to_string(header.size()) + " fields, found " +
                                         std::to_string(cells.size()));
    }
    const std::string group(cells[0]);
    if (group.empty()) throw Error(ErrorCode::kParse, where(source, line_no) + ": empty group");
    auto [it, inserted] = accum.try_emplace(group);
    if (inserted) order.push_back(group);
    it->second.x.push_back(parse_cell(cells[1], source, line_no, "x"));
    for (std::size_t j = 0; j < q; ++j) {
      it->second.y.push_back(parse_cell(cells[j + 2], source, line_no, ds.response_names[j]));
    }
  }

  if (order.size() < 2) {
    throw Error(ErrorCode::kSampleSize, source + ": need at least 2 distinct groups, found " +
                                            std::to_string(order.size()));
  }
  for (const std::string& label : order) {
    Accum& a = accum.at(label);
    const std::size_t n = a.x.size();
    if (n <= q + 2) {
      throw Error(ErrorCode::kSampleSize, source + ": group '" + label + "' has n=" +
                                              std::to_string(n) + " rows; need more than q+2 = " +
                                              std::to_string(q + 2));
    }
    ds.groups.push_back(
        GroupSample{.label = label, .x = std::move(a.x), .y = Mat(n, q, std::move(a.y))});
  }
  return ds;
}

Dataset ingest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return ingest_csv(in, path);
}

}  // namespace mslm
