// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "inml/error.h"
#include "inml/model.h"
#include "inml/text_util.h"

namespace inml {

namespace {

// Accepts "<prefix><index>" where index equals `expected`.
bool is_column(std::string_view name, char prefix, int expected) {
  if (name.size() < 2 || name[0] != prefix) return false;
  std::int64_t idx = 0;
  return parse_int64(name.substr(1), idx) && idx == expected;
}

}  // namespace

Dataset parse_dataset(std::string_view csv) {
  Dataset data;
  int line_no = 0;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = trim(csv.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    const auto cells = split(line, ',');
    if (!have_header) {
      int nx = 0;
      int ny = 0;
      for (const auto raw : cells) {
        const std::string_view name = trim(raw);
        if (ny == 0 && is_column(name, 'x', nx)) {
          ++nx;
        } else if (is_column(name, 'y', ny)) {
          ++ny;
        } else {
          throw Error(ErrorCode::kSyntax,
                      "dataset header must be x0..xk,y0..ym; unexpected column '" +
                          std::string(name) + "'",
                      line_no);
        }
      }
      if (nx == 0 || ny == 0) {
        throw Error(ErrorCode::kSyntax,
                    "dataset needs at least one x and one y column", line_no);
      }
      data.num_features = nx;
      data.num_targets = ny;
      have_header = true;
      continue;
    }

    if (cells.size() != static_cast<std::size_t>(data.num_features + data.num_targets)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row has " + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(data.num_features + data.num_targets),
                  line_no);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = 0.0;
      if (!parse_double(trim(cells[i]), v)) {
        throw Error(ErrorCode::kSyntax,
                    "bad number '" + std::string(trim(cells[i])) + "'", line_no);
      }
      if (i < static_cast<std::size_t>(data.num_features)) {
        data.features.push_back(v);
      } else {
        data.targets.push_back(v);
      }
    }
  }
  if (!have_header) throw Error(ErrorCode::kSyntax, "empty dataset", line_no);
  return data;
}

std::string render_dataset(const Dataset &data) {
  std::ostringstream out;
  for (int i = 0; i < data.num_features; ++i) out << (i ? "," : "") << "x" << i;
  for (int j = 0; j < data.num_targets; ++j) out << ",y" << j;
  out << "\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto x = data.feature_row(r);
    const auto y = data.target_row(r);
    for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << format_double(x[i]);
    for (double v : y) out << "," << format_double(v);
    out << "\n";
  }
  return out.str();
}

}  // namespace inml
