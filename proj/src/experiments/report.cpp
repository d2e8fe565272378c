// Copyright 2026 The ScionFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scionfl/experiments/report.h"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "scionfl/base.h"

namespace scionfl::experiments {

void Table::add_row(std::vector<std::string> cells) {
  SCIONFL_ENFORCE(cells.size() == columns_.size(),
                  "row width does not match the schema");
  rows_.push_back(std::move(cells));
}

std::string Table::format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::string out;
  for (size_t i = 0; i < columns_.size(); ++i) {
    out += columns_[i];
    out += (i + 1 < columns_.size()) ? "," : "\n";
  }
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      out += (i + 1 < row.size()) ? "," : "\n";
    }
  }
  return out;
}

std::string Table::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json obj;
    for (size_t i = 0; i < columns_.size(); ++i) obj[columns_[i]] = row[i];
    arr.push_back(obj);
  }
  nlohmann::ordered_json doc;
  doc["columns"] = columns_;
  doc["rows"] = arr;
  return doc.dump(2) + "\n";
}

Table Table::from_json(const std::string& text) {
  auto doc = nlohmann::ordered_json::parse(text);
  Table t(doc.at("columns").get<std::vector<std::string>>());
  for (const auto& obj : doc.at("rows")) {
    std::vector<std::string> cells;
    for (const auto& col : t.columns_) {
      cells.push_back(obj.at(col).get<std::string>());
    }
    t.add_row(std::move(cells));
  }
  return t;
}

void Table::write(const std::string& path, const std::string& format) const {
  std::ofstream f(path, std::ios::binary);
  SCIONFL_ENFORCE(f.good(), "cannot open output file: ", path);
  if (format == "csv") {
    f << to_csv();
  } else if (format == "json") {
    f << to_json();
  } else {
    SCIONFL_ENFORCE(false, "unknown report format: ", format);
  }
  SCIONFL_ENFORCE(f.good(), "failed writing: ", path);
}

}  // namespace scionfl::experiments
