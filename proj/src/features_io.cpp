// src/features_io.cpp

// Copyright 2026  spkcluster authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spk/features_io.hpp"

#include "spk/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace spk {

namespace {

// strtod-based field parser; rejects trailing garbage
double parse_field(const std::string& field, const std::string& context) {
  const char* begin = field.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0'))
    throw MalformedRow("read_features: bad field '" + field + "' " + context);
  return v;
}

}  // namespace

FeatureMatrix read_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("read_features: cannot open " + path.string());

  FeatureMatrix out;
  out.segment_id = path.stem().string();
  std::vector<std::vector<double>> rows;
  Index dim = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      auto eq = body.find('=');
      if (eq != std::string::npos) {
        std::string key = body.substr(0, eq);
        std::string value = body.substr(eq + 1);
        key.erase(0, key.find_first_not_of(' '));
        key.erase(key.find_last_not_of(' ') + 1);
        if (key == "segment_id" && !value.empty()) out.segment_id = value;
      }
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
      row.push_back(parse_field(field, "at line " + std::to_string(lineno)));
    if (dim < 0)
      dim = static_cast<Index>(row.size());
    else if (static_cast<Index>(row.size()) != dim)
      throw MalformedRow("read_features: line " + std::to_string(lineno) +
                         " has " + std::to_string(row.size()) +
                         " fields, expected " + std::to_string(dim));
    for (double v : row)
      if (!std::isfinite(v))
        throw NonFiniteValue("read_features: non-finite value at line " +
                             std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw MalformedRow("read_features: no data rows in " + path.string());

  out.values.resize(static_cast<Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (Index c = 0; c < dim; ++c)
      out.values(static_cast<Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
  return out;
}

void write_features(const FeatureMatrix& m, const std::filesystem::path& path,
                    const FeatureFileInfo& info) {
  if (!m.values.allFinite())
    throw NonFiniteValue("write_features: matrix contains non-finite values");
  std::ofstream out(path);
  if (!out) throw IoFailure("write_features: cannot open " + path.string());
  out << "# segment_id=" << m.segment_id << "\n";
  out << "# dim=" << m.dim() << "\n";
  if (info.sample_rate > 0) out << "# sample_rate=" << info.sample_rate << "\n";
  if (info.hop_ms > 0) out << "# hop_ms=" << info.hop_ms << "\n";
  char buf[40];
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.dim(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.values(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoFailure("write_features: write failed for " + path.string());
}

}  // namespace spk
