// src/clustering.cpp

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

#include "spk/clustering.hpp"

#include "spk/error.hpp"
#include "spk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace spk {

namespace {

void validate_matrix(const DistanceMatrix& d) {
  const Index n = static_cast<Index>(d.ids.size());
  if (n < 2) throw std::invalid_argument("distance matrix: need >= 2 segments");
  if (d.values.rows() != n || d.values.cols() != n)
    throw std::invalid_argument("distance matrix: shape mismatch");
  for (Index i = 0; i < n; ++i) {
    if (d.values(i, i) != 0.0)
      throw std::invalid_argument("distance matrix: nonzero diagonal");
    for (Index j = 0; j < n; ++j) {
      const double v = d.values(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("distance matrix: invalid value");
      if (std::abs(v - d.values(j, i)) > 1e-9 * std::max(1.0, std::abs(v)))
        throw std::invalid_argument("distance matrix: not symmetric");
    }
  }
}

std::string csv_escape_check(const std::string& id) {
  if (id.find_first_of(",\n\r#") != std::string::npos)
    throw std::invalid_argument("segment id '" + id +
                                "' contains characters unsupported in CSV");
  return id;
}

}  // namespace

DistanceMatrix pairwise_distances(std::span<const FeatureMatrix> segments,
                                  const MetricConfig& cfg,
                                  const CorrectionSurface* surface, int jobs) {
  const std::size_t n = segments.size();
  if (n < 2)
    throw std::invalid_argument("pairwise_distances: need >= 2 segments");
  const Index dim = segments[0].dim();
  std::set<std::string> seen;
  for (const auto& s : segments) {
    if (s.dim() != dim)
      throw DimensionMismatch("pairwise_distances: segment '" + s.segment_id +
                              "' has dim " + std::to_string(s.dim()) +
                              ", expected " + std::to_string(dim));
    if (!seen.insert(s.segment_id).second)
      throw std::invalid_argument("pairwise_distances: duplicate segment id '" +
                                  s.segment_id + "'");
  }
  if (surface) {
    if (surface->metric != cfg.id)
      throw std::invalid_argument(
          "pairwise_distances: surface metric '" + to_string(surface->metric) +
          "' does not match requested metric '" + to_string(cfg.id) + "'");
    if (surface->dim != dim)
      throw std::invalid_argument("pairwise_distances: surface dim " +
                                  std::to_string(surface->dim) +
                                  " does not match segment dim " +
                                  std::to_string(dim));
  }

  std::vector<SegmentModel> models(n);
  std::vector<std::string> model_errors(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    try {
      models[i] = build_model(segments[i].values, cfg);
    } catch (const Error& e) {
      model_errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    if (!model_errors[i].empty())
      throw MetricFailure("pairwise_distances: segment '" +
                          segments[i].segment_id + "': " + model_errors[i]);

  DistanceMatrix out;
  out.ids.reserve(n);
  out.lengths.reserve(n);
  for (const auto& s : segments) {
    out.ids.push_back(s.segment_id);
    out.lengths.push_back(s.rows());
  }
  out.metric_descriptor = to_string(cfg.id);
  if (surface) out.metric_descriptor += "|" + surface->descriptor();
  out.values.setZero(static_cast<Index>(n), static_cast<Index>(n));

  struct Pair {
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});

  std::vector<std::string> pair_errors(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    try {
      double v = metric_between(models[i], models[j], cfg);
      if (surface)
        v = corrected_distance(v, *surface,
                               static_cast<double>(out.lengths[i]),
                               static_cast<double>(out.lengths[j]));
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = v;
      out.values(static_cast<Index>(j), static_cast<Index>(i)) = v;
    } catch (const Error& e) {
      pair_errors[p] = e.what();
    }
  });
  for (std::size_t p = 0; p < pairs.size(); ++p)
    if (!pair_errors[p].empty())
      throw MetricFailure("pairwise_distances: pair (" +
                          out.ids[pairs[p].i] + ", " + out.ids[pairs[p].j] +
                          "): " + pair_errors[p]);
  return out;
}

Dendrogram agglomerate(const DistanceMatrix& d) {
  validate_matrix(d);
  const Index n = static_cast<Index>(d.ids.size());

  struct Cluster {
    Index node;
    Index size;
    std::string min_id;
    bool alive;
  };
  std::vector<Cluster> cl(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    cl[static_cast<std::size_t>(i)] = {i, 1, d.ids[static_cast<std::size_t>(i)], true};
  Matrixd work = d.values;

  Dendrogram out;
  out.leaves = d.ids;
  out.merges.reserve(static_cast<std::size_t>(n - 1));

  for (Index step = 0; step < n - 1; ++step) {
    Index best_a = -1, best_b = -1;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::string, std::string> best_key;
    for (Index a = 0; a < n; ++a) {
      if (!cl[static_cast<std::size_t>(a)].alive) continue;
      for (Index b = a + 1; b < n; ++b) {
        if (!cl[static_cast<std::size_t>(b)].alive) continue;
        const double v = work(a, b);
        auto key = std::minmax(cl[static_cast<std::size_t>(a)].min_id,
                               cl[static_cast<std::size_t>(b)].min_id);
        std::pair<std::string, std::string> k{key.first, key.second};
        if (v < best || (v == best && k < best_key)) {
          best = v;
          best_key = k;
          best_a = a;
          best_b = b;
        }
      }
    }

    Cluster& A = cl[static_cast<std::size_t>(best_a)];
    Cluster& B = cl[static_cast<std::size_t>(best_b)];
    // record children ordered by representative id
    const bool a_first = A.min_id <= B.min_id;
    out.merges.push_back({a_first ? A.node : B.node,
                          a_first ? B.node : A.node, best});

    // Lance-Williams update for average linkage
    for (Index c = 0; c < n; ++c) {
      if (!cl[static_cast<std::size_t>(c)].alive || c == best_a || c == best_b)
        continue;
      const double v = (static_cast<double>(A.size) * work(best_a, c) +
                        static_cast<double>(B.size) * work(best_b, c)) /
                       static_cast<double>(A.size + B.size);
      work(best_a, c) = v;
      work(c, best_a) = v;
    }
    A.node = n + step;
    A.size += B.size;
    A.min_id = std::min(A.min_id, B.min_id);
    B.alive = false;
  }
  return out;
}

namespace {

ClusterAssignment label_components(const Dendrogram& t, std::size_t merges_used) {
  const Index n = static_cast<Index>(t.leaves.size());
  // union-find over node ids
  std::vector<Index> parent(static_cast<std::size_t>(n) + t.merges.size());
  std::iota(parent.begin(), parent.end(), Index(0));
  std::function<Index(Index)> find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (std::size_t m = 0; m < merges_used; ++m) {
    const Index node = n + static_cast<Index>(m);
    parent[static_cast<std::size_t>(find(t.merges[m].left))] = node;
    parent[static_cast<std::size_t>(find(t.merges[m].right))] = node;
  }

  ClusterAssignment out;
  out.ids = t.leaves;
  out.labels.assign(t.leaves.size(), -1);
  std::vector<std::pair<Index, int>> roots;  // root node -> label
  for (Index i = 0; i < n; ++i) {
    const Index root = find(i);
    int label = -1;
    for (const auto& [r, l] : roots)
      if (r == root) {
        label = l;
        break;
      }
    if (label < 0) {
      label = static_cast<int>(roots.size());
      roots.emplace_back(root, label);
    }
    out.labels[static_cast<std::size_t>(i)] = label;
  }
  out.num_clusters = static_cast<int>(roots.size());
  return out;
}

}  // namespace

ClusterAssignment cut(const Dendrogram& t, double threshold) {
  if (!std::isfinite(threshold))
    throw std::invalid_argument("cut: threshold must be finite");
  std::size_t used = 0;
  while (used < t.merges.size() && t.merges[used].height <= threshold) ++used;
  return label_components(t, used);
}

ClusterAssignment cut_k(const Dendrogram& t, Index k) {
  const Index n = static_cast<Index>(t.leaves.size());
  if (k < 1 || k > n)
    throw InvalidK("cut_k: k = " + std::to_string(k) + " outside [1, " +
                   std::to_string(n) + "]");
  return label_components(t, static_cast<std::size_t>(n - k));
}

void write_distance_matrix(const DistanceMatrix& d,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("write_distance_matrix: cannot open " + path.string());
  out << "# metric_descriptor=" << d.metric_descriptor << "\n";
  out << "# lengths=";
  for (std::size_t i = 0; i < d.lengths.size(); ++i)
    out << (i ? "," : "") << d.lengths[i];
  out << "\n";
  out << "id";
  for (const auto& id : d.ids) out << ',' << csv_escape_check(id);
  out << '\n';
  char buf[40];
  for (Index r = 0; r < d.values.rows(); ++r) {
    out << d.ids[static_cast<std::size_t>(r)];
    for (Index c = 0; c < d.values.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", d.values(r, c));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoFailure("write_distance_matrix: write failed");
}

DistanceMatrix read_distance_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("read_distance_matrix: cannot open " + path.string());
  DistanceMatrix d;
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      const std::string value = line.substr(eq + 1);
      if (key == "metric_descriptor") d.metric_descriptor = value;
      if (key == "lengths") {
        std::stringstream ss(value);
        std::string field;
        while (std::getline(ss, field, ','))
          d.lengths.push_back(static_cast<Index>(std::stoll(field)));
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  if (rows.empty() || rows[0].size() < 3 || rows[0][0] != "id")
    throw CorruptFile("read_distance_matrix: missing id header row");
  const std::size_t n = rows[0].size() - 1;
  if (rows.size() != n + 1)
    throw CorruptFile("read_distance_matrix: expected " + std::to_string(n) +
                      " data rows");
  d.ids.assign(rows[0].begin() + 1, rows[0].end());
  d.values.resize(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows[r + 1];
    if (row.size() != n + 1)
      throw MalformedRow("read_distance_matrix: row " + std::to_string(r) +
                         " has " + std::to_string(row.size() - 1) + " cells");
    if (row[0] != d.ids[r])
      throw CorruptFile("read_distance_matrix: row label '" + row[0] +
                        "' does not match column order");
    for (std::size_t c = 0; c < n; ++c) {
      char* end = nullptr;
      const double v = std::strtod(row[c + 1].c_str(), &end);
      if (end == row[c + 1].c_str() || !std::isfinite(v))
        throw MalformedRow("read_distance_matrix: bad cell '" + row[c + 1] + "'");
      d.values(static_cast<Index>(r), static_cast<Index>(c)) = v;
    }
  }
  if (d.lengths.empty()) d.lengths.assign(n, 0);
  if (d.lengths.size() != n)
    throw CorruptFile("read_distance_matrix: lengths metadata does not match");
  validate_matrix(d);
  return d;
}

namespace {

void json_node(const Dendrogram& t, Index node, std::ostream& os, int indent) {
  const Index n = static_cast<Index>(t.leaves.size());
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (node < n) {
    os << pad << "{\"id\": \"" << t.leaves[static_cast<std::size_t>(node)]
       << "\"}";
    return;
  }
  const Merge& m = t.merges[static_cast<std::size_t>(node - n)];
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", m.height);
  os << pad << "{\"height\": " << buf << ", \"children\": [\n";
  json_node(t, m.left, os, indent + 1);
  os << ",\n";
  json_node(t, m.right, os, indent + 1);
  os << "\n" << pad << "]}";
}

std::string newick_name(const std::string& id) {
  if (id.find_first_of(" ,:;()[]'") == std::string::npos) return id;
  std::string quoted = "'";
  for (char c : id) {
    quoted += c;
    if (c == '\'') quoted += c;
  }
  return quoted + "'";
}

void newick_node(const Dendrogram& t, Index node, double parent_height,
                 std::ostream& os) {
  const Index n = static_cast<Index>(t.leaves.size());
  char buf[40];
  if (node < n) {
    std::snprintf(buf, sizeof(buf), "%.17g", parent_height);
    os << newick_name(t.leaves[static_cast<std::size_t>(node)]) << ':' << buf;
    return;
  }
  const Merge& m = t.merges[static_cast<std::size_t>(node - n)];
  os << '(';
  newick_node(t, m.left, m.height, os);
  os << ',';
  newick_node(t, m.right, m.height, os);
  std::snprintf(buf, sizeof(buf), "%.17g", parent_height - m.height);
  os << "):" << buf;
}

}  // namespace

std::string dendrogram_json(const Dendrogram& t) {
  std::ostringstream os;
  if (t.leaves.empty()) return "{}\n";
  if (t.merges.size() != t.leaves.size() - 1)
    throw std::invalid_argument("dendrogram_json: malformed dendrogram");
  const Index root = static_cast<Index>(t.leaves.size() + t.merges.size()) - 1;
  json_node(t, t.merges.empty() ? 0 : root, os, 0);
  os << "\n";
  return os.str();
}

std::string dendrogram_newick(const Dendrogram& t) {
  if (t.leaves.empty()) return ";\n";
  if (t.merges.size() != t.leaves.size() - 1)
    throw std::invalid_argument("dendrogram_newick: malformed dendrogram");
  std::ostringstream os;
  if (t.merges.empty()) {
    os << newick_name(t.leaves[0]);
  } else {
    const Merge& m = t.merges.back();
    os << '(';
    newick_node(t, m.left, m.height, os);
    os << ',';
    newick_node(t, m.right, m.height, os);
    os << ')';
  }
  os << ";\n";
  return os.str();
}

void write_assignment(const ClusterAssignment& a,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("write_assignment: cannot open " + path.string());
  out << "segment_id,cluster\n";
  for (std::size_t i = 0; i < a.ids.size(); ++i)
    out << csv_escape_check(a.ids[i]) << ',' << a.labels[i] << '\n';
  if (!out) throw IoFailure("write_assignment: write failed");
}

ClusterAssignment read_assignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("read_assignment: cannot open " + path.string());
  ClusterAssignment a;
  std::string line;
  bool header = true;
  int max_label = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != "segment_id,cluster")
        throw SchemaMismatch("read_assignment: unexpected header '" + line + "'");
      header = false;
      continue;
    }
    auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw MalformedRow("read_assignment: bad row '" + line + "'");
    a.ids.push_back(line.substr(0, comma));
    const int label = std::stoi(line.substr(comma + 1));
    a.labels.push_back(label);
    max_label = std::max(max_label, label);
  }
  a.num_clusters = max_label + 1;
  return a;
}

}  // namespace spk
