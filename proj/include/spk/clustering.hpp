// include/spk/clustering.hpp

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

#ifndef SPK_CLUSTERING_HPP
#define SPK_CLUSTERING_HPP

#include "spk/calibration.hpp"
#include "spk/metric.hpp"
#include "spk/types.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace spk {

struct DistanceMatrix {
  std::vector<std::string> ids;
  std::vector<Index> lengths;  // frame counts, aligned with ids
  Matrixd values;              // symmetric, zero diagonal
  std::string metric_descriptor;
};

/// Binary merge tree. Nodes 0..n-1 are leaves; node n+t is the t-th merge.
struct Merge {
  Index left = 0;
  Index right = 0;
  double height = 0.0;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;  // exactly leaves.size() - 1, heights non-decreasing
};

struct ClusterAssignment {
  std::vector<std::string> ids;  // leaf order
  std::vector<int> labels;       // contiguous from 0, same order as ids
  int num_clusters = 0;
};

/// Full pairwise distance matrix under the configured metric; when a
/// surface is supplied each value is divided by the simulated
/// same-distribution value at the two segment lengths.
DistanceMatrix pairwise_distances(std::span<const FeatureMatrix> segments,
                                  const MetricConfig& cfg,
                                  const CorrectionSurface* surface = nullptr,
                                  int jobs = 1);

/// Average-linkage (UPGMA) agglomeration. Ties are broken by the
/// lexicographically smallest pair of cluster representative ids, so the
/// result does not depend on input order.
Dendrogram agglomerate(const DistanceMatrix& d);

ClusterAssignment cut(const Dendrogram& t, double threshold);
ClusterAssignment cut_k(const Dendrogram& t, Index k);

// file formats
void write_distance_matrix(const DistanceMatrix& d,
                           const std::filesystem::path& path);
DistanceMatrix read_distance_matrix(const std::filesystem::path& path);

std::string dendrogram_json(const Dendrogram& t);
std::string dendrogram_newick(const Dendrogram& t);

void write_assignment(const ClusterAssignment& a,
                      const std::filesystem::path& path);
ClusterAssignment read_assignment(const std::filesystem::path& path);

}  // namespace spk

#endif  // SPK_CLUSTERING_HPP
