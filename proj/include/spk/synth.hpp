// include/spk/synth.hpp

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

#ifndef SPK_SYNTH_HPP
#define SPK_SYNTH_HPP

#include "spk/clustering.hpp"
#include "spk/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spk {

/// Labeled synthetic speaker dataset: one Gaussian per speaker, mean
/// dispersion controlled by speaker_separation (relative to unit-scale
/// within-speaker standard deviation).
struct SyntheticSpec {
  int num_speakers = 5;
  Index dim = 13;
  int segments_per_speaker = 4;
  Index min_frames = 100;
  Index max_frames = 1000;
  double speaker_separation = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ManifestEntry {
  std::string segment_id;
  std::filesystem::path path;
  std::string label;
  Index frames = 0;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

struct ClusterScore {
  double pairwise_precision = 0.0;
  double pairwise_recall = 0.0;
  double pairwise_f1 = 0.0;
  double purity = 0.0;
};

/// Draws the speaker models and segments, writes one feature CSV per
/// segment under out_dir, and returns the manifest. Byte-identical output
/// for identical spec and seed.
DatasetManifest synth_dataset(const SyntheticSpec& spec,
                              const std::filesystem::path& out_dir);

/// In-memory variant used by simulations and tests: segments plus their
/// true labels, no files written.
struct LabeledSegments {
  std::vector<FeatureMatrix> segments;
  std::vector<std::string> labels;  // aligned with segments
};
LabeledSegments synth_segments(const SyntheticSpec& spec);

/// Pairwise precision/recall/F1 over unordered segment pairs plus cluster
/// purity, all invariant under relabeling.
ClusterScore evaluate(const ClusterAssignment& assignment,
                      const DatasetManifest& manifest);

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace spk

#endif  // SPK_SYNTH_HPP
