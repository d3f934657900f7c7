// include/spk/metric.hpp

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

#ifndef SPK_METRIC_HPP
#define SPK_METRIC_HPP

#include "spk/stats.hpp"
#include "spk/types.hpp"
#include "spk/vq.hpp"

#include <cstdint>
#include <string>

namespace spk {

enum class MetricId { kKl2, kKl2NoMean, kVq, kAqd };

MetricId parse_metric(const std::string& name);
std::string to_string(MetricId id);
bool is_kl2_family(MetricId id);

struct MetricConfig {
  MetricId id = MetricId::kKl2;
  Index codebook_k = 64;        // VQ-family codebook size
  std::uint64_t seed = 0;       // VQ-family codebook training seed
  RegularizationPolicy policy;
};

/// Per-segment representation reused across pairwise evaluations: Gaussian
/// stats for the KL2 family, a codebook for the VQ family, and the raw
/// feature rows for AQD scoring.
struct SegmentModel {
  SegmentStatsd stats;
  Codebookd codebook;
  Matrixd features;  // kept only for the aqd metric
  Index frames = 0;
};

SegmentModel build_model(const Matrixd& rows, const MetricConfig& cfg);
double metric_between(const SegmentModel& a, const SegmentModel& b,
                      const MetricConfig& cfg);

}  // namespace spk

#endif  // SPK_METRIC_HPP
