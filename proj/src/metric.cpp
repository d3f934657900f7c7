// src/metric.cpp

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

#include "spk/metric.hpp"

#include "spk/error.hpp"
#include "spk/kl2.hpp"

#include <stdexcept>

namespace spk {

MetricId parse_metric(const std::string& name) {
  if (name == "kl2") return MetricId::kKl2;
  if (name == "kl2_no_mean") return MetricId::kKl2NoMean;
  if (name == "vq") return MetricId::kVq;
  if (name == "aqd") return MetricId::kAqd;
  throw std::invalid_argument("unknown metric '" + name +
                              "' (expected kl2, kl2_no_mean, vq or aqd)");
}

std::string to_string(MetricId id) {
  switch (id) {
    case MetricId::kKl2: return "kl2";
    case MetricId::kKl2NoMean: return "kl2_no_mean";
    case MetricId::kVq: return "vq";
    case MetricId::kAqd: return "aqd";
  }
  return "?";
}

bool is_kl2_family(MetricId id) {
  return id == MetricId::kKl2 || id == MetricId::kKl2NoMean;
}

SegmentModel build_model(const Matrixd& rows, const MetricConfig& cfg) {
  SegmentModel m;
  m.frames = rows.rows();
  switch (cfg.id) {
    case MetricId::kKl2:
    case MetricId::kKl2NoMean:
      m.stats = compute_stats(rows, cfg.policy);
      break;
    case MetricId::kVq:
      m.codebook = train_codebook(rows, cfg.codebook_k, cfg.seed);
      break;
    case MetricId::kAqd:
      m.codebook = train_codebook(rows, cfg.codebook_k, cfg.seed);
      m.features = rows;
      break;
  }
  return m;
}

double metric_between(const SegmentModel& a, const SegmentModel& b,
                      const MetricConfig& cfg) {
  switch (cfg.id) {
    case MetricId::kKl2: return kl2(a.stats, b.stats);
    case MetricId::kKl2NoMean: return kl2_no_mean(a.stats, b.stats);
    case MetricId::kVq: return vq_distance(a.codebook, b.codebook);
    case MetricId::kAqd:
      return (aqd(a.features, b.codebook) + aqd(b.features, a.codebook)) / 2.0;
  }
  throw std::logic_error("metric_between: unreachable");
}

}  // namespace spk
