// include/spk/calibration.hpp

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

#ifndef SPK_CALIBRATION_HPP
#define SPK_CALIBRATION_HPP

#include "spk/metric.hpp"
#include "spk/rng.hpp"
#include "spk/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spk {

/// Configuration of a same-distribution simulation run.
struct SimulationConfig {
  MetricId metric = MetricId::kKl2;
  Index dim = 13;
  std::vector<Index> grid_lengths = {20,  30,  50,  75,  100,
                                     150, 200, 300, 500, 1000};
  int trials_per_cell = 200;
  std::uint64_t seed = 0;
  Index codebook_k = 64;  // used by the VQ family
  int jobs = 1;

  void validate() const;  // throws std::invalid_argument
};

/// Simulated expected distance between same-distribution samples, indexed
/// by the two sample lengths. The denominator of the corrected distance.
struct CorrectionSurface {
  MetricId metric = MetricId::kKl2;
  Index dim = 0;
  std::vector<Index> grid_lengths;
  Matrixd values;  // square, symmetric, positive
  int trials_per_cell = 0;
  std::uint64_t seed = 0;
  std::optional<Index> codebook_k;
  std::string created_at;

  /// Short identification string for distance-matrix metadata.
  std::string descriptor() const;
};

/// Surface plus per-cell diagnostics that do not travel with the file.
struct SimulationResult {
  CorrectionSurface surface;
  Matrixd std_errors;       // standard error of each cell mean
  MatrixX<int> failures;    // errored trials per cell
};

/// Called after each finished cell with (cells_done, cells_total, len_a, len_b).
using SimulationProgress =
    std::function<void(std::size_t, std::size_t, Index, Index)>;

/// Runs trials_per_cell independent same-distribution trials per grid cell
/// (i <= j, mirrored afterwards). Each trial draws two N(0, I_dim) samples
/// of the cell's lengths and evaluates the configured metric. Trial t of
/// cell (i, j) is seeded with derive_seed(seed, i, j, t), so the result is
/// identical for any jobs value.
SimulationResult simulate_surface(const SimulationConfig& cfg,
                                  const SimulationProgress& progress = {});

namespace detail {

/// Sample generator: (rng, rows, dim) -> rows x dim matrix.
using SampleSource = std::function<Matrixd(Rng&, Index, Index)>;

/// Per-trial metric evaluator used by the simulation loop.
using CellMetric = std::function<double(const Matrixd&, const Matrixd&,
                                        std::uint64_t trial_seed)>;

/// Simulation core with injectable sampling and metric, for oracles that
/// need a non-standard generator or a failing metric.
SimulationResult simulate_surface_with(const SimulationConfig& cfg,
                                       const SampleSource& source,
                                       const CellMetric& metric,
                                       const SimulationProgress& progress = {});

SampleSource standard_normal_source();
CellMetric metric_evaluator(const SimulationConfig& cfg);

}  // namespace detail

/// Log-bilinear interpolation of the surface at lengths (n, m); arguments
/// outside the grid are clamped to the nearest edge.
double lookup(const CorrectionSurface& s, double n, double m);

/// Eq-style correction: raw distance divided by the simulated
/// same-distribution value at the two lengths.
double corrected_distance(double raw, const CorrectionSurface& s, double n,
                          double m);

void save_surface(const CorrectionSurface& s, const std::filesystem::path& path);
CorrectionSurface load_surface(const std::filesystem::path& path);

}  // namespace spk

#endif  // SPK_CALIBRATION_HPP
