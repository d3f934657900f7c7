// src/calibration.cpp

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

#include "spk/calibration.hpp"

#include "spk/error.hpp"
#include "spk/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>

namespace spk {

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void SimulationConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("simulation: dim must be >= 1");
  if (trials_per_cell < 1)
    throw std::invalid_argument("simulation: trials_per_cell must be >= 1");
  if (grid_lengths.empty())
    throw std::invalid_argument("simulation: grid_lengths is empty");
  if (codebook_k < 1)
    throw std::invalid_argument("simulation: codebook_k must be >= 1");
  for (std::size_t i = 0; i < grid_lengths.size(); ++i) {
    if (i > 0 && grid_lengths[i] <= grid_lengths[i - 1])
      throw std::invalid_argument(
          "simulation: grid_lengths must be strictly increasing");
    if (grid_lengths[i] < 2)
      throw std::invalid_argument("simulation: grid lengths must be >= 2");
    if (is_kl2_family(metric) && grid_lengths[i] <= dim + 2)
      throw std::invalid_argument(
          "simulation: KL2-family grid lengths must exceed dim + 2");
  }
}

std::string CorrectionSurface::descriptor() const {
  std::ostringstream os;
  os << "surface{metric=" << to_string(metric) << ",dim=" << dim
     << ",trials=" << trials_per_cell << ",seed=" << seed << "}";
  return os.str();
}

namespace detail {

SampleSource standard_normal_source() {
  return [](Rng& rng, Index rows, Index dim) {
    return rng.normal_matrix(rows, dim);
  };
}

CellMetric metric_evaluator(const SimulationConfig& cfg) {
  MetricConfig mc;
  mc.id = cfg.metric;
  mc.codebook_k = cfg.codebook_k;
  return [mc](const Matrixd& a, const Matrixd& b,
              std::uint64_t trial_seed) mutable {
    mc.seed = trial_seed;
    SegmentModel ma = build_model(a, mc);
    SegmentModel mb = build_model(b, mc);
    return metric_between(ma, mb, mc);
  };
}

SimulationResult simulate_surface_with(const SimulationConfig& cfg,
                                       const SampleSource& source,
                                       const CellMetric& metric,
                                       const SimulationProgress& progress) {
  cfg.validate();
  const Index g = static_cast<Index>(cfg.grid_lengths.size());

  struct Cell {
    Index i, j;
  };
  std::vector<Cell> cells;
  for (Index i = 0; i < g; ++i)
    for (Index j = i; j < g; ++j) cells.push_back({i, j});

  SimulationResult out;
  out.surface.metric = cfg.metric;
  out.surface.dim = cfg.dim;
  out.surface.grid_lengths = cfg.grid_lengths;
  out.surface.trials_per_cell = cfg.trials_per_cell;
  out.surface.seed = cfg.seed;
  if (!is_kl2_family(cfg.metric)) out.surface.codebook_k = cfg.codebook_k;
  out.surface.values.setZero(g, g);
  out.std_errors.setZero(g, g);
  out.failures.setZero(g, g);

  std::vector<std::string> cell_errors(cells.size());
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  parallel_for(cells.size(), cfg.jobs, [&](std::size_t c) {
    const Index i = cells[c].i;
    const Index j = cells[c].j;
    const Index len_a = cfg.grid_lengths[static_cast<std::size_t>(i)];
    const Index len_b = cfg.grid_lengths[static_cast<std::size_t>(j)];
    double sum = 0.0, sumsq = 0.0;
    int ok = 0, failed = 0;
    std::string first_error;
    for (int t = 0; t < cfg.trials_per_cell; ++t) {
      const std::uint64_t sub = derive_seed(
          cfg.seed, static_cast<std::uint64_t>(i),
          static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(t));
      Rng rng(sub);
      Matrixd a = source(rng, len_a, cfg.dim);
      Matrixd b = source(rng, len_b, cfg.dim);
      try {
        double v = metric(a, b, sub);
        sum += v;
        sumsq += v * v;
        ++ok;
      } catch (const Error& e) {
        ++failed;
        if (first_error.empty()) first_error = e.what();
      }
    }
    out.failures(i, j) = failed;
    if (failed * 10 > cfg.trials_per_cell) {
      std::ostringstream os;
      os << "cell (" << len_a << "," << len_b << "): " << failed << "/"
         << cfg.trials_per_cell << " trials failed";
      if (!first_error.empty()) os << " (first: " << first_error << ")";
      cell_errors[c] = os.str();
      return;
    }
    const double mean = sum / ok;
    out.surface.values(i, j) = mean;
    if (ok > 1) {
      double var = (sumsq - sum * sum / ok) / (ok - 1);
      out.std_errors(i, j) = std::sqrt(std::max(var, 0.0) / ok);
    }
    if (progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      progress(done.fetch_add(1) + 1, cells.size(), len_a, len_b);
    }
  });

  for (const auto& err : cell_errors)
    if (!err.empty()) throw MetricFailure("simulate_surface: " + err);

  // mirror the upper triangle
  for (Index i = 0; i < g; ++i)
    for (Index j = 0; j < i; ++j) {
      out.surface.values(i, j) = out.surface.values(j, i);
      out.std_errors(i, j) = out.std_errors(j, i);
      out.failures(i, j) = out.failures(j, i);
    }
  out.surface.created_at = utc_timestamp();
  return out;
}

}  // namespace detail

SimulationResult simulate_surface(const SimulationConfig& cfg,
                                  const SimulationProgress& progress) {
  return detail::simulate_surface_with(cfg, detail::standard_normal_source(),
                                       detail::metric_evaluator(cfg), progress);
}

double lookup(const CorrectionSurface& s, double n, double m) {
  const auto& grid = s.grid_lengths;
  if (grid.empty() || s.values.rows() != static_cast<Index>(grid.size()))
    throw DegenerateSurface("lookup: surface has no grid");

  auto locate = [&grid](double x, Index* idx, double* frac) {
    const double lo = static_cast<double>(grid.front());
    const double hi = static_cast<double>(grid.back());
    x = std::clamp(x, lo, hi);
    if (grid.size() == 1) {
      *idx = 0;
      *frac = 0.0;
      return;
    }
    std::size_t i = 0;
    while (i + 2 < grid.size() && x >= static_cast<double>(grid[i + 1])) ++i;
    const double la = std::log(static_cast<double>(grid[i]));
    const double lb = std::log(static_cast<double>(grid[i + 1]));
    *idx = static_cast<Index>(i);
    *frac = (std::log(x) - la) / (lb - la);
  };

  Index i, j;
  double t, u;
  locate(n, &i, &t);
  locate(m, &j, &u);
  const Index i1 = std::min<Index>(i + 1, s.values.rows() - 1);
  const Index j1 = std::min<Index>(j + 1, s.values.cols() - 1);
  return (1 - t) * (1 - u) * s.values(i, j) + t * (1 - u) * s.values(i1, j) +
         (1 - t) * u * s.values(i, j1) + t * u * s.values(i1, j1);
}

double corrected_distance(double raw, const CorrectionSurface& s, double n,
                          double m) {
  if (!std::isfinite(raw))
    throw std::invalid_argument("corrected_distance: raw value not finite");
  const double denom = lookup(s, n, m);
  if (!(denom > 0.0))
    throw DegenerateSurface("corrected_distance: simulated value <= 0 at (" +
                            std::to_string(n) + "," + std::to_string(m) + ")");
  return raw / denom;
}

void save_surface(const CorrectionSurface& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("save_surface: cannot open " + path.string());
  out << "{\n";
  out << "  \"format_version\": 1,\n";
  out << "  \"metric_id\": \"" << to_string(s.metric) << "\",\n";
  out << "  \"dim\": " << s.dim << ",\n";
  out << "  \"grid_lengths\": [";
  for (std::size_t i = 0; i < s.grid_lengths.size(); ++i)
    out << (i ? ", " : "") << s.grid_lengths[i];
  out << "],\n";
  out << "  \"trials_per_cell\": " << s.trials_per_cell << ",\n";
  out << "  \"seed\": " << s.seed << ",\n";
  if (s.codebook_k) out << "  \"codebook_k\": " << *s.codebook_k << ",\n";
  out << "  \"created_at\": \"" << s.created_at << "\",\n";
  out << "  \"values\": [";
  char buf[40];
  for (Index r = 0; r < s.values.rows(); ++r) {
    for (Index c = 0; c < s.values.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.16e", s.values(r, c));
      out << ((r == 0 && c == 0) ? "" : ", ") << buf;
    }
  }
  out << "]\n}\n";
  if (!out) throw IoFailure("save_surface: write failed for " + path.string());
}

CorrectionSurface load_surface(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("load_surface: cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile("load_surface: " + path.string() + ": " + e.what());
  }

  auto require = [&doc, &path](const char* key) -> const nlohmann::json& {
    if (!doc.contains(key))
      throw SchemaMismatch("load_surface: " + path.string() +
                           ": missing field '" + key + "'");
    return doc.at(key);
  };

  CorrectionSurface s;
  try {
    if (require("format_version").get<int>() != 1)
      throw SchemaMismatch("load_surface: unsupported format_version");
    s.metric = parse_metric(require("metric_id").get<std::string>());
    s.dim = require("dim").get<Index>();
    s.grid_lengths = require("grid_lengths").get<std::vector<Index>>();
    s.trials_per_cell = require("trials_per_cell").get<int>();
    s.seed = require("seed").get<std::uint64_t>();
    s.created_at = require("created_at").get<std::string>();
    if (doc.contains("codebook_k")) s.codebook_k = doc["codebook_k"].get<Index>();
    auto values = require("values").get<std::vector<double>>();
    const auto g = s.grid_lengths.size();
    if (values.size() != g * g)
      throw SchemaMismatch("load_surface: values has " +
                           std::to_string(values.size()) +
                           " entries, expected " + std::to_string(g * g));
    s.values.resize(static_cast<Index>(g), static_cast<Index>(g));
    for (std::size_t r = 0; r < g; ++r)
      for (std::size_t c = 0; c < g; ++c)
        s.values(static_cast<Index>(r), static_cast<Index>(c)) =
            values[r * g + c];
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch("load_surface: " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaMismatch("load_surface: " + path.string() + ": " + e.what());
  }

  if (s.grid_lengths.empty())
    throw CorruptFile("load_surface: empty grid in " + path.string());
  for (std::size_t i = 1; i < s.grid_lengths.size(); ++i)
    if (s.grid_lengths[i] <= s.grid_lengths[i - 1])
      throw CorruptFile("load_surface: grid_lengths not strictly increasing");
  for (Index r = 0; r < s.values.rows(); ++r)
    for (Index c = 0; c < s.values.cols(); ++c) {
      const double v = s.values(r, c);
      if (!std::isfinite(v) || v <= 0.0)
        throw CorruptFile("load_surface: non-positive value at (" +
                          std::to_string(r) + "," + std::to_string(c) + ")");
      if (std::abs(v - s.values(c, r)) > 1e-9 * std::max(1.0, std::abs(v)))
        throw CorruptFile("load_surface: values not symmetric");
    }
  return s;
}

}  // namespace spk
