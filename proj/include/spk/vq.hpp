// include/spk/vq.hpp

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

#ifndef SPK_VQ_HPP
#define SPK_VQ_HPP

#include "spk/error.hpp"
#include "spk/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace spk {

/// Weighted-centroid density estimate of one segment.
template <typename Scalar>
struct Codebook {
  MatrixX<Scalar> centroids;  // K x d
  VectorX<Scalar> weights;    // K entries, nonnegative, summing to 1
  Index trained_on = 0;       // sample count of the source matrix
  std::uint64_t seed = 0;     // recorded for reproducibility

  Index size() const { return centroids.rows(); }
  Index dim() const { return centroids.cols(); }
};

using Codebookd = Codebook<double>;

/// Per-phase Lloyd distortion log (one inner vector per split phase);
/// within a phase the sequence never increases.
using TrainTrace = std::vector<std::vector<double>>;

namespace detail {

template <typename Scalar>
Index nearest_centroid(const MatrixX<Scalar>& centroids,
                       const Eigen::Ref<const VectorX<Scalar>>& x,
                       Scalar* dist2_out = nullptr) {
  Index best = 0;
  Scalar best_d2 = (centroids.row(0).transpose() - x).squaredNorm();
  for (Index j = 1; j < centroids.rows(); ++j) {
    Scalar d2 = (centroids.row(j).transpose() - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  if (dist2_out) *dist2_out = best_d2;
  return best;
}

template <typename Scalar>
Index count_distinct_rows(const MatrixX<Scalar>& m) {
  std::vector<Index> order(static_cast<std::size_t>(m.rows()));
  std::iota(order.begin(), order.end(), Index(0));
  auto row_less = [&m](Index a, Index b) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(a, j) < m(b, j)) return true;
      if (m(a, j) > m(b, j)) return false;
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  Index distinct = m.rows() > 0 ? 1 : 0;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (row_less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

}  // namespace detail

/// LBG codebook training: binary splitting from the global mean, Lloyd
/// iterations to convergence per phase. Deterministic for a fixed seed
/// (the procedure itself uses no randomness; the seed is recorded).
/// The effective size is min(k, number of distinct rows).
template <typename Derived>
Codebook<typename Derived::Scalar> train_codebook(
    const Eigen::MatrixBase<Derived>& samples_in, Index k, std::uint64_t seed,
    TrainTrace* trace = nullptr) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> samples = samples_in;
  const Index n = samples.rows();
  const Index d = samples.cols();
  if (n == 0) throw EmptyInput("train_codebook: no samples");
  if (k < 1) throw std::invalid_argument("train_codebook: k must be >= 1");

  const Index target = std::min<Index>(k, detail::count_distinct_rows(samples));

  // split offset: 1e-3 of the per-dimension standard deviation
  VectorX<Scalar> mean = samples.colwise().mean().transpose();
  VectorX<Scalar> sdev =
      ((samples.rowwise() - mean.transpose()).array().square().colwise().sum() /
       static_cast<Scalar>(n))
          .sqrt()
          .transpose();
  const VectorX<Scalar> offset = Scalar(1e-3) * sdev;

  MatrixX<Scalar> centroids = mean.transpose();
  std::vector<Index> assign(static_cast<std::size_t>(n), 0);

  auto assign_all = [&]() -> Scalar {
    Scalar total = 0;
    for (Index r = 0; r < n; ++r) {
      Scalar d2;
      assign[static_cast<std::size_t>(r)] =
          detail::nearest_centroid<Scalar>(centroids, samples.row(r).transpose(), &d2);
      total += d2;
    }
    return total;
  };

  auto cell_distortions = [&]() {
    std::vector<Scalar> per(static_cast<std::size_t>(centroids.rows()), Scalar(0));
    for (Index r = 0; r < n; ++r) {
      Index c = assign[static_cast<std::size_t>(r)];
      per[static_cast<std::size_t>(c)] +=
          (centroids.row(c) - samples.row(r)).squaredNorm();
    }
    return per;
  };

  // Replaces each empty cell's centroid by the farthest sample of the
  // highest-distortion cell; reassignment can only lower the cost, which
  // keeps the per-phase distortion log monotone.
  auto resolve_empty_cells = [&]() {
    for (Index guard = 0; guard < centroids.rows(); ++guard) {
      std::vector<Index> counts(static_cast<std::size_t>(centroids.rows()), 0);
      for (Index r = 0; r < n; ++r) ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(r)])];
      Index empty = -1;
      for (Index c = 0; c < centroids.rows(); ++c)
        if (counts[static_cast<std::size_t>(c)] == 0) {
          empty = c;
          break;
        }
      if (empty < 0) return;
      auto per = cell_distortions();
      Index donor = static_cast<Index>(std::distance(
          per.begin(), std::max_element(per.begin(), per.end())));
      if (!(per[static_cast<std::size_t>(donor)] > Scalar(0))) return;
      Index far_row = -1;
      Scalar far_d2 = Scalar(-1);
      for (Index r = 0; r < n; ++r) {
        if (assign[static_cast<std::size_t>(r)] != donor) continue;
        Scalar d2 = (centroids.row(donor) - samples.row(r)).squaredNorm();
        if (d2 > far_d2) {
          far_d2 = d2;
          far_row = r;
        }
      }
      centroids.row(empty) = samples.row(far_row);
      assign_all();
    }
  };

  auto lloyd_phase = [&]() {
    std::vector<double> log;
    Scalar prev = std::numeric_limits<Scalar>::infinity();
    for (int iter = 0; iter < 50; ++iter) {
      assign_all();
      resolve_empty_cells();
      // move centroids to cell means
      MatrixX<Scalar> sums = MatrixX<Scalar>::Zero(centroids.rows(), d);
      std::vector<Index> counts(static_cast<std::size_t>(centroids.rows()), 0);
      for (Index r = 0; r < n; ++r) {
        Index c = assign[static_cast<std::size_t>(r)];
        sums.row(c) += samples.row(r);
        ++counts[static_cast<std::size_t>(c)];
      }
      for (Index c = 0; c < centroids.rows(); ++c)
        if (counts[static_cast<std::size_t>(c)] > 0)
          centroids.row(c) =
              sums.row(c) / static_cast<Scalar>(counts[static_cast<std::size_t>(c)]);
      Scalar dist = 0;
      for (Index r = 0; r < n; ++r)
        dist += (centroids.row(assign[static_cast<std::size_t>(r)]) - samples.row(r))
                    .squaredNorm();
      log.push_back(static_cast<double>(dist));
      if (dist == Scalar(0)) break;
      if (std::isfinite(static_cast<double>(prev)) && prev > Scalar(0) &&
          (prev - dist) / prev < Scalar(1e-6))
        break;
      prev = dist;
    }
    if (trace) trace->push_back(std::move(log));
  };

  lloyd_phase();
  while (centroids.rows() < target) {
    const Index nsplit = std::min<Index>(centroids.rows(), target - centroids.rows());
    assign_all();
    auto per = cell_distortions();
    std::vector<Index> order(per.size());
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&per](Index a, Index b) {
      return per[static_cast<std::size_t>(a)] > per[static_cast<std::size_t>(b)];
    });
    MatrixX<Scalar> grown(centroids.rows() + nsplit, d);
    grown.topRows(centroids.rows()) = centroids;
    for (Index s = 0; s < nsplit; ++s) {
      Index c = order[static_cast<std::size_t>(s)];
      grown.row(centroids.rows() + s) = centroids.row(c) + offset.transpose();
      grown.row(c) -= offset.transpose();
    }
    centroids = std::move(grown);
    lloyd_phase();
  }

  Scalar final_cost = assign_all();
  (void)final_cost;
  Codebook<Scalar> cb;
  cb.centroids = std::move(centroids);
  cb.weights = VectorX<Scalar>::Zero(cb.centroids.rows());
  for (Index r = 0; r < n; ++r) cb.weights(assign[static_cast<std::size_t>(r)]) += Scalar(1);
  cb.weights /= static_cast<Scalar>(n);
  cb.trained_on = n;
  cb.seed = seed;
  return cb;
}

inline Codebookd train_codebook(const FeatureMatrix& m, Index k,
                                std::uint64_t seed, TrainTrace* trace = nullptr) {
  return train_codebook(m.values, k, seed, trace);
}

/// Average quantization distortion: mean over rows of the squared distance
/// to the nearest centroid. The division by the row count is what makes the
/// score insensitive to the query segment's length.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Scalar aqd(const Eigen::MatrixBase<Derived>& x, const Codebook<Scalar>& c) {
  if (x.rows() == 0) throw EmptyInput("aqd: no rows");
  if (c.size() == 0) throw EmptyInput("aqd: empty codebook");
  if (x.cols() != c.dim()) throw DimensionMismatch("aqd: dimension mismatch");
  const MatrixX<Scalar> rows = x;
  Scalar total = 0;
  for (Index r = 0; r < rows.rows(); ++r) {
    Scalar d2;
    detail::nearest_centroid<Scalar>(c.centroids, rows.row(r).transpose(), &d2);
    total += d2;
  }
  return total / static_cast<Scalar>(rows.rows());
}

template <typename Scalar>
Scalar aqd(const FeatureMatrix& m, const Codebook<Scalar>& c) {
  return aqd(m.values, c);
}

/// Symmetrized codebook divergence: each centroid is matched to the other
/// book's nearest centroid and charged half the squared distance plus the
/// log weight ratio, weighted by its own occupancy.
template <typename Scalar>
Scalar vq_distance(const Codebook<Scalar>& a, const Codebook<Scalar>& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("vq_distance: dimension mismatch");
  constexpr Scalar weight_floor = Scalar(1e-12);
  auto directed = [&](const Codebook<Scalar>& p, const Codebook<Scalar>& q) {
    Scalar total = 0;
    for (Index i = 0; i < p.size(); ++i) {
      Scalar d2;
      Index j = detail::nearest_centroid<Scalar>(q.centroids,
                                                 p.centroids.row(i).transpose(), &d2);
      Scalar wp = std::max(p.weights(i), weight_floor);
      Scalar wq = std::max(q.weights(j), weight_floor);
      total += p.weights(i) * (d2 / Scalar(2) + std::log(wp / wq));
    }
    return total;
  };
  return directed(a, b) + directed(b, a);
}

/// Symmetrized AQD between two feature sets: each side is scored against a
/// codebook trained on the other side.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar aqd_distance(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b,
                                       Index k, std::uint64_t seed) {
  using Scalar = typename DerivedA::Scalar;
  if (a.cols() != b.cols())
    throw DimensionMismatch("aqd_distance: dimension mismatch");
  if (a.rows() == 0 || b.rows() == 0)
    throw EmptyInput("aqd_distance: empty feature set");
  Codebook<Scalar> ca = train_codebook(a, k, seed);
  Codebook<Scalar> cb = train_codebook(b, k, seed);
  return (aqd(a, cb) + aqd(b, ca)) / Scalar(2);
}

inline double aqd_distance(const FeatureMatrix& a, const FeatureMatrix& b,
                           Index k, std::uint64_t seed) {
  return aqd_distance(a.values, b.values, k, seed);
}

}  // namespace spk

#endif  // SPK_VQ_HPP
