// include/spk/stats.hpp

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

#ifndef SPK_STATS_HPP
#define SPK_STATS_HPP

#include "spk/error.hpp"
#include "spk/types.hpp"

#include <Eigen/Cholesky>

#include <sstream>

namespace spk {

/// Gaussian sufficient statistics of one segment: sample mean, unbiased
/// sample covariance (divisor n-1) and the sample count behind them.
template <typename Scalar>
struct SegmentStats {
  VectorX<Scalar> mean;
  MatrixX<Scalar> covariance;
  Index count = 0;
  bool regularized = false;

  Index dim() const { return mean.size(); }
};

using SegmentStatsd = SegmentStats<double>;

/// Ridge policy for near-singular sample covariances.
struct RegularizationPolicy {
  double epsilon_scale = 1e-6;    // relative ridge weight
  double condition_limit = 1e10;  // max acceptable condition estimate
};

namespace detail {

// Condition proxy: ratio of largest to smallest pivot of the LDLT
// factorization. Returns false when the matrix is not positive definite.
template <typename Scalar>
bool spd_condition(const MatrixX<Scalar>& m, Scalar* condition) {
  Eigen::LDLT<MatrixX<Scalar>> ldlt(m);
  if (ldlt.info() != Eigen::Success) return false;
  VectorX<Scalar> d = ldlt.vectorD();
  Scalar lo = d.minCoeff();
  Scalar hi = d.maxCoeff();
  if (!(lo > Scalar(0))) return false;
  *condition = hi / lo;
  return true;
}

}  // namespace detail

/// Sample mean and covariance of `samples` (one observation per row),
/// with the policy's ridge applied when the covariance is singular or its
/// condition estimate exceeds the policy limit.
template <typename Derived>
SegmentStats<typename Derived::Scalar> compute_stats(
    const Eigen::MatrixBase<Derived>& samples,
    const RegularizationPolicy& policy = {}) {
  using Scalar = typename Derived::Scalar;
  const Index n = samples.rows();
  const Index d = samples.cols();
  if (n < 2) {
    std::ostringstream os;
    os << "compute_stats: need at least 2 rows, got " << n;
    throw InsufficientData(os.str());
  }
  if (!samples.allFinite())
    throw NonFiniteValue("compute_stats: input contains non-finite values");

  SegmentStats<Scalar> out;
  out.count = n;
  out.mean = samples.colwise().mean().transpose();
  MatrixX<Scalar> centered = samples.rowwise() - out.mean.transpose();
  MatrixX<Scalar> cov =
      (centered.adjoint() * centered) / static_cast<Scalar>(n - 1);
  cov = ((cov + cov.transpose()) / Scalar(2)).eval();

  Scalar condition = Scalar(0);
  bool spd = detail::spd_condition(cov, &condition);
  if (!spd || condition > static_cast<Scalar>(policy.condition_limit)) {
    Scalar tr = cov.trace();
    Scalar eps = tr > Scalar(0)
                     ? static_cast<Scalar>(policy.epsilon_scale) * tr /
                           static_cast<Scalar>(d)
                     : static_cast<Scalar>(policy.epsilon_scale);
    cov += eps * MatrixX<Scalar>::Identity(d, d);
    out.regularized = true;
  }
  out.covariance = std::move(cov);
  return out;
}

inline SegmentStatsd compute_stats(const FeatureMatrix& m,
                                   const RegularizationPolicy& policy = {}) {
  return compute_stats(m.values, policy);
}

/// Inverse covariance via Cholesky factorization.
template <typename Scalar>
MatrixX<Scalar> precision(const SegmentStats<Scalar>& stats) {
  Eigen::LLT<MatrixX<Scalar>> llt(stats.covariance);
  if (llt.info() != Eigen::Success)
    throw SingularCovariance(
        "precision: covariance is not positive definite");
  return llt.solve(MatrixX<Scalar>::Identity(stats.dim(), stats.dim()));
}

}  // namespace spk

#endif  // SPK_STATS_HPP
