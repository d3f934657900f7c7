// include/spk/kl2.hpp

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

#ifndef SPK_KL2_HPP
#define SPK_KL2_HPP

#include "spk/error.hpp"
#include "spk/stats.hpp"

#include <Eigen/Cholesky>

namespace spk {

namespace detail {

template <typename Scalar>
void check_dims(const SegmentStats<Scalar>& a, const SegmentStats<Scalar>& b,
                const char* what) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(what) + ": stats have different dims");
}

// Tiny negatives produced by roundoff are clamped to zero; anything worse
// signals ill-conditioned inputs.
template <typename Scalar>
Scalar clamp_nonnegative(Scalar value, const char* what) {
  if (value >= Scalar(0)) return value;
  if (value > Scalar(-1e-9)) return Scalar(0);
  throw NumericalAnomaly(std::string(what) +
                         ": metric came out negative beyond roundoff");
}

}  // namespace detail

/// tr(sigma_b^{-1} sigma_a): the asymmetric covariance comparison whose
/// expectation depends on b's sample count but is nearly insensitive to a's.
template <typename Scalar>
Scalar trace_term(const SegmentStats<Scalar>& a, const SegmentStats<Scalar>& b) {
  detail::check_dims(a, b, "trace_term");
  Eigen::LLT<MatrixX<Scalar>> llt(b.covariance);
  if (llt.info() != Eigen::Success)
    throw SingularCovariance("trace_term: covariance not positive definite");
  return llt.solve(a.covariance).trace();
}

/// C(A,B) = 1/2 [tr(sigma_a^{-1} sigma_b) + tr(sigma_b^{-1} sigma_a)] - d
template <typename Scalar>
Scalar covariance_term(const SegmentStats<Scalar>& a,
                       const SegmentStats<Scalar>& b) {
  detail::check_dims(a, b, "covariance_term");
  return (trace_term(b, a) + trace_term(a, b)) / Scalar(2) -
         static_cast<Scalar>(a.dim());
}

/// M(A,B) = (mu_a - mu_b) (sigma_a^{-1} + sigma_b^{-1}) (mu_a - mu_b)^T
template <typename Scalar>
Scalar mean_term(const SegmentStats<Scalar>& a, const SegmentStats<Scalar>& b) {
  detail::check_dims(a, b, "mean_term");
  VectorX<Scalar> delta = a.mean - b.mean;
  Eigen::LLT<MatrixX<Scalar>> la(a.covariance);
  Eigen::LLT<MatrixX<Scalar>> lb(b.covariance);
  if (la.info() != Eigen::Success || lb.info() != Eigen::Success)
    throw SingularCovariance("mean_term: covariance not positive definite");
  return delta.dot(la.solve(delta)) + delta.dot(lb.solve(delta));
}

/// Symmetric KL distance between two Gaussian segment models.
template <typename Scalar>
Scalar kl2(const SegmentStats<Scalar>& a, const SegmentStats<Scalar>& b) {
  return detail::clamp_nonnegative(covariance_term(a, b) + mean_term(a, b),
                                   "kl2");
}

/// KL2 with the mean term dropped; equals covariance_term exactly.
template <typename Scalar>
Scalar kl2_no_mean(const SegmentStats<Scalar>& a,
                   const SegmentStats<Scalar>& b) {
  return covariance_term(a, b);
}

}  // namespace spk

#endif  // SPK_KL2_HPP
