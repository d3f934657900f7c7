// tests/test_stats.cpp

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

#include "spk/error.hpp"
#include "spk/rng.hpp"
#include "spk/stats.hpp"

#include "support/test_helpers.hpp"

#include <doctest.h>

using namespace spk;

TEST_CASE("compute_stats: hand-evaluated 2-d example") {
  Matrixd rows(4, 2);
  rows << 0, 0, 2, 0, 0, 2, 2, 2;
  SegmentStatsd s = compute_stats(rows);
  CHECK(s.count == 4);
  CHECK_FALSE(s.regularized);
  CHECK(s.mean(0) == doctest::Approx(1.0));
  CHECK(s.mean(1) == doctest::Approx(1.0));
  CHECK(s.covariance(0, 0) == doctest::Approx(4.0 / 3.0));
  CHECK(s.covariance(1, 1) == doctest::Approx(4.0 / 3.0));
  CHECK(s.covariance(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("compute_stats: identical rows trigger the ridge") {
  Matrixd rows(2, 3);
  rows << 1, 2, 3, 1, 2, 3;
  SegmentStatsd s = compute_stats(rows);
  CHECK(s.regularized);
  // zero sample covariance -> ridge is epsilon_scale on the diagonal
  CHECK(s.covariance(0, 0) == doctest::Approx(1e-6));
  CHECK_NOTHROW(precision(s));

  Matrixd zeros = Matrixd::Zero(5, 2);
  SegmentStatsd z = compute_stats(zeros);
  CHECK(z.regularized);
  CHECK(z.covariance(0, 0) == doctest::Approx(1e-6));
}

TEST_CASE("compute_stats: preconditions") {
  Matrixd one_row(1, 3);
  one_row << 1, 2, 3;
  CHECK_THROWS_AS(compute_stats(one_row), InsufficientData);

  Matrixd nan_rows(2, 2);
  nan_rows << 1, 2, std::numeric_limits<double>::quiet_NaN(), 4;
  CHECK_THROWS_AS(compute_stats(nan_rows), NonFiniteValue);
}

TEST_CASE("compute_stats: covariance is exactly symmetric") {
  Rng rng(21);
  Matrixd rows = rng.normal_matrix(40, 6);
  SegmentStatsd s = compute_stats(rows);
  CHECK((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("precision: identity and diagonal cases") {
  SegmentStatsd s;
  s.mean = Vectord::Zero(3);
  s.covariance = Matrixd::Identity(3, 3);
  s.count = 10;
  CHECK((precision(s) - Matrixd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  s.mean = Vectord::Zero(2);
  s.covariance = Vectord{{2.0, 4.0}}.asDiagonal();
  Matrixd p = precision(s);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(1, 1) == doctest::Approx(0.25));
  CHECK(p(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("precision: multiply-back oracle on random SPD covariances") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    SegmentStatsd s = test::random_stats(rng, 13);
    Matrixd p = precision(s);
    Matrixd should_be_identity = s.covariance * p;
    CHECK((should_be_identity - Matrixd::Identity(13, 13)).cwiseAbs().maxCoeff() <
          1e-8);
  }
}

TEST_CASE("precision: non-positive-definite covariance is rejected") {
  SegmentStatsd s;
  s.mean = Vectord::Zero(2);
  s.covariance.resize(2, 2);
  s.covariance << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  s.count = 10;
  CHECK_THROWS_AS(precision(s), SingularCovariance);
}

TEST_CASE("compute_stats: regularization is rare at n = 2d") {
  const Index d = 13;
  Rng rng(31);
  const Matrixd transform = test::random_spd(rng, d, 0.5, 2.0);
  int regularized = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    Matrixd rows = rng.normal_matrix(2 * d, d) * transform;
    if (compute_stats(rows).regularized) ++regularized;
  }
  CHECK(regularized < trials / 100);  // < 1%
}

TEST_CASE("compute_stats: affine equivariance") {
  Rng rng(17);
  const Index d = 6;
  Matrixd rows = rng.normal_matrix(60, d);
  Matrixd l = test::random_spd(rng, d, 0.8, 1.6);  // invertible
  Vectord b = rng.normal_vector(d);

  SegmentStatsd base = compute_stats(rows);
  Matrixd mapped_rows = rows * l.transpose();
  mapped_rows.rowwise() += b.transpose();
  SegmentStatsd mapped = compute_stats(mapped_rows);

  Vectord expected_mean = l * base.mean + b;
  Matrixd expected_cov = l * base.covariance * l.transpose();
  CHECK((mapped.mean - expected_mean).norm() <= 1e-9 * expected_mean.norm());
  CHECK((mapped.covariance - expected_cov).norm() <= 1e-9 * expected_cov.norm());
}

TEST_CASE("stats are scalar-generic") {
  MatrixX<float> rows(4, 2);
  rows << 0.f, 0.f, 2.f, 0.f, 0.f, 2.f, 2.f, 2.f;
  SegmentStats<float> s = compute_stats(rows);
  CHECK(s.covariance(0, 0) == doctest::Approx(4.f / 3.f));
}
