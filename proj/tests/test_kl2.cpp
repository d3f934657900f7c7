// tests/test_kl2.cpp

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
#include "spk/kl2.hpp"
#include "spk/rng.hpp"

#include "support/test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace spk;

namespace {

SegmentStatsd diag_stats(std::initializer_list<double> diag,
                         std::initializer_list<double> mean = {}) {
  SegmentStatsd s;
  Vectord d{diag};
  s.covariance = d.asDiagonal();
  s.mean = mean.size() ? Vectord{mean} : Vectord::Zero(d.size());
  s.count = 100;
  return s;
}

}  // namespace

TEST_CASE("trace_term: equal covariances give d") {
  Rng rng(1);
  SegmentStatsd a = test::random_stats(rng, 5);
  SegmentStatsd b = a;
  CHECK(trace_term(a, b) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("trace_term: hand-evaluated diagonal case") {
  SegmentStatsd a = diag_stats({1.0, 2.0});
  SegmentStatsd b = diag_stats({2.0, 1.0});
  CHECK(trace_term(a, b) == doctest::Approx(2.5));
}

TEST_CASE("trace_term: inverse-Wishart expectation oracle (small d)") {
  // E[tr(S_B^-1 S_A)] = d (m-1) / (m - d - 2) for unbiased sample
  // covariances of N(0, I_d), with m = |B|
  const Index d = 3;
  const Index n_a = 50, m_b = 30;
  const double oracle = double(d) * double(m_b - 1) / double(m_b - d - 2);
  Rng rng(42);
  double sum = 0.0;
  const int trials = 3000;
  for (int t = 0; t < trials; ++t) {
    SegmentStatsd sa = compute_stats(rng.normal_matrix(n_a, d));
    SegmentStatsd sb = compute_stats(rng.normal_matrix(m_b, d));
    sum += trace_term(sa, sb);
  }
  CHECK(sum / trials == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("covariance_term: zero for equal covariances, hand value otherwise") {
  Rng rng(2);
  SegmentStatsd a = test::random_stats(rng, 4);
  SegmentStatsd b = a;
  CHECK(covariance_term(a, b) == doctest::Approx(0.0).epsilon(1e-10));

  SegmentStatsd p = diag_stats({1.0, 2.0});
  SegmentStatsd q = diag_stats({2.0, 1.0});
  CHECK(covariance_term(p, q) == doctest::Approx(0.5));
  CHECK(covariance_term(p, q) == doctest::Approx(covariance_term(q, p)));
}

TEST_CASE("mean_term: hand-evaluated cases") {
  SegmentStatsd a = diag_stats({1.0}, {0.0});
  SegmentStatsd b = diag_stats({1.0}, {1.0});
  CHECK(mean_term(a, b) == doctest::Approx(2.0));
  CHECK(mean_term(a, a) == doctest::Approx(0.0));

  SegmentStatsd p = diag_stats({1.0, 2.0}, {0.0, 0.0});
  SegmentStatsd q = diag_stats({1.0, 2.0}, {1.0, 1.0});
  CHECK(mean_term(p, q) == doctest::Approx(3.0));
}

TEST_CASE("kl2: hand-evaluated cases") {
  SegmentStatsd a1 = diag_stats({1.0}, {0.0});
  SegmentStatsd b1 = diag_stats({1.0}, {1.0});
  CHECK(kl2(a1, b1) == doctest::Approx(2.0));

  SegmentStatsd a2 = diag_stats({1.0, 2.0});
  SegmentStatsd b2 = diag_stats({2.0, 1.0});
  CHECK(kl2(a2, b2) == doctest::Approx(0.5));

  Rng rng(3);
  SegmentStatsd s = test::random_stats(rng, 7);
  CHECK(kl2(s, s) <= 1e-9);
}

TEST_CASE("kl2: symmetry and decomposition on random stats") {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    SegmentStatsd a = test::random_stats(rng, 6);
    SegmentStatsd b = test::random_stats(rng, 6);
    const double ab = kl2(a, b);
    const double ba = kl2(b, a);
    CHECK(std::abs(ab - ba) <= 1e-9 * std::max(1.0, std::abs(ab)));
    CHECK(ab == doctest::Approx(covariance_term(a, b) + mean_term(a, b)));
    CHECK(ab >= kl2_no_mean(a, b));  // mean term is nonnegative
    CHECK(mean_term(a, b) >= 0.0);
  }
}

TEST_CASE("kl2_no_mean: equals the covariance term, ignores means") {
  SegmentStatsd a = diag_stats({1.0, 2.0}, {0.0, 0.0});
  SegmentStatsd b = diag_stats({2.0, 1.0}, {5.0, 5.0});
  CHECK(kl2_no_mean(a, b) == covariance_term(a, b));
  CHECK(kl2_no_mean(a, b) == doctest::Approx(0.5));

  SegmentStatsd c = diag_stats({1.0, 2.0}, {3.0, 3.0});
  SegmentStatsd d = diag_stats({2.0, 1.0}, {3.0, 3.0});
  CHECK(kl2_no_mean(c, d) == doctest::Approx(kl2(c, d)));  // equal means
}

TEST_CASE("kl2: affine invariance") {
  Rng rng(6);
  const Index d = 5;
  Matrixd x = rng.normal_matrix(80, d);
  Matrixd y = 1.5 * rng.normal_matrix(120, d);
  Matrixd l = test::random_spd(rng, d, 0.7, 1.8);
  Vectord b = 3.0 * rng.normal_vector(d);

  auto transform = [&](const Matrixd& rows) {
    Matrixd out = rows * l.transpose();
    out.rowwise() += b.transpose();
    return out;
  };
  const double base = kl2(compute_stats(x), compute_stats(y));
  const double mapped = kl2(compute_stats(transform(x)), compute_stats(transform(y)));
  CHECK(std::abs(mapped - base) <= 1e-6 * std::abs(base));
}

TEST_CASE("kl2: dimension mismatch and singular input") {
  SegmentStatsd a = diag_stats({1.0, 2.0});
  SegmentStatsd b = diag_stats({1.0});
  CHECK_THROWS_AS(kl2(a, b), DimensionMismatch);
  CHECK_THROWS_AS(mean_term(a, b), DimensionMismatch);
  CHECK_THROWS_AS(covariance_term(a, b), DimensionMismatch);

  SegmentStatsd bad = diag_stats({1.0, 2.0});
  bad.covariance(0, 0) = -1.0;
  CHECK_THROWS_AS(kl2(bad, a), SingularCovariance);
}

TEST_CASE("negative-value clamping near zero") {
  CHECK(detail::clamp_nonnegative(-5e-10, "test") == 0.0);
  CHECK(detail::clamp_nonnegative(0.25, "test") == 0.25);
  CHECK_THROWS_AS(detail::clamp_nonnegative(-1e-8, "test"), NumericalAnomaly);
}

TEST_CASE("kl2: length bias direction at the sample-mean level") {
  const Index d = 13;
  Rng rng(8);
  double short_mean = 0.0, long_mean = 0.0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    short_mean += kl2(compute_stats(rng.normal_matrix(20, d)),
                      compute_stats(rng.normal_matrix(20, d)));
    long_mean += kl2(compute_stats(rng.normal_matrix(1000, d)),
                     compute_stats(rng.normal_matrix(1000, d)));
  }
  CHECK(short_mean / trials > long_mean / trials);
}

TEST_CASE("trace_term: strong |B| dependence, weak |A| dependence") {
  const Index d = 13;
  Rng rng(9);
  const int trials = 400;

  // |A| fixed at 100, |B| sweeping: more than 2x variation
  double by_b[4] = {0, 0, 0, 0};
  const Index b_lengths[4] = {20, 50, 100, 1000};
  for (int t = 0; t < trials; ++t) {
    SegmentStatsd sa = compute_stats(rng.normal_matrix(100, d));
    for (int i = 0; i < 4; ++i)
      by_b[i] += trace_term(sa, compute_stats(rng.normal_matrix(b_lengths[i], d)));
  }
  CHECK(by_b[0] / by_b[3] > 2.0);

  // |B| fixed at 100, |A| sweeping: within 5%
  double by_a[3] = {0, 0, 0};
  const Index a_lengths[3] = {30, 100, 1000};
  for (int t = 0; t < trials; ++t) {
    SegmentStatsd sb = compute_stats(rng.normal_matrix(100, d));
    for (int i = 0; i < 3; ++i)
      by_a[i] += trace_term(compute_stats(rng.normal_matrix(a_lengths[i], d)), sb);
  }
  const double lo = std::min({by_a[0], by_a[1], by_a[2]});
  const double hi = std::max({by_a[0], by_a[1], by_a[2]});
  CHECK((hi - lo) / lo < 0.05);
}
