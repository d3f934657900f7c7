// tests/test_features_io.cpp

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
#include "spk/features_io.hpp"
#include "spk/rng.hpp"

#include "support/test_helpers.hpp"

#include <doctest.h>

#include <fstream>

using namespace spk;
using test::TempDir;

TEST_CASE("feature file round-trip preserves shape and values") {
  TempDir dir;
  Rng rng(11);
  FeatureMatrix m;
  m.segment_id = "roundtrip";
  m.values = 100.0 * rng.normal_matrix(98, 13);
  const auto path = dir / "m.csv";
  write_features(m, path);
  FeatureMatrix back = read_features(path);
  REQUIRE(back.rows() == 98);
  REQUIRE(back.dim() == 13);
  CHECK(back.segment_id == "roundtrip");
  CHECK((back.values - m.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("feature file with a single zero row") {
  TempDir dir;
  const auto path = dir / "zeros.csv";
  std::ofstream(path) << "0,0,0,0,0,0,0,0,0,0,0,0,0\n";
  FeatureMatrix m = read_features(path);
  CHECK(m.rows() == 1);
  CHECK(m.dim() == 13);
  CHECK(m.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.segment_id == "zeros");  // falls back to the file stem
}

TEST_CASE("ragged rows are rejected") {
  TempDir dir;
  const auto path = dir / "ragged.csv";
  std::ofstream(path) << "1,2,3,4,5,6,7,8,9,10,11,12,13\n"
                      << "1,2,3,4,5,6,7,8,9,10,11,12\n";
  CHECK_THROWS_AS(read_features(path), MalformedRow);
}

TEST_CASE("non-finite values are rejected") {
  TempDir dir;
  const auto path = dir / "nan.csv";
  std::ofstream(path) << "1,2\n3,nan\n";
  CHECK_THROWS_AS(read_features(path), NonFiniteValue);

  FeatureMatrix m;
  m.segment_id = "bad";
  m.values.setConstant(2, 2, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(write_features(m, dir / "inf.csv"), NonFiniteValue);
}

TEST_CASE("unparseable fields and empty files are malformed") {
  TempDir dir;
  const auto path = dir / "junk.csv";
  std::ofstream(path) << "1,2\n3,abc\n";
  CHECK_THROWS_AS(read_features(path), MalformedRow);

  const auto empty = dir / "empty.csv";
  std::ofstream(empty) << "# segment_id=nothing\n";
  CHECK_THROWS_AS(read_features(empty), MalformedRow);

  CHECK_THROWS_AS(read_features(dir / "missing.csv"), FileNotFound);
}

TEST_CASE("metadata comments are optional and parsed when present") {
  TempDir dir;
  const auto path = dir / "meta.csv";
  std::ofstream(path) << "# segment_id=custom_name\n"
                      << "# sample_rate=16000\n"
                      << "# not a key-value comment\n"
                      << "1.5,2.5\n";
  FeatureMatrix m = read_features(path);
  CHECK(m.segment_id == "custom_name");
  CHECK(m.dim() == 2);
}
