// include/spk/types.hpp

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

#ifndef SPK_TYPES_HPP
#define SPK_TYPES_HPP

#include <Eigen/Core>

#include <string>

namespace spk {

using Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrixd = MatrixX<double>;
using Vectord = VectorX<double>;

/// One speech segment as a sequence of feature vectors, one row per frame.
struct FeatureMatrix {
  Matrixd values;          // rows x dim
  std::string segment_id;

  Index rows() const { return values.rows(); }
  Index dim() const { return values.cols(); }
};

}  // namespace spk

#endif  // SPK_TYPES_HPP
