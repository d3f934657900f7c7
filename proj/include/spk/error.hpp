// include/spk/error.hpp

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

#ifndef SPK_ERROR_HPP
#define SPK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace spk {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPK_DEFINE_ERROR(Name)            \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// audio / file decoding
SPK_DEFINE_ERROR(FileNotFound);
SPK_DEFINE_ERROR(UnsupportedFormat);
SPK_DEFINE_ERROR(CorruptHeader);
SPK_DEFINE_ERROR(InputTooShort);

// feature / surface / matrix files
SPK_DEFINE_ERROR(MalformedRow);
SPK_DEFINE_ERROR(NonFiniteValue);
SPK_DEFINE_ERROR(SchemaMismatch);
SPK_DEFINE_ERROR(CorruptFile);
SPK_DEFINE_ERROR(IoFailure);

// statistics and metrics
SPK_DEFINE_ERROR(InsufficientData);
SPK_DEFINE_ERROR(SingularCovariance);
SPK_DEFINE_ERROR(DimensionMismatch);
SPK_DEFINE_ERROR(NumericalAnomaly);
SPK_DEFINE_ERROR(EmptyInput);

// calibration / clustering / evaluation
SPK_DEFINE_ERROR(MetricFailure);
SPK_DEFINE_ERROR(DegenerateSurface);
SPK_DEFINE_ERROR(InvalidK);
SPK_DEFINE_ERROR(SubsetTooLarge);
SPK_DEFINE_ERROR(IdMismatch);

#undef SPK_DEFINE_ERROR

}  // namespace spk

#endif  // SPK_ERROR_HPP
