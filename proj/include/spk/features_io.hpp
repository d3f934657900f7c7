// include/spk/features_io.hpp

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

#ifndef SPK_FEATURES_IO_HPP
#define SPK_FEATURES_IO_HPP

#include "spk/types.hpp"

#include <filesystem>

namespace spk {

/// Extra '#' key=value metadata carried by feature files.
struct FeatureFileInfo {
  int sample_rate = 0;  // emitted when > 0
  double hop_ms = 0.0;  // emitted when > 0
};

/// Feature CSV: optional '#' key=value comment lines, then one row per
/// frame with comma-separated decimal fields. Dimension is inferred from
/// the column count.
FeatureMatrix read_features(const std::filesystem::path& path);
void write_features(const FeatureMatrix& m, const std::filesystem::path& path,
                    const FeatureFileInfo& info = {});

}  // namespace spk

#endif  // SPK_FEATURES_IO_HPP
