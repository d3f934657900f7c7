// include/spk/audio.hpp

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

#ifndef SPK_AUDIO_HPP
#define SPK_AUDIO_HPP

#include "spk/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace spk {

/// Mono audio, samples normalized to [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;
  std::string source_id;
};

/// Reads a RIFF/WAVE file. PCM 8/16/24-bit integer and 32-bit float are
/// supported; multichannel input is downmixed by channel average.
AudioBuffer load_wav(const std::filesystem::path& path);

}  // namespace spk

#endif  // SPK_AUDIO_HPP
