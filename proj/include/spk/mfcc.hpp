// include/spk/mfcc.hpp

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

#ifndef SPK_MFCC_HPP
#define SPK_MFCC_HPP

#include "spk/audio.hpp"
#include "spk/types.hpp"

namespace spk {

/// Framing and cepstrum parameters. num_ceps includes the energy
/// coefficient c0.
struct FrameConfig {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  double preemphasis = 0.97;
  int mel_filters = 26;
  int num_ceps = 13;
};

/// MFCC extraction: pre-emphasis, Hamming window, magnitude spectrum
/// (FFT size = next power of two >= frame length), triangular mel
/// filterbank from 0 Hz to Nyquist, log, DCT-II. Output has
/// floor((samples - frame_len) / hop_len) + 1 rows of cfg.num_ceps
/// coefficients, c0 first.
FeatureMatrix extract_mfcc(const AudioBuffer& audio, const FrameConfig& cfg = {});

}  // namespace spk

#endif  // SPK_MFCC_HPP
