// src/mfcc.cpp

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

#include "spk/mfcc.hpp"

#include "spk/error.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace spk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogFloor = 1e-12;  // keeps log of silent frames finite

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// M x (nfft/2 + 1) triangular filter weights, HTK mel scale, edges at
// 0 Hz and Nyquist.
Matrixd mel_filterbank(int mel_filters, Index nfft, double sample_rate) {
  const Index bins = nfft / 2 + 1;
  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(mel_filters) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(mel_hi * static_cast<double>(i) / (mel_filters + 1));

  Matrixd fb = Matrixd::Zero(mel_filters, bins);
  for (int m = 0; m < mel_filters; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double mid = edges[static_cast<std::size_t>(m) + 1];
    const double hi = edges[static_cast<std::size_t>(m) + 2];
    for (Index k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(nfft);
      if (f >= lo && f <= mid && mid > lo)
        fb(m, k) = (f - lo) / (mid - lo);
      else if (f > mid && f <= hi && hi > mid)
        fb(m, k) = (hi - f) / (hi - mid);
    }
  }
  return fb;
}

Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

FeatureMatrix extract_mfcc(const AudioBuffer& audio, const FrameConfig& cfg) {
  if (!(cfg.hop_ms > 0.0) || cfg.hop_ms > cfg.frame_ms)
    throw std::invalid_argument("extract_mfcc: need 0 < hop_ms <= frame_ms");
  if (cfg.num_ceps < 1 || cfg.num_ceps > cfg.mel_filters)
    throw std::invalid_argument("extract_mfcc: need 1 <= num_ceps <= mel_filters");
  if (cfg.preemphasis < 0.0 || cfg.preemphasis >= 1.0)
    throw std::invalid_argument("extract_mfcc: preemphasis must be in [0, 1)");
  if (audio.sample_rate <= 0)
    throw std::invalid_argument("extract_mfcc: sample_rate must be positive");

  const Index frame_len =
      static_cast<Index>(std::llround(cfg.frame_ms * audio.sample_rate / 1000.0));
  const Index hop_len =
      static_cast<Index>(std::llround(cfg.hop_ms * audio.sample_rate / 1000.0));
  if (frame_len < 1 || hop_len < 1)
    throw std::invalid_argument("extract_mfcc: frame/hop shorter than one sample");
  const Index num_samples = static_cast<Index>(audio.samples.size());
  if (num_samples < frame_len)
    throw InputTooShort("extract_mfcc: " + std::to_string(num_samples) +
                        " samples < one frame of " + std::to_string(frame_len));

  const Index rows = (num_samples - frame_len) / hop_len + 1;
  const Index nfft = next_pow2(frame_len);
  const Index bins = nfft / 2 + 1;

  // global pre-emphasis, y[0] = x[0]
  std::vector<double> emphasized(audio.samples.size());
  emphasized[0] = audio.samples[0];
  for (std::size_t i = 1; i < emphasized.size(); ++i)
    emphasized[i] = audio.samples[i] - cfg.preemphasis * audio.samples[i - 1];

  Vectord window(frame_len);
  for (Index i = 0; i < frame_len; ++i)
    window(i) =
        0.54 - 0.46 * std::cos(2.0 * kPi * i / static_cast<double>(frame_len - 1));

  const Matrixd fb =
      mel_filterbank(cfg.mel_filters, nfft, static_cast<double>(audio.sample_rate));

  // orthonormal DCT-II of the log filterbank energies
  Matrixd dct(cfg.num_ceps, cfg.mel_filters);
  for (int j = 0; j < cfg.num_ceps; ++j) {
    const double scale =
        std::sqrt((j == 0 ? 1.0 : 2.0) / static_cast<double>(cfg.mel_filters));
    for (int m = 0; m < cfg.mel_filters; ++m)
      dct(j, m) = scale * std::cos(kPi * j * (2 * m + 1) /
                                   (2.0 * static_cast<double>(cfg.mel_filters)));
  }

  Eigen::FFT<double> fft;
  std::vector<double> frame(static_cast<std::size_t>(nfft), 0.0);
  std::vector<std::complex<double>> spectrum;

  FeatureMatrix out;
  out.segment_id = audio.source_id;
  out.values.resize(rows, cfg.num_ceps);
  Vectord magnitude(bins);
  for (Index r = 0; r < rows; ++r) {
    const Index start = r * hop_len;
    for (Index i = 0; i < frame_len; ++i)
      frame[static_cast<std::size_t>(i)] =
          emphasized[static_cast<std::size_t>(start + i)] * window(i);
    std::fill(frame.begin() + frame_len, frame.end(), 0.0);
    fft.fwd(spectrum, frame);
    for (Index k = 0; k < bins; ++k)
      magnitude(k) = std::abs(spectrum[static_cast<std::size_t>(k)]);
    Vectord energies = fb * magnitude;
    for (int m = 0; m < cfg.mel_filters; ++m)
      energies(m) = std::log(std::max(energies(m), kLogFloor));
    out.values.row(r) = (dct * energies).transpose();
  }
  return out;
}

}  // namespace spk
