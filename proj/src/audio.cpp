// src/audio.cpp

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

#include "spk/audio.hpp"

#include "spk/error.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace spk {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

double decode_sample(const unsigned char* p, std::uint16_t bits,
                     std::uint16_t format) {
  if (format == kFormatFloat) {
    float f;
    std::memcpy(&f, p, 4);
    return std::clamp(static_cast<double>(f), -1.0, 1.0);
  }
  switch (bits) {
    case 8:  // unsigned, midpoint 128
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16: {
      std::int16_t s = static_cast<std::int16_t>(p[0] | (p[1] << 8));
      return s / 32768.0;
    }
    case 24: {
      std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
      if (s & 0x800000) s |= ~0xFFFFFF;  // sign extend
      return s / 8388608.0;
    }
    default:
      throw UnsupportedFormat("load_wav: unsupported PCM bit depth " +
                              std::to_string(bits));
  }
}

}  // namespace

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("load_wav: cannot open " + path.string());
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0)
    throw CorruptHeader("load_wav: not a RIFF/WAVE file: " + path.string());

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const unsigned char* chunk = data.data() + pos;
    std::uint32_t chunk_size = read_u32(chunk + 4);
    std::size_t body = pos + 8;
    if (body + chunk_size > data.size())
      throw CorruptHeader("load_wav: chunk overruns file: " + path.string());
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16)
        throw CorruptHeader("load_wav: fmt chunk too small");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      sample_rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        // resolve to the sub-format GUID's leading word
        if (chunk_size < 40)
          throw CorruptHeader("load_wav: extensible fmt chunk too small");
        format = read_u16(chunk + 32);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      pcm = chunk + 8;
      pcm_bytes = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || pcm == nullptr)
    throw CorruptHeader("load_wav: missing fmt or data chunk: " + path.string());
  if (format != kFormatPcm && format != kFormatFloat)
    throw UnsupportedFormat("load_wav: non-PCM codec (format tag " +
                            std::to_string(format) + ")");
  if (format == kFormatFloat && bits != 32)
    throw UnsupportedFormat("load_wav: only 32-bit float is supported");
  if (format == kFormatPcm && bits != 8 && bits != 16 && bits != 24)
    throw UnsupportedFormat("load_wav: unsupported PCM bit depth " +
                            std::to_string(bits));
  if (channels == 0 || sample_rate == 0)
    throw CorruptHeader("load_wav: zero channels or sample rate");

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = frame_bytes == 0 ? 0 : pcm_bytes / frame_bytes;

  AudioBuffer out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.source_id = path.stem().string();
  out.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c)
      acc += decode_sample(pcm + f * frame_bytes + c * bytes_per_sample, bits,
                           format);
    out.samples[f] = acc / channels;
  }
  return out;
}

}  // namespace spk
