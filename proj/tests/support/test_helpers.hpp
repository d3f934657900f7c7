// tests/support/test_helpers.hpp

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

#ifndef SPK_TEST_HELPERS_HPP
#define SPK_TEST_HELPERS_HPP

#include "spk/rng.hpp"
#include "spk/stats.hpp"
#include "spk/types.hpp"

#include <Eigen/QR>

#include <atomic>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace spk::test {

/// Unique temporary directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("spk_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// ---- WAV fixtures -------------------------------------------------------

inline void append_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  b.push_back(v & 0xFF);
  b.push_back((v >> 8) & 0xFF);
  b.push_back((v >> 16) & 0xFF);
  b.push_back((v >> 24) & 0xFF);
}
inline void append_u16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(v & 0xFF);
  b.push_back((v >> 8) & 0xFF);
}

/// Writes a RIFF/WAVE file. channels hold interleaved-by-vector data:
/// channels[c][i] is sample i of channel c, in [-1, 1].
inline void write_wav(const std::filesystem::path& path,
                      const std::vector<std::vector<double>>& channels,
                      int sample_rate, int bits, bool float_format = false) {
  const std::uint16_t nch = static_cast<std::uint16_t>(channels.size());
  const std::size_t frames = channels.empty() ? 0 : channels[0].size();
  const int bytes_per = bits / 8;
  std::vector<unsigned char> data;
  data.reserve(frames * nch * static_cast<std::size_t>(bytes_per));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::uint16_t c = 0; c < nch; ++c) {
      const double x = channels[c][i];
      if (float_format) {
        float f = static_cast<float>(x);
        unsigned char raw[4];
        std::memcpy(raw, &f, 4);
        data.insert(data.end(), raw, raw + 4);
      } else if (bits == 8) {
        data.push_back(static_cast<unsigned char>(
            std::lround(x * 127.0) + 128));
      } else if (bits == 16) {
        auto s = static_cast<std::int16_t>(std::lround(x * 32767.0));
        append_u16(data, static_cast<std::uint16_t>(s));
      } else if (bits == 24) {
        auto s = static_cast<std::int32_t>(std::lround(x * 8388607.0));
        data.push_back(s & 0xFF);
        data.push_back((s >> 8) & 0xFF);
        data.push_back((s >> 16) & 0xFF);
      }
    }
  }

  std::vector<unsigned char> out;
  const std::uint16_t format = float_format ? 3 : 1;
  const std::uint32_t byte_rate =
      static_cast<std::uint32_t>(sample_rate) * nch * bytes_per;
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  append_u32(out, static_cast<std::uint32_t>(36 + data.size()));
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  append_u32(out, 16);
  append_u16(out, format);
  append_u16(out, nch);
  append_u32(out, static_cast<std::uint32_t>(sample_rate));
  append_u32(out, byte_rate);
  append_u16(out, static_cast<std::uint16_t>(nch * bytes_per));
  append_u16(out, static_cast<std::uint16_t>(bits));
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  append_u32(out, static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());

  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
}

// ---- random matrices ----------------------------------------------------

/// Random rotation via sign-fixed QR of a Gaussian matrix.
inline Matrixd random_rotation(Rng& rng, Index d) {
  Matrixd g = rng.normal_matrix(d, d);
  Eigen::HouseholderQR<Matrixd> qr(g);
  Matrixd q = qr.householderQ();
  Matrixd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

/// Random SPD matrix with eigenvalues uniform in [lo, hi].
inline Matrixd random_spd(Rng& rng, Index d, double lo = 0.5, double hi = 2.0) {
  Matrixd q = random_rotation(rng, d);
  Vectord eig(d);
  for (Index i = 0; i < d; ++i) eig(i) = lo + (hi - lo) * rng.uniform();
  return q * eig.asDiagonal() * q.transpose();
}

/// Random valid SegmentStats (directly constructed, not estimated).
inline SegmentStatsd random_stats(Rng& rng, Index d, double mean_scale = 1.0) {
  SegmentStatsd s;
  s.mean = mean_scale * rng.normal_vector(d);
  s.covariance = random_spd(rng, d);
  s.count = 100;
  s.regularized = false;
  return s;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace spk::test

#endif  // SPK_TEST_HELPERS_HPP
