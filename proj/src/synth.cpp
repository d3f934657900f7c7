// src/synth.cpp

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

#include "spk/synth.hpp"

#include "spk/error.hpp"
#include "spk/features_io.hpp"
#include "spk/rng.hpp"

#include <Eigen/QR>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace spk {

namespace {

// sub-stream tags for derive_seed
constexpr std::uint64_t kSpeakerStream = 1;
constexpr std::uint64_t kSegmentStream = 2;

struct SpeakerModel {
  Vectord mean;
  Matrixd transform;  // A with A A^T = covariance
};

// Random SPD covariance: eigenvalues uniform in [0.5, 2.0] against a
// seeded random rotation.
SpeakerModel speaker_model(const SyntheticSpec& spec, int speaker) {
  Rng rng(derive_seed(spec.seed, kSpeakerStream,
                      static_cast<std::uint64_t>(speaker)));
  SpeakerModel m;
  m.mean = spec.speaker_separation * rng.normal_vector(spec.dim);
  Vectord eigenvalues(spec.dim);
  for (Index i = 0; i < spec.dim; ++i)
    eigenvalues(i) = 0.5 + 1.5 * rng.uniform();
  Matrixd g = rng.normal_matrix(spec.dim, spec.dim);
  Eigen::HouseholderQR<Matrixd> qr(g);
  Matrixd q = qr.householderQ();
  Matrixd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < spec.dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  m.transform = q * eigenvalues.cwiseSqrt().asDiagonal();
  return m;
}

std::string two_digit(int v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

std::string three_digit(int v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", v);
  return buf;
}

FeatureMatrix draw_segment(const SyntheticSpec& spec, const SpeakerModel& model,
                           int speaker, int segment) {
  Rng rng(derive_seed(spec.seed, kSegmentStream,
                      static_cast<std::uint64_t>(speaker),
                      static_cast<std::uint64_t>(segment)));
  const Index span = spec.max_frames - spec.min_frames + 1;
  const Index frames =
      spec.min_frames +
      static_cast<Index>(rng.integer(static_cast<std::uint64_t>(span)));
  FeatureMatrix out;
  out.segment_id = "spk" + two_digit(speaker) + "_seg" + three_digit(segment);
  out.values = rng.normal_matrix(frames, spec.dim) * model.transform.transpose();
  out.values.rowwise() += model.mean.transpose();
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (num_speakers < 2)
    throw std::invalid_argument("synth: num_speakers must be >= 2");
  if (segments_per_speaker < 1)
    throw std::invalid_argument("synth: segments_per_speaker must be >= 1");
  if (dim < 1) throw std::invalid_argument("synth: dim must be >= 1");
  if (min_frames < dim + 2)
    throw std::invalid_argument("synth: min_frames must be >= dim + 2");
  if (max_frames < min_frames)
    throw std::invalid_argument("synth: max_frames must be >= min_frames");
  if (!(speaker_separation > 0.0))
    throw std::invalid_argument("synth: speaker_separation must be > 0");
}

LabeledSegments synth_segments(const SyntheticSpec& spec) {
  spec.validate();
  LabeledSegments out;
  for (int s = 0; s < spec.num_speakers; ++s) {
    const SpeakerModel model = speaker_model(spec, s);
    for (int g = 0; g < spec.segments_per_speaker; ++g) {
      out.segments.push_back(draw_segment(spec, model, s, g));
      out.labels.push_back("spk" + two_digit(s));
    }
  }
  return out;
}

DatasetManifest synth_dataset(const SyntheticSpec& spec,
                              const std::filesystem::path& out_dir) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw IoFailure("synth_dataset: cannot create " + out_dir.string() + ": " +
                    ec.message());

  DatasetManifest manifest;
  for (int s = 0; s < spec.num_speakers; ++s) {
    const SpeakerModel model = speaker_model(spec, s);
    for (int g = 0; g < spec.segments_per_speaker; ++g) {
      FeatureMatrix fm = draw_segment(spec, model, s, g);
      const auto path = out_dir / (fm.segment_id + ".csv");
      write_features(fm, path);
      manifest.entries.push_back(
          {fm.segment_id, path, "spk" + two_digit(s), fm.rows()});
    }
  }
  return manifest;
}

ClusterScore evaluate(const ClusterAssignment& assignment,
                      const DatasetManifest& manifest) {
  const std::size_t n = manifest.entries.size();
  std::map<std::string, int> predicted;
  for (std::size_t i = 0; i < assignment.ids.size(); ++i)
    predicted[assignment.ids[i]] = assignment.labels[i];
  if (predicted.size() != assignment.ids.size())
    throw IdMismatch("evaluate: assignment contains duplicate ids");
  if (predicted.size() != n)
    throw IdMismatch("evaluate: assignment covers " +
                     std::to_string(predicted.size()) + " ids, manifest has " +
                     std::to_string(n));

  std::vector<int> pred(n);
  std::vector<std::string> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = manifest.entries[i];
    auto it = predicted.find(e.segment_id);
    if (it == predicted.end())
      throw IdMismatch("evaluate: id '" + e.segment_id + "' not in assignment");
    pred[i] = it->second;
    truth[i] = e.label;
  }

  long long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool together = pred[i] == pred[j];
      const bool same = truth[i] == truth[j];
      if (together && same) ++tp;
      if (together && !same) ++fp;
      if (!together && same) ++fn;
    }

  ClusterScore score;
  score.pairwise_precision = (tp + fp) > 0 ? double(tp) / double(tp + fp) : 1.0;
  score.pairwise_recall = (tp + fn) > 0 ? double(tp) / double(tp + fn) : 1.0;
  const double pr = score.pairwise_precision + score.pairwise_recall;
  score.pairwise_f1 =
      pr > 0.0 ? 2.0 * score.pairwise_precision * score.pairwise_recall / pr : 0.0;

  // purity: majority label share per predicted cluster
  std::map<int, std::map<std::string, int>> per_cluster;
  for (std::size_t i = 0; i < n; ++i) ++per_cluster[pred[i]][truth[i]];
  long long majority = 0;
  for (const auto& [cluster, counts] : per_cluster) {
    int best = 0;
    for (const auto& [label, count] : counts) best = std::max(best, count);
    majority += best;
  }
  score.purity = n > 0 ? double(majority) / double(n) : 0.0;
  return score;
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("save_manifest: cannot open " + path.string());
  out << "segment_id,path,label,frames\n";
  for (const auto& e : m.entries)
    out << e.segment_id << ',' << e.path.string() << ',' << e.label << ','
        << e.frames << '\n';
  if (!out) throw IoFailure("save_manifest: write failed");
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("load_manifest: cannot open " + path.string());
  DatasetManifest m;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != "segment_id,path,label,frames")
        throw SchemaMismatch("load_manifest: unexpected header '" + line + "'");
      header = false;
      continue;
    }
    std::stringstream ss(line);
    std::string id, file, label, frames;
    if (!std::getline(ss, id, ',') || !std::getline(ss, file, ',') ||
        !std::getline(ss, label, ',') || !std::getline(ss, frames))
      throw MalformedRow("load_manifest: bad row '" + line + "'");
    m.entries.push_back(
        {id, file, label, static_cast<Index>(std::stoll(frames))});
  }
  return m;
}

}  // namespace spk
