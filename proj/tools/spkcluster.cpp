// tools/spkcluster.cpp

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
#include "spk/calibration.hpp"
#include "spk/clustering.hpp"
#include "spk/error.hpp"
#include "spk/features_io.hpp"
#include "spk/metric.hpp"
#include "spk/mfcc.hpp"
#include "spk/rng.hpp"
#include "spk/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace spk;

namespace {

std::vector<Index> parse_length_list(const std::string& csv) {
  std::vector<Index> out;
  std::stringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ','))
    out.push_back(static_cast<Index>(std::stoll(field)));
  if (out.empty()) throw std::invalid_argument("empty length list");
  return out;
}

int cmd_extract(const std::vector<std::string>& inputs, const std::string& in_dir,
                const std::string& out_dir, const FrameConfig& cfg) {
  std::vector<fs::path> files(inputs.begin(), inputs.end());
  if (!in_dir.empty()) {
    std::vector<fs::path> scanned;
    for (const auto& e : fs::directory_iterator(in_dir)) {
      if (!e.is_regular_file()) continue;
      std::string ext = e.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
      if (ext == ".wav") scanned.push_back(e.path());
    }
    std::sort(scanned.begin(), scanned.end());
    files.insert(files.end(), scanned.begin(), scanned.end());
  }
  if (files.empty()) {
    std::cerr << "warning: no input files\n";
    return 0;
  }
  fs::create_directories(out_dir);
  std::size_t ok = 0, failed = 0;
  for (const auto& f : files) {
    try {
      AudioBuffer audio = load_wav(f);
      FeatureMatrix m = extract_mfcc(audio, cfg);
      FeatureFileInfo info;
      info.sample_rate = audio.sample_rate;
      info.hop_ms = cfg.hop_ms;
      write_features(m, fs::path(out_dir) / (f.stem().string() + ".csv"), info);
      ++ok;
    } catch (const std::exception& e) {
      std::cerr << f.string() << ": " << e.what() << "\n";
      ++failed;
    }
  }
  std::cerr << "extracted " << ok << "/" << files.size() << " files\n";
  if (failed == 0) return 0;
  return ok > 0 ? 2 : 1;
}

int cmd_simulate(const SimulationConfig& cfg, const std::string& out) {
  auto progress = [](std::size_t done, std::size_t total, Index a, Index b) {
    std::cerr << "cell (" << a << "," << b << ") done " << done << "/" << total
              << "\n";
  };
  SimulationResult result = simulate_surface(cfg, progress);
  save_surface(result.surface, out);
  std::cerr << "surface " << cfg.grid_lengths.size() << "x"
            << cfg.grid_lengths.size() << " metric=" << to_string(cfg.metric)
            << " values in [" << result.surface.values.minCoeff() << ", "
            << result.surface.values.maxCoeff() << "] -> " << out << "\n";
  return 0;
}

std::vector<FeatureMatrix> load_segments(const std::string& manifest,
                                         const std::vector<std::string>& files) {
  std::vector<FeatureMatrix> segments;
  if (!manifest.empty()) {
    DatasetManifest m = load_manifest(manifest);
    const fs::path base = fs::path(manifest).parent_path();
    for (const auto& e : m.entries) {
      fs::path p = e.path;
      if (p.is_relative() && !fs::exists(p) && fs::exists(base / p))
        p = base / p;
      FeatureMatrix fm = read_features(p);
      fm.segment_id = e.segment_id;
      segments.push_back(std::move(fm));
    }
  }
  for (const auto& f : files) segments.push_back(read_features(f));
  return segments;
}

int cmd_distance(const std::string& manifest, const std::vector<std::string>& files,
                 const MetricConfig& cfg, const std::string& surface_path,
                 const std::string& out, int jobs) {
  std::vector<FeatureMatrix> segments = load_segments(manifest, files);
  CorrectionSurface surface;
  const CorrectionSurface* surface_ptr = nullptr;
  if (!surface_path.empty()) {
    surface = load_surface(surface_path);
    surface_ptr = &surface;
  }
  DistanceMatrix d = pairwise_distances(segments, cfg, surface_ptr, jobs);
  write_distance_matrix(d, out);
  std::cerr << "distance matrix " << d.ids.size() << "x" << d.ids.size()
            << " (" << d.metric_descriptor << ") -> " << out << "\n";
  return 0;
}

int cmd_cluster(const std::string& matrix_path, double threshold, bool has_threshold,
                Index k, const std::string& out_prefix) {
  DistanceMatrix d = read_distance_matrix(matrix_path);
  Dendrogram tree = agglomerate(d);
  ClusterAssignment assignment =
      has_threshold ? cut(tree, threshold) : cut_k(tree, k);

  const fs::path json_path = out_prefix + ".dendrogram.json";
  const fs::path newick_path = out_prefix + ".newick";
  const fs::path assign_path = out_prefix + ".assignments.csv";
  std::ofstream(json_path) << dendrogram_json(tree);
  std::ofstream(newick_path) << dendrogram_newick(tree);
  write_assignment(assignment, assign_path);
  std::cerr << "clusters: " << assignment.num_clusters << " -> " << assign_path
            << "\n";
  return 0;
}

int cmd_sweep(const std::string& features_path, const std::string& lengths_csv,
              int trials, std::uint64_t seed, const MetricConfig& cfg,
              bool contiguous, const std::string& out) {
  FeatureMatrix fm = read_features(features_path);
  std::vector<Index> lengths = parse_length_list(lengths_csv);
  const Index rows = fm.rows();
  for (Index len : lengths)
    if (len > rows)
      throw SubsetTooLarge("sweep: requested subset of " + std::to_string(len) +
                           " rows from a " + std::to_string(rows) +
                           "-row feature set");
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");

  auto take_subset = [&](Rng& rng, Index len) {
    Matrixd subset(len, fm.dim());
    if (contiguous) {
      const Index start = static_cast<Index>(
          rng.integer(static_cast<std::uint64_t>(rows - len + 1)));
      subset = fm.values.middleRows(start, len);
    } else {
      std::vector<Index> idx(static_cast<std::size_t>(rows));
      std::iota(idx.begin(), idx.end(), Index(0));
      for (Index i = 0; i < len; ++i) {
        const Index j = i + static_cast<Index>(rng.integer(
                                static_cast<std::uint64_t>(rows - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        subset.row(i) = fm.values.row(idx[static_cast<std::size_t>(i)]);
      }
    }
    return subset;
  };

  std::map<std::pair<Index, Index>, double> means;
  MetricConfig trial_cfg = cfg;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    for (std::size_t j = i; j < lengths.size(); ++j) {
      double sum = 0.0;
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t sub = derive_seed(seed, i, j, static_cast<std::uint64_t>(t));
        Rng rng(sub);
        Matrixd a = take_subset(rng, lengths[i]);
        Matrixd b = take_subset(rng, lengths[j]);
        trial_cfg.seed = sub;
        sum += metric_between(build_model(a, trial_cfg),
                              build_model(b, trial_cfg), trial_cfg);
      }
      means[{lengths[i], lengths[j]}] = sum / trials;
      means[{lengths[j], lengths[i]}] = sum / trials;
    }
  }

  std::ofstream os(out);
  if (!os) throw IoFailure("sweep: cannot open " + out);
  os << "len_a,len_b,mean_distance\n";
  char buf[40];
  for (Index la : lengths)
    for (Index lb : lengths) {
      std::snprintf(buf, sizeof(buf), "%.17g", means[{la, lb}]);
      os << la << ',' << lb << ',' << buf << '\n';
    }
  std::cerr << "sweep over " << lengths.size() << " lengths, " << trials
            << " trials/pair -> " << out << "\n";
  return 0;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_dir) {
  DatasetManifest manifest = synth_dataset(spec, out_dir);
  save_manifest(manifest, fs::path(out_dir) / "manifest.csv");
  std::cerr << "wrote " << manifest.entries.size() << " segments to " << out_dir
            << "\n";
  return 0;
}

int cmd_evaluate(const std::string& assignments_path, const std::string& manifest_path) {
  ClusterAssignment assignment = read_assignment(assignments_path);
  DatasetManifest manifest = load_manifest(manifest_path);
  ClusterScore score = evaluate(assignment, manifest);
  std::printf("pairwise_precision=%.6f\n", score.pairwise_precision);
  std::printf("pairwise_recall=%.6f\n", score.pairwise_recall);
  std::printf("pairwise_f1=%.6f\n", score.pairwise_f1);
  std::printf("purity=%.6f\n", score.purity);
  return 0;
}

int cmd_surface_export(const std::string& surface_path, const std::string& out) {
  CorrectionSurface s = load_surface(surface_path);
  std::ofstream os(out);
  if (!os) throw IoFailure("surface-export: cannot open " + out);
  os << "len_a,len_b,value\n";
  char buf[40];
  for (Index i = 0; i < s.values.rows(); ++i)
    for (Index j = 0; j < s.values.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.values(i, j));
      os << s.grid_lengths[static_cast<std::size_t>(i)] << ','
         << s.grid_lengths[static_cast<std::size_t>(j)] << ',' << buf << '\n';
    }
  std::cerr << "exported " << s.values.size() << " cells -> " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speaker clustering with length-corrected divergences"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "decode WAVs and write MFCC feature files");
  std::vector<std::string> extract_inputs;
  std::string extract_in_dir, extract_out_dir;
  FrameConfig frame_cfg;
  extract->add_option("wavs", extract_inputs, "input WAV files");
  extract->add_option("--in-dir", extract_in_dir, "directory to scan for *.wav");
  extract->add_option("--out-dir", extract_out_dir, "output directory")->required();
  extract->add_option("--frame-ms", frame_cfg.frame_ms, "frame length (ms)");
  extract->add_option("--hop-ms", frame_cfg.hop_ms, "hop (ms)");
  extract->add_option("--preemphasis", frame_cfg.preemphasis, "pre-emphasis coefficient");
  extract->add_option("--mel-filters", frame_cfg.mel_filters, "mel filter count");
  extract->add_option("--num-ceps", frame_cfg.num_ceps, "cepstral coefficients");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate a correction surface");
  std::string sim_metric = "kl2", sim_grid, sim_out;
  SimulationConfig sim_cfg;
  simulate->add_option("--metric", sim_metric, "kl2 | kl2_no_mean | vq | aqd");
  simulate->add_option("--grid", sim_grid, "comma-separated grid lengths");
  simulate->add_option("--dim", sim_cfg.dim, "feature dimensionality");
  simulate->add_option("--trials", sim_cfg.trials_per_cell, "trials per cell");
  simulate->add_option("--seed", sim_cfg.seed, "master seed");
  simulate->add_option("--codebook-k", sim_cfg.codebook_k, "VQ codebook size");
  simulate->add_option("--jobs", sim_cfg.jobs, "worker threads");
  simulate->add_option("--out", sim_out, "output surface file")->required();

  // distance
  auto* distance = app.add_subcommand("distance", "pairwise distance matrix");
  std::vector<std::string> dist_files;
  std::string dist_manifest, dist_metric = "kl2", dist_surface, dist_out;
  MetricConfig dist_cfg;
  int dist_jobs = 1;
  distance->add_option("features", dist_files, "feature CSV files");
  distance->add_option("--manifest", dist_manifest, "dataset manifest CSV");
  distance->add_option("--metric", dist_metric, "kl2 | kl2_no_mean | vq | aqd");
  distance->add_option("--surface", dist_surface, "correction surface file");
  distance->add_option("--codebook-k", dist_cfg.codebook_k, "VQ codebook size");
  distance->add_option("--seed", dist_cfg.seed, "VQ codebook training seed");
  distance->add_option("--jobs", dist_jobs, "worker threads");
  distance->add_option("--out", dist_out, "output matrix CSV")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "agglomerate and cut a distance matrix");
  std::string cluster_matrix, cluster_prefix;
  double cluster_threshold = 0.0;
  Index cluster_k = 0;
  cluster->add_option("matrix", cluster_matrix, "distance matrix CSV")->required();
  auto* thr_opt = cluster->add_option("--threshold", cluster_threshold, "cut height");
  auto* k_opt = cluster->add_option("--k", cluster_k, "cluster count");
  cluster->add_option("--out-prefix", cluster_prefix, "output path prefix")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "subset-size sweep over one feature set");
  std::string sweep_features, sweep_lengths, sweep_metric = "kl2", sweep_out;
  int sweep_trials = 50;
  std::uint64_t sweep_seed = 0;
  bool sweep_contiguous = false;
  MetricConfig sweep_cfg;
  sweep->add_option("features", sweep_features, "feature CSV file")->required();
  sweep->add_option("--subset-lengths", sweep_lengths, "comma-separated subset sizes")
      ->required();
  sweep->add_option("--trials", sweep_trials, "trials per length pair");
  sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_option("--metric", sweep_metric, "kl2 | kl2_no_mean | vq | aqd");
  sweep->add_flag("--contiguous", sweep_contiguous,
                  "draw contiguous spans instead of random row subsets");
  sweep->add_option("--codebook-k", sweep_cfg.codebook_k, "VQ codebook size");
  sweep->add_option("--out", sweep_out, "output CSV")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a labeled synthetic dataset");
  SyntheticSpec synth_spec;
  std::string synth_out_dir;
  synth->add_option("--speakers", synth_spec.num_speakers, "speaker count");
  synth->add_option("--segments-per-speaker", synth_spec.segments_per_speaker,
                    "segments per speaker");
  synth->add_option("--dim", synth_spec.dim, "feature dimensionality");
  synth->add_option("--min-frames", synth_spec.min_frames, "min segment length");
  synth->add_option("--max-frames", synth_spec.max_frames, "max segment length");
  synth->add_option("--separation", synth_spec.speaker_separation,
                    "speaker mean dispersion");
  synth->add_option("--seed", synth_spec.seed, "master seed");
  synth->add_option("--out-dir", synth_out_dir, "output directory")->required();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "score an assignment against a manifest");
  std::string eval_assignments, eval_manifest;
  eval->add_option("--assignments", eval_assignments, "assignment CSV")->required();
  eval->add_option("--manifest", eval_manifest, "dataset manifest CSV")->required();

  // surface-export
  auto* sexport = app.add_subcommand("surface-export", "surface file to plot-ready CSV");
  std::string sexport_surface, sexport_out;
  sexport->add_option("surface", sexport_surface, "surface file")->required();
  sexport->add_option("--out", sexport_out, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract)
      return cmd_extract(extract_inputs, extract_in_dir, extract_out_dir, frame_cfg);
    if (*simulate) {
      sim_cfg.metric = parse_metric(sim_metric);
      if (!sim_grid.empty()) sim_cfg.grid_lengths = parse_length_list(sim_grid);
      return cmd_simulate(sim_cfg, sim_out);
    }
    if (*distance) {
      dist_cfg.id = parse_metric(dist_metric);
      if (dist_manifest.empty() && dist_files.empty())
        throw std::invalid_argument("distance: need --manifest or feature files");
      return cmd_distance(dist_manifest, dist_files, dist_cfg, dist_surface,
                          dist_out, dist_jobs);
    }
    if (*cluster) {
      const bool has_thr = thr_opt->count() > 0;
      const bool has_k = k_opt->count() > 0;
      if (has_thr == has_k)
        throw std::invalid_argument("cluster: give exactly one of --threshold or --k");
      return cmd_cluster(cluster_matrix, cluster_threshold, has_thr, cluster_k,
                         cluster_prefix);
    }
    if (*sweep) {
      sweep_cfg.id = parse_metric(sweep_metric);
      return cmd_sweep(sweep_features, sweep_lengths, sweep_trials, sweep_seed,
                       sweep_cfg, sweep_contiguous, sweep_out);
    }
    if (*synth) return cmd_synth(synth_spec, synth_out_dir);
    if (*eval) return cmd_evaluate(eval_assignments, eval_manifest);
    if (*sexport) return cmd_surface_export(sexport_surface, sexport_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
