#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "simaudit/clusterkit.hpp"
#include "simaudit/hubness.hpp"
#include "simaudit/retrieval.hpp"

namespace simaudit {

/// Environment variable naming the default data directory.
inline constexpr const char* kDataDirEnv = "SIMAUDIT_DATA_DIR";

struct ModelEntry {
  std::string name;
  std::filesystem::path path;
};

/// Everything a full experiment run needs. Paths are resolved (absolute or
/// relative to the working directory) once loaded.
struct ExperimentConfig {
  std::filesystem::path data_dir;
  std::vector<std::filesystem::path> piles;
  std::filesystem::path perf_table;
  std::vector<double> gt_weights{1.0, 1.0, 1.0};

  std::vector<ModelEntry> models;
  std::vector<ModelEntry> context_models;

  std::filesystem::path audio;
  std::string audio_text_model;
  std::string audio_context_model;
  TermWeighting term_weighting = TermWeighting::Unique;

  std::size_t k_max = 49;
  std::uint64_t tie_seed = 7;
  std::size_t baseline_trials = 1000;
  std::uint64_t baseline_seed = 2024;
  std::size_t trust_lo = 5;
  std::size_t trust_hi = 10;

  std::vector<std::size_t> hub_ks{4, 8, 16};
  ReductionMethod hub_method = ReductionMethod::MutualProximityGauss;
  std::size_t hub_curve_k = 8;
  std::vector<std::string> hub_models;  // empty: every model
  std::size_t random_dim = 100;
  std::uint64_t random_seed = 11;

  KMeansOptions kmeans{22, 7, 10, 300, 1e-6, true};
  std::vector<std::string> cluster_models;  // empty: every model

  std::size_t mds_dims = 2;
  std::size_t mds_check_dims = 8;
  std::size_t mds_max_iter = 500;
  double mds_tol = 1e-6;

  std::filesystem::path output_dir = "out";
};

/// Parses the sectioned key/value format (see README). Relative input paths
/// resolve against [data] dir, else $SIMAUDIT_DATA_DIR, else the config
/// file's directory. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the first referenced input that does not exist.
void check_inputs(const ExperimentConfig& cfg);

/// Stable text form of every parameter plus a content digest of every input
/// file. The output directory is not part of it.
std::string canonical_config(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

std::vector<std::size_t> parse_size_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace simaudit
