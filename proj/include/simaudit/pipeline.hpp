#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "simaudit/config.hpp"
#include "simaudit/corpus.hpp"
#include "simaudit/simspace.hpp"

namespace simaudit {

/// Provenance stamped into every report: tool version, config hash, seeds.
struct Provenance {
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> seeds;

  std::vector<std::string> lines() const;
};

/// Inputs of one experiment run, loaded and aligned to the ground-truth
/// vocabulary.
struct ExperimentData {
  std::vector<PileSorting> piles;
  PerfTermTable table;
  SimMatrix ground_truth;
  std::vector<std::pair<std::string, EmbeddingSet>> models;
  std::vector<std::pair<std::string, EmbeddingSet>> context_models;
};

/// Builds the ground truth and loads every configured embedding file.
/// Throws ConfigError for missing inputs, UnknownLabel when an embedding file
/// lacks a ground-truth term.
ExperimentData load_experiment(const ExperimentConfig& cfg);

Provenance provenance_for(const ExperimentConfig& cfg);

// Each recipe writes under cfg.output_dir and returns the files written
// (relative to the output directory).
std::vector<std::filesystem::path> run_main_experiment(const ExperimentConfig& cfg, const ExperimentData& data);
std::vector<std::filesystem::path> run_hubness_experiment(const ExperimentConfig& cfg, const ExperimentData& data);
std::vector<std::filesystem::path> run_context_experiment(const ExperimentConfig& cfg, const ExperimentData& data);
std::vector<std::filesystem::path> run_cross_modal_experiment(const ExperimentConfig& cfg, const ExperimentData& data);
std::vector<std::filesystem::path> run_clustering_experiment(const ExperimentConfig& cfg, const ExperimentData& data);
std::vector<std::filesystem::path> run_mds_experiment(const ExperimentConfig& cfg, const ExperimentData& data);

/// Every recipe, then manifest.json listing each output with its SHA-256.
std::vector<std::filesystem::path> run_report_all(const ExperimentConfig& cfg);

/// Embedding file restricted to (and ordered by) `vocab`; throws
/// UnknownLabel when a vocab label has no vector.
EmbeddingSet load_aligned(const std::filesystem::path& path, const Vocab& vocab, const std::string& tag);

}  // namespace simaudit
