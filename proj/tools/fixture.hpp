#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace simaudit::fixture {

// Synthetic data shaped like the real study: terms drawn from latent topics,
// two expert pile sortings that mostly follow the topics, performances
// described by terms from a couple of topics, and text models whose vectors
// are topic centres plus model-specific noise.
struct Options {
  std::size_t terms = 150;
  std::size_t topics = 22;
  std::size_t piles_a = 25;
  std::size_t piles_b = 19;
  std::size_t performances = 45;
  std::size_t dim = 64;
  double pile_noise = 0.2;  // fraction of terms a pile group misplaces
  std::uint64_t seed = 1;
  std::size_t baseline_trials = 1000;
};

struct ModelSpec {
  std::string name;
  double noise;
};

// Noise levels from most to least faithful; the last one is nearly random.
std::vector<ModelSpec> default_models();

// Writes piles_a.json, piles_b.json, perf_terms.csv, models/, context/,
// audio.jsonl and config.ini into `dir`.
void write(const std::filesystem::path& dir, const Options& options = {});

}  // namespace simaudit::fixture
