#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "simaudit/corpus.hpp"

namespace simaudit {

enum class SimKind { Cosine, GroundTruth, BinaryCooccurrence, Secondary };

std::string to_string(SimKind kind);
SimKind sim_kind_from_string(const std::string& name);

/// Dense symmetric similarity matrix over a vocabulary.
class SimMatrix {
 public:
  SimMatrix() = default;
  /// Throws BadValue unless square, |vocab|-sized, finite and exactly symmetric.
  SimMatrix(Vocab vocab, Eigen::MatrixXd values, SimKind kind);

  const Vocab& vocab() const noexcept { return vocab_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  SimKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return vocab_.size(); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  SimMatrix select(const Vocab& order) const;

 private:
  Vocab vocab_;
  Eigen::MatrixXd values_;
  SimKind kind_ = SimKind::Cosine;
};

/// Symmetric, zero-diagonal, non-negative dissimilarities.
class DistMatrix {
 public:
  DistMatrix() = default;
  DistMatrix(Vocab vocab, Eigen::MatrixXd values);

  const Vocab& vocab() const noexcept { return vocab_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return vocab_.size(); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Vocab vocab_;
  Eigen::MatrixXd values_;
};

/// Per-query ordered neighbor lists (indices into the vocabulary), nearest
/// first. Lists never contain the query itself.
class NeighborhoodIndex {
 public:
  NeighborhoodIndex(Vocab vocab, std::size_t k, std::uint64_t tie_seed,
                    std::vector<std::vector<std::size_t>> lists);

  const Vocab& vocab() const noexcept { return vocab_; }
  std::size_t k() const noexcept { return k_; }
  std::uint64_t tie_seed() const noexcept { return tie_seed_; }
  std::size_t size() const noexcept { return lists_.size(); }
  std::span<const std::size_t> neighbors(std::size_t query) const { return lists_[query]; }

  /// The first `k` entries of every list. Because the tie noise depends only
  /// on (seed, query), this equals knn(S, k, seed) for the same inputs.
  NeighborhoodIndex truncated(std::size_t k) const;

  friend bool operator==(const NeighborhoodIndex&, const NeighborhoodIndex&) = default;

 private:
  Vocab vocab_;
  std::size_t k_;
  std::uint64_t tie_seed_;
  std::vector<std::vector<std::size_t>> lists_;
};

inline constexpr double kTieNoise = 1e-9;

/// x.y / (|x||y|), clamped to [-1, 1]. Throws DimensionMismatch, ZeroVector.
double cosine_similarity(std::span<const double> x, std::span<const double> y);

SimMatrix similarity_matrix(const EmbeddingSet& set);

/// d = max - s, where max is the kind's attainable maximum (1 for every kind
/// produced here).
DistMatrix to_dissimilarity(const SimMatrix& sim);

/// Distances between the rows of `points` (Euclidean).
DistMatrix euclidean_distances(const Vocab& vocab, const Eigen::MatrixXd& points);

/// Rank-preserving similarity 1 / (1 + d), kind Secondary.
SimMatrix proximity_from_distances(const DistMatrix& dist);

/// Top-k neighbors by s + u, u ~ U[0, kTieNoise) drawn from an engine keyed
/// by (tie_seed, query). Remaining exact ties go to the lower index.
/// Throws BadK unless 1 <= k <= n - 1.
NeighborhoodIndex knn(const SimMatrix& sim, std::size_t k, std::uint64_t tie_seed);

/// CSV with a label header row and label first column, 9 significant digits.
/// Lines starting with '#' are comments.
std::string matrix_csv(const SimMatrix& sim, const std::vector<std::string>& comments = {});
void save_matrix(const SimMatrix& sim, const std::filesystem::path& path,
                 const std::vector<std::string>& comments = {});
SimMatrix load_matrix(const std::filesystem::path& path, SimKind kind);

}  // namespace simaudit
