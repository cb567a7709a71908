#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "simaudit/corpus.hpp"

namespace simaudit {

struct Cluster {
  std::string name;
  std::vector<std::size_t> members;  // sorted vocab indices
};

/// Disjoint clusters over a vocabulary; need not cover it.
class Clustering {
 public:
  Clustering() = default;
  /// Throws EmptyClustering for an empty member list, OverlappingPiles for
  /// shared members, UnknownLabel for out-of-range indices.
  Clustering(Vocab vocab, std::vector<Cluster> clusters, std::string source_tag = {});

  /// Pile members must all be in `vocab`.
  static Clustering from_piles(const PileSorting& piles, const Vocab& vocab);

  const Vocab& vocab() const noexcept { return vocab_; }
  const std::vector<Cluster>& clusters() const noexcept { return clusters_; }
  std::size_t size() const noexcept { return clusters_.size(); }
  const std::string& source_tag() const noexcept { return source_tag_; }

  /// Cluster index per vocab entry, or npos when uncovered.
  std::vector<std::size_t> assignment() const;

 private:
  Vocab vocab_;
  std::vector<Cluster> clusters_;
  std::string source_tag_;
};

struct KMeansOptions {
  std::size_t k = 22;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  bool unit_normalize = true;
};

struct KMeansResult {
  Clustering clustering;
  std::vector<std::size_t> labels;  // cluster index per vocab entry
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  std::size_t best_restart = 0;
  std::size_t iterations = 0;
  // Inertia after each Lloyd iteration of the selected restart.
  std::vector<double> inertia_history;
};

/// Lloyd's algorithm with k-means++ seeding; each restart r is seeded by
/// (seed, r) and the lowest-inertia restart wins (lowest index on ties).
/// Throws BadK unless 2 <= k <= n.
KMeansResult kmeans(const EmbeddingSet& set, const KMeansOptions& options);

/// (1/|C1|) Σ_{A∈C1} max_{B∈C2} |A∩B| / min(|A|,|B|). Not symmetric.
/// Throws EmptyClustering, VocabMismatch.
double av_max_overlap(const Clustering& c1, const Clustering& c2);

struct OverlapRow {
  std::string space;
  // Per pile group: {piles in k-means, k-means in piles}.
  std::vector<std::pair<double, double>> vs_piles;
};

struct ClusteringReport {
  std::vector<std::string> pile_groups;
  // "P1 in P2" and "P2 in P1" when exactly two groups are given.
  double p1_in_p2 = 0.0;
  double p2_in_p1 = 0.0;
  std::vector<OverlapRow> rows;
};

OverlapRow overlap_row(const std::string& space, const Clustering& kmeans_clusters,
                       const std::vector<Clustering>& piles);

/// K-means of every space, scored in both directions against each pile group.
ClusteringReport clustering_report(const std::vector<EmbeddingSet>& spaces,
                                   const std::vector<PileSorting>& pile_groups,
                                   const KMeansOptions& options);

/// n i.i.d. standard Gaussian vectors of dimension `dim` over `vocab`.
EmbeddingSet gaussian_embeddings(const Vocab& vocab, std::size_t dim, std::uint64_t seed,
                                 const std::string& tag = "RB");

}  // namespace simaudit
