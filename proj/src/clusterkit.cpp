#include "simaudit/clusterkit.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "simaudit/error.hpp"
#include "simaudit/rng.hpp"

namespace simaudit {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string cluster_name(std::size_t c) {
  std::string digits = std::to_string(c + 1);
  return "k" + std::string(digits.size() < 2 ? 2 - digits.size() : 0, '0') + digits;
}

// k-means++: first centre uniform, the rest drawn proportionally to the
// squared distance to the nearest chosen centre.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& x, std::size_t k, Engine& engine) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  Eigen::MatrixXd c(ix(k), x.cols());
  std::vector<char> chosen(n, 0);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t pick, std::size_t slot) {
    chosen[pick] = 1;
    c.row(ix(slot)) = x.row(ix(pick));
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (x.row(ix(i)) - c.row(ix(slot))).squaredNorm());
  };

  take(static_cast<std::size_t>(unit_uniform(engine) * static_cast<double>(n)), 0);
  for (std::size_t slot = 1; slot < k; ++slot) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!chosen[i]) total += d2[i];
    std::size_t pick = kNone;
    if (total > 0.0) {
      const double target = unit_uniform(engine) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] == 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining point coincides with a centre.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i)
        if (!chosen[i]) rest.push_back(i);
      pick = rest[static_cast<std::size_t>(unit_uniform(engine) * static_cast<double>(rest.size()))];
    }
    take(pick, slot);
  }
  return c;
}

struct Run {
  std::vector<std::size_t> labels;
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
  std::vector<double> history;
};

Run lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centroids, const KMeansOptions& opt) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  const std::size_t k = static_cast<std::size_t>(centroids.rows());
  Run run;
  run.labels.assign(n, kNone);
  std::vector<double> dist(n);
  std::vector<std::size_t> sizes(k);

  for (std::size_t iter = 0; iter < opt.max_iter; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = (x.row(ix(i)) - centroids.row(ix(c))).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (run.labels[i] != best) changed = true;
      run.labels[i] = best;
      dist[i] = best_d;
    }

    // Empty clusters take the point farthest from its centroid among
    // clusters that can spare one.
    std::fill(sizes.begin(), sizes.end(), 0);
    for (auto l : run.labels) ++sizes[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = kNone;
      for (std::size_t i = 0; i < n; ++i)
        if (sizes[run.labels[i]] > 1 && (far == kNone || dist[i] > dist[far])) far = i;
      --sizes[run.labels[far]];
      run.labels[far] = c;
      sizes[c] = 1;
      dist[far] = 0.0;
      centroids.row(ix(c)) = x.row(ix(far));
      changed = true;
    }

    centroids.setZero();
    for (std::size_t i = 0; i < n; ++i) centroids.row(ix(run.labels[i])) += x.row(ix(i));
    for (std::size_t c = 0; c < k; ++c) centroids.row(ix(c)) /= static_cast<double>(sizes[c]);

    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      inertia += (x.row(ix(i)) - centroids.row(ix(run.labels[i]))).squaredNorm();
    run.history.push_back(inertia);
    run.iterations = iter + 1;

    const bool settled = run.history.size() > 1 &&
                         run.history[run.history.size() - 2] - inertia <=
                             opt.tol * run.history[run.history.size() - 2];
    if (!changed || settled) break;
  }
  run.centroids = std::move(centroids);
  run.inertia = run.history.back();
  return run;
}

}  // namespace

Clustering::Clustering(Vocab vocab, std::vector<Cluster> clusters, std::string source_tag)
    : vocab_(std::move(vocab)), clusters_(std::move(clusters)), source_tag_(std::move(source_tag)) {
  std::vector<char> used(vocab_.size(), 0);
  for (auto& c : clusters_) {
    if (c.members.empty()) fail(Errc::EmptyClustering, "cluster '" + c.name + "' is empty");
    std::sort(c.members.begin(), c.members.end());
    for (auto m : c.members) {
      if (m >= vocab_.size()) fail(Errc::UnknownLabel, "cluster member index out of range");
      if (used[m]) fail(Errc::OverlappingPiles, "'" + vocab_[m] + "' is in two clusters");
      used[m] = 1;
    }
  }
}

Clustering Clustering::from_piles(const PileSorting& piles, const Vocab& vocab) {
  piles.validate_against(vocab);
  std::vector<Cluster> clusters;
  for (const auto& p : piles.piles) {
    Cluster c{p.name, {}};
    for (const auto& m : p.members) c.members.push_back(vocab.index_of(m));
    clusters.push_back(std::move(c));
  }
  return Clustering(vocab, std::move(clusters), piles.group_id);
}

std::vector<std::size_t> Clustering::assignment() const {
  std::vector<std::size_t> a(vocab_.size(), kNone);
  for (std::size_t c = 0; c < clusters_.size(); ++c)
    for (auto m : clusters_[c].members) a[m] = c;
  return a;
}

KMeansResult kmeans(const EmbeddingSet& set, const KMeansOptions& options) {
  const std::size_t n = set.size();
  if (options.k < 2 || options.k > n)
    fail(Errc::BadK, "k=" + std::to_string(options.k) + " outside [2, " + std::to_string(n) + "]");
  if (options.restarts < 1) fail(Errc::InvalidArgument, "k-means needs at least one restart");
  if (options.max_iter < 1) fail(Errc::InvalidArgument, "k-means needs at least one iteration");

  Eigen::MatrixXd x = set.vectors();
  if (options.unit_normalize) x.rowwise().normalize();

  Run best;
  std::size_t best_restart = 0;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Engine engine = seeded_engine(options.seed, r);
    Run run = lloyd(x, seed_centroids(x, options.k, engine), options);
    if (r == 0 || run.inertia < best.inertia) {
      best = std::move(run);
      best_restart = r;
    }
  }

  std::vector<Cluster> clusters(options.k);
  for (std::size_t c = 0; c < options.k; ++c) clusters[c].name = cluster_name(c);
  for (std::size_t i = 0; i < n; ++i) clusters[best.labels[i]].members.push_back(i);

  KMeansResult out;
  out.clustering = Clustering(set.vocab(), std::move(clusters), set.source_tag());
  out.labels = std::move(best.labels);
  out.centroids = std::move(best.centroids);
  out.inertia = best.inertia;
  out.best_restart = best_restart;
  out.iterations = best.iterations;
  out.inertia_history = std::move(best.history);
  return out;
}

double av_max_overlap(const Clustering& c1, const Clustering& c2) {
  if (c1.size() == 0 || c2.size() == 0) fail(Errc::EmptyClustering, "overlap of an empty clustering");
  if (!(c1.vocab() == c2.vocab())) fail(Errc::VocabMismatch, "clusterings cover different vocabularies");
  const auto owner = c2.assignment();
  std::vector<std::size_t> hits(c2.size());
  double sum = 0.0;
  for (const auto& a : c1.clusters()) {
    std::fill(hits.begin(), hits.end(), 0);
    for (auto m : a.members)
      if (owner[m] != kNone) ++hits[owner[m]];
    double best = 0.0;
    for (std::size_t b = 0; b < c2.size(); ++b) {
      const double denom =
          static_cast<double>(std::min(a.members.size(), c2.clusters()[b].members.size()));
      best = std::max(best, static_cast<double>(hits[b]) / denom);
    }
    sum += best;
  }
  return sum / static_cast<double>(c1.size());
}

OverlapRow overlap_row(const std::string& space, const Clustering& kmeans_clusters,
                       const std::vector<Clustering>& piles) {
  OverlapRow row{space, {}};
  for (const auto& p : piles)
    row.vs_piles.emplace_back(av_max_overlap(p, kmeans_clusters), av_max_overlap(kmeans_clusters, p));
  return row;
}

ClusteringReport clustering_report(const std::vector<EmbeddingSet>& spaces,
                                   const std::vector<PileSorting>& pile_groups,
                                   const KMeansOptions& options) {
  if (spaces.empty()) fail(Errc::InvalidArgument, "clustering report needs at least one space");
  const Vocab& vocab = spaces.front().vocab();
  std::vector<Clustering> piles;
  ClusteringReport report;
  for (const auto& g : pile_groups) {
    piles.push_back(Clustering::from_piles(g, vocab));
    report.pile_groups.push_back(g.group_id);
  }
  if (piles.size() == 2) {
    report.p1_in_p2 = av_max_overlap(piles[0], piles[1]);
    report.p2_in_p1 = av_max_overlap(piles[1], piles[0]);
  }
  for (const auto& space : spaces) {
    if (!(space.vocab() == vocab)) fail(Errc::VocabMismatch, "spaces must be aligned before clustering");
    const auto km = kmeans(space, options);
    report.rows.push_back(overlap_row(space.source_tag(), km.clustering, piles));
  }
  return report;
}

EmbeddingSet gaussian_embeddings(const Vocab& vocab, std::size_t dim, std::uint64_t seed,
                                 const std::string& tag) {
  Engine engine = seeded_engine(seed, 0);
  Eigen::MatrixXd m(ix(vocab.size()), ix(dim));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = standard_normal(engine);
  return EmbeddingSet(vocab, std::move(m), tag);
}

}  // namespace simaudit
