#include "simaudit/hubness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simaudit/error.hpp"

namespace simaudit {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::vector<double> as_doubles(const std::vector<std::size_t>& counts) {
  return {counts.begin(), counts.end()};
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

KOccurrence k_occurrence(const NeighborhoodIndex& index) {
  KOccurrence occ{index.vocab(), index.k(), std::vector<std::size_t>(index.size(), 0)};
  for (std::size_t q = 0; q < index.size(); ++q)
    for (auto j : index.neighbors(q)) ++occ.counts[j];
  return occ;
}

double skewness(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  // Relative threshold: constant inputs leave only rounding residue in m2.
  if (m2 <= 1e-24 * std::max(1.0, mean * mean)) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

double skewness(const KOccurrence& occ) { return skewness(as_doubles(occ.counts)); }

double robinhood(const std::vector<double>& xs) {
  const double total = std::accumulate(xs.begin(), xs.end(), 0.0);
  if (!(total > 0.0)) fail(Errc::InvalidArgument, "robinhood index needs a positive total");
  const double mean = total / static_cast<double>(xs.size());
  double dev = 0.0;
  for (double x : xs) dev += std::abs(x - mean);
  return std::clamp(0.5 * dev / total, 0.0, 1.0);
}

double robinhood(const KOccurrence& occ) { return robinhood(as_doubles(occ.counts)); }

std::string to_string(ReductionMethod method) {
  switch (method) {
    case ReductionMethod::MutualProximityGauss: return "mp-gauss";
    case ReductionMethod::LocalScaling: return "local-scaling";
  }
  return "unknown";
}

ReductionMethod reduction_method_from_string(const std::string& name) {
  if (name == "mp-gauss") return ReductionMethod::MutualProximityGauss;
  if (name == "local-scaling" || name == "nicdm") return ReductionMethod::LocalScaling;
  fail(Errc::InvalidArgument, "unknown hubness reduction method '" + name + "'");
}

SimMatrix mutual_proximity(const DistMatrix& dist) {
  const std::size_t n = dist.size();
  if (n < 3) fail(Errc::InvalidArgument, "mutual proximity needs at least 3 points");
  std::vector<double> mu(n), sigma(n);
  const double others = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sum += dist(i, j);
    mu[i] = sum / others;
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) ss += (dist(i, j) - mu[i]) * (dist(i, j) - mu[i]);
    sigma[i] = std::sqrt(ss / others);
    if (!(sigma[i] > 0.0))
      fail(Errc::DegenerateDistanceRow, "all distances from '" + dist.vocab()[i] + "' are equal");
  }
  Eigen::MatrixXd s(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    s(ix(i), ix(i)) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist(i, j);
      const double v = normal_sf((d - mu[i]) / sigma[i]) * normal_sf((d - mu[j]) / sigma[j]);
      s(ix(i), ix(j)) = v;
      s(ix(j), ix(i)) = v;
    }
  }
  return SimMatrix(dist.vocab(), std::move(s), SimKind::Secondary);
}

SimMatrix local_scaling(const DistMatrix& dist, std::size_t k) {
  const std::size_t n = dist.size();
  if (k < 1 || k + 1 > n) fail(Errc::BadK, "local scaling needs 1 <= k <= n-1");
  std::vector<double> scale(n);
  std::vector<double> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.push_back(dist(i, j));
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    scale[i] = std::accumulate(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
               static_cast<double>(k);
    if (!(scale[i] > 0.0))
      fail(Errc::DegenerateDistanceRow, "'" + dist.vocab()[i] + "' has zero-distance neighbors");
  }
  Eigen::MatrixXd s(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    s(ix(i), ix(i)) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 1.0 / (1.0 + dist(i, j) / std::sqrt(scale[i] * scale[j]));
      s(ix(i), ix(j)) = v;
      s(ix(j), ix(i)) = v;
    }
  }
  return SimMatrix(dist.vocab(), std::move(s), SimKind::Secondary);
}

SimMatrix reduce_hubness(const SimMatrix& sim, ReductionMethod method, std::size_t k) {
  const DistMatrix dist = to_dissimilarity(sim);
  return method == ReductionMethod::MutualProximityGauss ? mutual_proximity(dist)
                                                         : local_scaling(dist, k);
}

std::vector<HubnessReport> hubness_report(const EmbeddingSet& set, const std::vector<std::size_t>& ks,
                                          std::uint64_t tie_seed, ReductionMethod method) {
  const SimMatrix cosine = similarity_matrix(set);
  std::vector<HubnessReport> out;
  for (auto k : ks) {
    const auto before = k_occurrence(knn(cosine, k, tie_seed));
    const auto after = k_occurrence(knn(reduce_hubness(cosine, method, k), k, tie_seed));
    out.push_back({set.source_tag(), k, skewness(before), skewness(after), robinhood(before),
                   robinhood(after)});
  }
  return out;
}

}  // namespace simaudit
