#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "simaudit/corpus.hpp"
#include "simaudit/simspace.hpp"

namespace simaudit {

/// How often each label occurs in the other labels' k-neighbor lists.
struct KOccurrence {
  Vocab vocab;
  std::size_t k = 0;
  std::vector<std::size_t> counts;
};

KOccurrence k_occurrence(const NeighborhoodIndex& index);

/// Population moment skewness m3 / m2^(3/2); 0 for constant counts.
double skewness(const std::vector<double>& xs);
double skewness(const KOccurrence& occ);

/// 0.5 * Σ|c_i - mean| / Σ c_i: fraction of list slots that would have to
/// move for a uniform k-occurrence.
double robinhood(const std::vector<double>& xs);
double robinhood(const KOccurrence& occ);

enum class ReductionMethod { MutualProximityGauss, LocalScaling };

std::string to_string(ReductionMethod method);
ReductionMethod reduction_method_from_string(const std::string& name);

/// Gaussian mutual proximity. Each row i is summarized by the mean and
/// population standard deviation of its off-diagonal distances; the result
/// is SF((d-mu_i)/sigma_i) * SF((d-mu_j)/sigma_j) with SF the standard normal
/// survival function, diagonal 1. Throws DegenerateDistanceRow.
SimMatrix mutual_proximity(const DistMatrix& dist);

/// Non-iterative contextual dissimilarity (local scaling):
/// d_ij / sqrt(m_i m_j) with m_i the mean distance to i's k nearest
/// neighbors, returned as the proximity 1 / (1 + d').
SimMatrix local_scaling(const DistMatrix& dist, std::size_t k);

/// Secondary similarity of `sim` under `method` (k used by local scaling).
SimMatrix reduce_hubness(const SimMatrix& sim, ReductionMethod method, std::size_t k);

struct HubnessReport {
  std::string model_tag;
  std::size_t k = 0;
  double skewness_before = 0.0;
  double skewness_after = 0.0;
  double robinhood_before = 0.0;
  double robinhood_after = 0.0;
};

/// For each k: hubness of the cosine space, then of its reduced space.
std::vector<HubnessReport> hubness_report(const EmbeddingSet& set, const std::vector<std::size_t>& ks,
                                          std::uint64_t tie_seed,
                                          ReductionMethod method = ReductionMethod::MutualProximityGauss);

}  // namespace simaudit
