#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "simaudit/corpus.hpp"
#include "simaudit/simspace.hpp"

namespace simaudit {

/// aP@k values over an increasing grid of k.
struct ApkCurve {
  std::vector<std::size_t> ks;
  std::vector<double> values;
  std::string label_u;
  std::string label_v;
  std::uint64_t tie_seed = 0;

  double at(std::size_t k) const;  // throws BadK if k is not on the grid
};

/// Random-neighborhood reference: analytic mean k/(n-1) plus a Monte-Carlo
/// 95% percentile band.
struct BaselineBand {
  std::vector<std::size_t> ks;
  std::vector<double> mean;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> mc_mean;
  std::vector<double> mc_stderr;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Mean over queries of |knn(x,U) ∩ knn(x,V)| / k.
/// Throws Mismatch if the vocabularies or k differ.
double ap_at_k(const NeighborhoodIndex& u, const NeighborhoodIndex& v);

/// aP@k for k = 1..k_max; both spaces ranked with the same tie seed.
ApkCurve ap_curve(const SimMatrix& su, const SimMatrix& sv, std::size_t k_max,
                  std::uint64_t tie_seed);

/// Same curve restricted to the ks in [k_lo, k_hi].
ApkCurve ap_curve_window(const SimMatrix& su, const SimMatrix& sv, std::size_t k_lo,
                         std::size_t k_hi, std::uint64_t tie_seed);

/// Each trial draws an independent uniformly random ranking per query and
/// scores it against a fixed reference ranking. Trials are seeded by
/// (seed, trial index).
BaselineBand random_baseline(std::size_t n, std::size_t k_max, std::size_t trials,
                             std::uint64_t seed);

/// Pointwise a / b. Throws Mismatch, DegenerateBaselineValue.
ApkCurve relative_change(const ApkCurve& a, const ApkCurve& b);

enum class TermWeighting { Unique, Frequency };

/// One vector per performance: mean of the vectors of its terms. Vocabulary
/// is the sorted set of performance ids. Throws UnknownLabel,
/// EmptyDescription.
EmbeddingSet performance_text_embedding(const EmbeddingSet& terms, const PerfTermTable& table,
                                        TermWeighting weighting = TermWeighting::Unique);

/// ap_curve of the two cosine spaces after checking the vocabularies agree.
ApkCurve cross_modal_curve(const EmbeddingSet& audio, const EmbeddingSet& text_perf,
                           std::size_t k_max, std::uint64_t tie_seed);

/// Fraction of ks at which the curve lies strictly above the band's upper
/// edge.
double fraction_above_band(const ApkCurve& curve, const BaselineBand& band);

}  // namespace simaudit
