#include "simaudit/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

#include "simaudit/error.hpp"
#include "simaudit/rng.hpp"

namespace simaudit {

double ApkCurve::at(std::size_t k) const {
  auto it = std::find(ks.begin(), ks.end(), k);
  if (it == ks.end()) fail(Errc::BadK, "k=" + std::to_string(k) + " not on curve grid");
  return values[static_cast<std::size_t>(it - ks.begin())];
}

namespace {

// Σ_x |U(x) ∩ V(x)| over the first k entries of each list.
std::size_t total_overlap(const NeighborhoodIndex& u, const NeighborhoodIndex& v, std::size_t k,
                          std::vector<char>& mark) {
  std::size_t hits = 0;
  for (std::size_t q = 0; q < u.size(); ++q) {
    auto a = u.neighbors(q).first(k);
    auto b = v.neighbors(q).first(k);
    for (auto j : a) mark[j] = 1;
    for (auto j : b) hits += static_cast<std::size_t>(mark[j]);
    for (auto j : a) mark[j] = 0;
  }
  return hits;
}

std::vector<double> curve_from_indices(const NeighborhoodIndex& u, const NeighborhoodIndex& v,
                                       const std::vector<std::size_t>& ks) {
  std::vector<char> mark(u.size(), 0);
  std::vector<double> values;
  values.reserve(ks.size());
  const double n = static_cast<double>(u.size());
  for (auto k : ks)
    values.push_back(static_cast<double>(total_overlap(u, v, k, mark)) / (n * static_cast<double>(k)));
  return values;
}

double percentile(std::vector<double>& xs, double p) {
  std::sort(xs.begin(), xs.end());
  if (xs.size() == 1) return xs.front();
  const double pos = p * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

}  // namespace

double ap_at_k(const NeighborhoodIndex& u, const NeighborhoodIndex& v) {
  if (!(u.vocab() == v.vocab())) fail(Errc::Mismatch, "neighborhoods cover different vocabularies");
  if (u.k() != v.k()) fail(Errc::Mismatch, "neighborhoods have different k");
  std::vector<char> mark(u.size(), 0);
  return static_cast<double>(total_overlap(u, v, u.k(), mark)) /
         (static_cast<double>(u.size()) * static_cast<double>(u.k()));
}

ApkCurve ap_curve_window(const SimMatrix& su, const SimMatrix& sv, std::size_t k_lo,
                         std::size_t k_hi, std::uint64_t tie_seed) {
  if (!(su.vocab() == sv.vocab())) fail(Errc::Mismatch, "similarity spaces cover different vocabularies");
  if (k_lo < 1 || k_lo > k_hi) fail(Errc::BadK, "empty k window");
  // Lists for smaller k are prefixes of the k_hi lists.
  const auto u = knn(su, k_hi, tie_seed);
  const auto v = knn(sv, k_hi, tie_seed);
  ApkCurve curve;
  for (std::size_t k = k_lo; k <= k_hi; ++k) curve.ks.push_back(k);
  curve.values = curve_from_indices(u, v, curve.ks);
  curve.tie_seed = tie_seed;
  return curve;
}

ApkCurve ap_curve(const SimMatrix& su, const SimMatrix& sv, std::size_t k_max,
                  std::uint64_t tie_seed) {
  return ap_curve_window(su, sv, 1, k_max, tie_seed);
}

BaselineBand random_baseline(std::size_t n, std::size_t k_max, std::size_t trials,
                             std::uint64_t seed) {
  if (n < 2) fail(Errc::InvalidArgument, "baseline needs n >= 2");
  if (trials < 1) fail(Errc::InvalidArgument, "baseline needs at least one trial");
  if (k_max < 1 || k_max > n - 1) fail(Errc::BadK, "k_max outside [1, n-1]");

  const std::size_t others = n - 1;
  // samples[k-1][t]: aP@k of trial t.
  std::vector<std::vector<double>> samples(k_max, std::vector<double>(trials));
  std::vector<std::size_t> perm(others);
  constexpr std::size_t kBeyond = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos(k_max);
  std::vector<std::size_t> hits(k_max);

  for (std::size_t t = 0; t < trials; ++t) {
    Engine engine = seeded_engine(seed, t);
    std::fill(hits.begin(), hits.end(), 0);
    for (std::size_t q = 0; q < n; ++q) {
      // The reference ranking is 0..others-1; the random one is the first
      // k_max entries of a uniform permutation (partial Fisher-Yates).
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::fill(pos.begin(), pos.end(), kBeyond);
      for (std::size_t i = 0; i < k_max; ++i) {
        boost::random::uniform_int_distribution<std::size_t> pick(i, others - 1);
        std::swap(perm[i], perm[pick(engine)]);
        if (perm[i] < k_max) pos[perm[i]] = i;
      }
      // overlap(k) = #{i < k : perm[i] < k}, grown one k at a time.
      std::size_t overlap = 0;
      for (std::size_t k = 1; k <= k_max; ++k) {
        if (perm[k - 1] < k) ++overlap;
        if (pos[k - 1] < k - 1) ++overlap;
        hits[k - 1] += overlap;
      }
    }
    for (std::size_t k = 1; k <= k_max; ++k)
      samples[k - 1][t] =
          static_cast<double>(hits[k - 1]) / (static_cast<double>(n) * static_cast<double>(k));
  }

  BaselineBand band;
  band.n = n;
  band.trials = trials;
  band.seed = seed;
  for (std::size_t k = 1; k <= k_max; ++k) {
    auto& xs = samples[k - 1];
    const double mean = static_cast<double>(k) / static_cast<double>(others);
    const double mc_mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(trials);
    double ss = 0.0;
    for (double x : xs) ss += (x - mc_mean) * (x - mc_mean);
    const double sd = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0;
    band.ks.push_back(k);
    band.mean.push_back(mean);
    band.mc_mean.push_back(mc_mean);
    band.mc_stderr.push_back(sd / std::sqrt(static_cast<double>(trials)));
    // The band always contains the analytic mean (matters only for tiny trial counts).
    band.ci_low.push_back(std::min(percentile(xs, 0.025), mean));
    band.ci_high.push_back(std::max(percentile(xs, 0.975), mean));
  }
  return band;
}

ApkCurve relative_change(const ApkCurve& a, const ApkCurve& b) {
  if (a.ks != b.ks) fail(Errc::Mismatch, "curves use different k grids");
  ApkCurve out;
  out.ks = a.ks;
  out.label_u = a.label_v;
  out.label_v = b.label_v;
  out.tie_seed = a.tie_seed;
  for (std::size_t i = 0; i < a.ks.size(); ++i) {
    if (!(b.values[i] > 0.0))
      fail(Errc::DegenerateBaselineValue, "denominator curve is zero at k=" + std::to_string(a.ks[i]));
    out.values.push_back(a.values[i] / b.values[i]);
  }
  return out;
}

EmbeddingSet performance_text_embedding(const EmbeddingSet& terms, const PerfTermTable& table,
                                        TermWeighting weighting) {
  // Terms per performance, keyed by term index so the summation order does
  // not depend on table row order.
  std::map<std::string, std::map<std::size_t, std::size_t>> by_perf;
  for (const auto& row : table.rows) {
    auto idx = terms.vocab().find(row.term);
    if (!idx)
      fail(Errc::UnknownLabel, "term '" + row.term + "' of performance '" + row.performance_id +
                                   "' has no embedding");
    by_perf[row.performance_id][*idx] += row.count;
  }
  if (by_perf.empty()) fail(Errc::EmptyDescription, "performance table is empty");

  std::vector<std::string> ids;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(by_perf.size()), terms.vectors().cols());
  Eigen::Index r = 0;
  for (const auto& [perf, members] : by_perf) {
    if (members.empty()) fail(Errc::EmptyDescription, "performance '" + perf + "' has no terms");
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(terms.vectors().cols());
    double total = 0.0;
    for (const auto& [idx, count] : members) {
      const double w = weighting == TermWeighting::Frequency ? static_cast<double>(count) : 1.0;
      sum += w * terms.vectors().row(static_cast<Eigen::Index>(idx));
      total += w;
    }
    out.row(r++) = sum / total;
    ids.push_back(perf);
  }
  return EmbeddingSet(Vocab(std::move(ids)), std::move(out), terms.source_tag() + ":perf-mean");
}

ApkCurve cross_modal_curve(const EmbeddingSet& audio, const EmbeddingSet& text_perf,
                           std::size_t k_max, std::uint64_t tie_seed) {
  if (!(audio.vocab() == text_perf.vocab()))
    fail(Errc::Mismatch, "audio and text performance sets must share an aligned vocabulary");
  auto curve = ap_curve(similarity_matrix(audio), similarity_matrix(text_perf), k_max, tie_seed);
  curve.label_u = audio.source_tag();
  curve.label_v = text_perf.source_tag();
  return curve;
}

double fraction_above_band(const ApkCurve& curve, const BaselineBand& band) {
  if (curve.ks.empty()) return 0.0;
  std::size_t above = 0;
  for (std::size_t i = 0; i < curve.ks.size(); ++i) {
    auto it = std::find(band.ks.begin(), band.ks.end(), curve.ks[i]);
    if (it == band.ks.end()) fail(Errc::Mismatch, "band does not cover k=" + std::to_string(curve.ks[i]));
    if (curve.values[i] > band.ci_high[static_cast<std::size_t>(it - band.ks.begin())]) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(curve.ks.size());
}

}  // namespace simaudit
