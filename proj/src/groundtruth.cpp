#include "simaudit/groundtruth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "simaudit/error.hpp"

namespace simaudit {

namespace {
Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }
}  // namespace

SimMatrix pile_similarity_matrix(const PileSorting& piles, const Vocab& vocab) {
  piles.validate_against(vocab);
  const std::size_t n = vocab.size();
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(ix(n), ix(n));
  for (const auto& pile : piles.piles) {
    std::vector<std::size_t> idx;
    for (const auto& m : pile.members) idx.push_back(vocab.index_of(m));
    for (auto a : idx)
      for (auto b : idx) s(ix(a), ix(b)) = 1.0;
  }
  return SimMatrix(vocab, std::move(s), SimKind::BinaryCooccurrence);
}

SimMatrix performance_cooccurrence_matrix(const PerfTermTable& table, const Vocab& vocab) {
  table.validate_against(vocab);
  std::map<std::string, std::set<std::size_t>> by_perf;
  for (const auto& row : table.rows) by_perf[row.performance_id].insert(vocab.index_of(row.term));
  const std::size_t n = vocab.size();
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(ix(n), ix(n));
  for (const auto& [perf, terms] : by_perf)
    for (auto a : terms)
      for (auto b : terms) s(ix(a), ix(b)) = 1.0;
  return SimMatrix(vocab, std::move(s), SimKind::BinaryCooccurrence);
}

SimMatrix combine(const GroundTruthSpec& spec) {
  if (spec.sources.empty()) fail(Errc::InvalidArgument, "ground truth needs at least one source");
  const Vocab& vocab = spec.sources.front().matrix.vocab();
  std::vector<double> weights;
  for (const auto& src : spec.sources) {
    if (!(src.matrix.vocab() == vocab))
      fail(Errc::VocabMismatch, "ground-truth sources must share one vocabulary");
    if (!(src.weight >= 0.0) || !std::isfinite(src.weight))
      fail(Errc::InvalidArgument, "source weights must be finite and non-negative");
    weights.push_back(src.weight);
  }
  std::sort(weights.begin(), weights.end());
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) fail(Errc::InvalidArgument, "source weights are all zero");

  // Per-entry contributions are summed in sorted order so the result does not
  // depend on the order the sources are listed in.
  const auto n = ix(vocab.size());
  Eigen::MatrixXd s(n, n);
  std::vector<double> terms(spec.sources.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      for (std::size_t k = 0; k < spec.sources.size(); ++k)
        terms[k] = spec.sources[k].weight * spec.sources[k].matrix.values()(i, j);
      std::sort(terms.begin(), terms.end());
      double sum = 0.0;
      for (double t : terms) sum += t;
      const double v = std::clamp(sum / total, 0.0, 1.0);
      s(i, j) = v;
      s(j, i) = v;
    }
  for (Eigen::Index i = 0; i < n; ++i) s(i, i) = 1.0;
  return SimMatrix(vocab, std::move(s), SimKind::GroundTruth);
}

Vocab ground_truth_vocab(const std::vector<PileSorting>& groups, const PerfTermTable* table) {
  std::set<std::string> labels;
  for (const auto& g : groups)
    for (const auto& p : g.piles) labels.insert(p.members.begin(), p.members.end());
  if (table)
    for (const auto& row : table->rows) labels.insert(row.term);
  return Vocab(std::vector<std::string>(labels.begin(), labels.end()));
}

EmbeddingSet similarity_profiles(const SimMatrix& sim, const std::string& tag) {
  return EmbeddingSet(sim.vocab(), sim.values(), tag);
}

}  // namespace simaudit
