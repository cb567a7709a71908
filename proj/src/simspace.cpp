#include "simaudit/simspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "simaudit/error.hpp"
#include "simaudit/report_io.hpp"
#include "simaudit/rng.hpp"

namespace simaudit {

namespace {

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_square(const Vocab& vocab, const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != vocab.size())
    fail(Errc::DimensionMismatch, std::string(what) + " must be |vocab| x |vocab|");
  if (!m.allFinite()) fail(Errc::BadValue, std::string(what) + " has non-finite entries");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) fail(Errc::BadValue, std::string(what) + " is not symmetric");
}

}  // namespace

std::string to_string(SimKind kind) {
  switch (kind) {
    case SimKind::Cosine: return "cosine";
    case SimKind::GroundTruth: return "ground_truth";
    case SimKind::BinaryCooccurrence: return "binary_cooccurrence";
    case SimKind::Secondary: return "secondary";
  }
  return "unknown";
}

SimKind sim_kind_from_string(const std::string& name) {
  for (auto k : {SimKind::Cosine, SimKind::GroundTruth, SimKind::BinaryCooccurrence,
                 SimKind::Secondary})
    if (to_string(k) == name) return k;
  fail(Errc::InvalidArgument, "unknown similarity kind '" + name + "'");
}

SimMatrix::SimMatrix(Vocab vocab, Eigen::MatrixXd values, SimKind kind)
    : vocab_(std::move(vocab)), values_(std::move(values)), kind_(kind) {
  check_square(vocab_, values_, "similarity matrix");
}

SimMatrix SimMatrix::select(const Vocab& order) const {
  std::vector<Eigen::Index> idx;
  idx.reserve(order.size());
  for (const auto& label : order.labels()) idx.push_back(ix(vocab_.index_of(label)));
  Eigen::MatrixXd out(ix(order.size()), ix(order.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(ix(i), ix(j)) = values_(idx[i], idx[j]);
  return SimMatrix(order, std::move(out), kind_);
}

DistMatrix::DistMatrix(Vocab vocab, Eigen::MatrixXd values)
    : vocab_(std::move(vocab)), values_(std::move(values)) {
  check_square(vocab_, values_, "distance matrix");
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    if (values_(i, i) != 0.0) fail(Errc::BadValue, "distance matrix diagonal must be zero");
    if ((values_.row(i).array() < 0.0).any()) fail(Errc::BadValue, "negative distance");
  }
}

NeighborhoodIndex::NeighborhoodIndex(Vocab vocab, std::size_t k, std::uint64_t tie_seed,
                                     std::vector<std::vector<std::size_t>> lists)
    : vocab_(std::move(vocab)), k_(k), tie_seed_(tie_seed), lists_(std::move(lists)) {
  if (lists_.size() != vocab_.size()) fail(Errc::Mismatch, "one neighbor list per label required");
  if (k_ < 1 || k_ + 1 > vocab_.size()) fail(Errc::BadK, "k=" + std::to_string(k_));
  std::vector<char> seen(vocab_.size(), 0);
  for (std::size_t q = 0; q < lists_.size(); ++q) {
    const auto& list = lists_[q];
    if (list.size() != k_) fail(Errc::Mismatch, "neighbor list length differs from k");
    for (auto j : list) {
      if (j >= vocab_.size() || j == q || seen[j]) fail(Errc::BadValue, "invalid neighbor list");
      seen[j] = 1;
    }
    for (auto j : list) seen[j] = 0;
  }
}

NeighborhoodIndex NeighborhoodIndex::truncated(std::size_t k) const {
  if (k < 1 || k > k_) fail(Errc::BadK, "cannot truncate k=" + std::to_string(k_) + " to " +
                                            std::to_string(k));
  std::vector<std::vector<std::size_t>> lists;
  lists.reserve(lists_.size());
  for (const auto& l : lists_) lists.emplace_back(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(k));
  return NeighborhoodIndex(vocab_, k, tie_seed_, std::move(lists));
}

double cosine_similarity(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty())
    fail(Errc::DimensionMismatch, "cosine of vectors with dimensions " + std::to_string(x.size()) +
                                      " and " + std::to_string(y.size()));
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  if (xx == 0.0 || yy == 0.0) fail(Errc::ZeroVector, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(xx) * std::sqrt(yy)), -1.0, 1.0);
}

SimMatrix similarity_matrix(const EmbeddingSet& set) {
  const std::size_t n = set.size();
  const std::size_t d = set.dim();
  // Row-major copy so each vector is a contiguous span.
  std::vector<double> rows(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) rows[i * d + j] = set.vectors()(ix(i), ix(j));
  auto row = [&](std::size_t i) { return std::span<const double>(rows.data() + i * d, d); };

  Eigen::MatrixXd s(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    s(ix(i), ix(i)) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = cosine_similarity(row(i), row(j));
      s(ix(i), ix(j)) = c;
      s(ix(j), ix(i)) = c;
    }
  }
  return SimMatrix(set.vocab(), std::move(s), SimKind::Cosine);
}

DistMatrix to_dissimilarity(const SimMatrix& sim) {
  constexpr double kMax = 1.0;
  Eigen::MatrixXd d = (kMax - sim.values().array()).matrix();
  for (Eigen::Index i = 0; i < d.rows(); ++i) d(i, i) = 0.0;
  d = d.cwiseMax(0.0);
  return DistMatrix(sim.vocab(), std::move(d));
}

DistMatrix euclidean_distances(const Vocab& vocab, const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (points.row(i) - points.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  return DistMatrix(vocab, std::move(d));
}

SimMatrix proximity_from_distances(const DistMatrix& dist) {
  Eigen::MatrixXd s = (1.0 / (1.0 + dist.values().array())).matrix();
  return SimMatrix(dist.vocab(), std::move(s), SimKind::Secondary);
}

NeighborhoodIndex knn(const SimMatrix& sim, std::size_t k, std::uint64_t tie_seed) {
  const std::size_t n = sim.size();
  if (k < 1 || n < 2 || k > n - 1)
    fail(Errc::BadK, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n ? n - 1 : 0) + "]");

  std::vector<std::vector<std::size_t>> lists(n);
  std::vector<double> key(n);
  std::vector<std::size_t> order;
  for (std::size_t q = 0; q < n; ++q) {
    Engine engine = seeded_engine(tie_seed, q);
    for (std::size_t j = 0; j < n; ++j) key[j] = sim(q, j) + kTieNoise * unit_uniform(engine);
    order.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != q) order.push_back(j);
    auto closer = [&](std::size_t a, std::size_t b) {
      return key[a] > key[b] || (key[a] == key[b] && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), closer);
    lists[q].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return NeighborhoodIndex(sim.vocab(), k, tie_seed, std::move(lists));
}

std::string matrix_csv(const SimMatrix& sim, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "label";
  for (const auto& l : sim.vocab().labels()) out << ',' << csv_field(l);
  out << '\n';
  for (std::size_t i = 0; i < sim.size(); ++i) {
    out << csv_field(sim.vocab()[i]);
    for (std::size_t j = 0; j < sim.size(); ++j) out << ',' << format_sig(sim(i, j), 9);
    out << '\n';
  }
  return out.str();
}

void save_matrix(const SimMatrix& sim, const std::filesystem::path& path,
                 const std::vector<std::string>& comments) {
  write_file_atomic(path, matrix_csv(sim, comments));
}

SimMatrix load_matrix(const std::filesystem::path& path, SimKind kind) {
  std::vector<std::vector<std::string>> records;
  for (const auto& line : split_lines(read_file(path))) {
    if (line.empty() || line.front() == '#') continue;
    records.push_back(split_csv_line(line));
  }
  if (records.empty()) fail(Errc::ParseError, path.string() + ": empty matrix file");
  const auto& header = records.front();
  const std::size_t n = header.size() - 1;
  if (records.size() != n + 1) fail(Errc::ParseError, path.string() + ": matrix is not square");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  Vocab vocab = Vocab::from_raw(labels);
  Eigen::MatrixXd m(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = records[i + 1];
    if (rec.size() != n + 1) fail(Errc::ParseError, path.string() + ": ragged matrix row");
    if (normalize_label(rec.front()) != vocab[i])
      fail(Errc::ParseError, path.string() + ": row labels must match the header order");
    for (std::size_t j = 0; j < n; ++j) m(ix(i), ix(j)) = parse_double(rec[j + 1]);
  }
  // Printed at 9 digits, so restore exact symmetry from the upper triangle.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(m(ix(i), ix(j)) - m(ix(j), ix(i))) > 1e-8)
        fail(Errc::BadValue, path.string() + ": matrix is not symmetric");
      m(ix(i), ix(j)) = m(ix(j), ix(i));
    }
  return SimMatrix(std::move(vocab), std::move(m), kind);
}

}  // namespace simaudit
