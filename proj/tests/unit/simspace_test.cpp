#include <algorithm>
#include <numeric>

#include "simaudit/report_io.hpp"
#include "support.hpp"

using namespace simaudit;
using testing_support::letters;
using testing_support::random_sim;

namespace {

double cos(std::vector<double> x, std::vector<double> y) { return cosine_similarity(x, y); }

// Brute force: full sort of the row, larger similarity first, lower index on
// exact ties.
std::vector<std::size_t> oracle_knn(const SimMatrix& s, std::size_t q, std::size_t k) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (j != q) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s(q, a) > s(q, b); });
  idx.resize(k);
  return idx;
}

SimMatrix from_rows(std::size_t n, std::initializer_list<std::tuple<std::size_t, std::size_t, double>> entries) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (auto [i, j, v] : entries) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  return SimMatrix(letters(n), m, SimKind::Cosine);
}

}  // namespace

TEST(Cosine, Examples) {
  EXPECT_DOUBLE_EQ(cos({1, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(cos({1, 0}, {0, 1}), 0.0);
  EXPECT_NEAR(cos({1, 2, 3}, {4, 5, 6}), 0.974631846, 1e-9);
  EXPECT_NEAR(cos({1, 2, 3}, {4, 5, 6}), 32.0 / (std::sqrt(14.0) * std::sqrt(77.0)), 1e-15);
  EXPECT_ERRC(cos({1, 0}, {1, 0, 0}), Errc::DimensionMismatch);
  EXPECT_ERRC(cos({0, 0}, {1, 0}), Errc::ZeroVector);
}

TEST(Cosine, ScaleInvariantAndBounded) {
  auto gen = seeded_engine(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(6), y(6);
    for (auto& v : x) v = standard_normal(gen);
    for (auto& v : y) v = standard_normal(gen);
    const double c = cos(x, y);
    EXPECT_LE(std::abs(c), 1.0);
    const double a = 0.1 + 10 * unit_uniform(gen);
    std::vector<double> ax = x;
    for (auto& v : ax) v *= a;
    EXPECT_NEAR(cos(ax, y), c, 1e-12);
    EXPECT_EQ(cos(x, y), cos(y, x));
  }
}

TEST(SimilarityMatrix, OrthonormalBasisAndSymmetry) {
  const EmbeddingSet basis(letters(3), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(similarity_matrix(basis).values(), Eigen::MatrixXd::Identity(3, 3));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = similarity_matrix(testing_support::random_set(30, 8, seed));
    EXPECT_EQ(s.values(), s.values().transpose());
    EXPECT_EQ(s.values().diagonal(), Eigen::VectorXd::Ones(30));
  }
}

TEST(SimMatrix, RejectsAsymmetry) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = 0.5;
  EXPECT_ERRC(SimMatrix(letters(2), m, SimKind::Cosine), Errc::BadValue);
}

TEST(Dissimilarity, OneMinusS) {
  const auto s = from_rows(3, {{0, 1, 0.8}, {0, 2, 1.0 / 3}, {1, 2, 2.0 / 3}});
  const auto d = to_dissimilarity(s);
  EXPECT_DOUBLE_EQ(d(0, 1), 1.0 - 0.8);
  EXPECT_DOUBLE_EQ(d(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(d(0, 2), 2.0 / 3);
  EXPECT_DOUBLE_EQ(d(1, 2), 1.0 / 3);
}

TEST(Knn, SmallExamples) {
  const auto three = from_rows(3, {{0, 1, 0.9}, {0, 2, 0.1}, {1, 2, 0.5}});
  const auto idx = knn(three, 1, 0);
  EXPECT_EQ(idx.neighbors(0)[0], 1u);

  const auto four = from_rows(4, {{0, 1, 0.9}, {0, 2, 0.8}, {0, 3, 0.1}, {1, 2, 0.3}, {1, 3, 0.2}, {2, 3, 0.4}});
  const auto k2 = knn(four, 2, 0);
  EXPECT_EQ(std::vector<std::size_t>(k2.neighbors(0).begin(), k2.neighbors(0).end()),
            (std::vector<std::size_t>{1, 2}));
  EXPECT_ERRC(knn(four, 0, 0), Errc::BadK);
  EXPECT_ERRC(knn(four, 4, 0), Errc::BadK);
}

TEST(Knn, MatchesBruteForceWithoutTies) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 3 + seed % 10;
    const auto s = random_sim(n, seed);
    for (std::size_t k = 1; k < n; ++k) {
      const auto idx = knn(s, k, seed);
      for (std::size_t q = 0; q < n; ++q) {
        const auto got = idx.neighbors(q);
        EXPECT_EQ(std::vector<std::size_t>(got.begin(), got.end()), oracle_knn(s, q, k));
      }
    }
  }
}

TEST(Knn, ListsAreValidAndPrefixesOfLargerK) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_sim(25, seed);
    const auto big = knn(s, 24, seed);
    for (std::size_t k = 1; k < 25; ++k) {
      const auto small = knn(s, k, seed);
      EXPECT_EQ(small, big.truncated(k));
      for (std::size_t q = 0; q < 25; ++q) {
        auto l = small.neighbors(q);
        EXPECT_EQ(std::count(l.begin(), l.end(), q), 0);
        std::vector<std::size_t> sorted(l.begin(), l.end());
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
      }
    }
  }
}

TEST(Knn, TieNoiseNeverReordersDistinctValues) {
  // Values on a coarse grid: any two distinct values differ by far more
  // than the noise amplitude, so only the order within a tie group may vary.
  auto gen = seeded_engine(9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 20;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < 20; ++i)
      for (Eigen::Index j = i + 1; j < 20; ++j) m(i, j) = m(j, i) = std::floor(unit_uniform(gen) * 4) / 4;
    const SimMatrix s(letters(n), m, SimKind::GroundTruth);
    const auto idx = knn(s, n - 1, seed);
    for (std::size_t q = 0; q < n; ++q) {
      auto l = idx.neighbors(q);
      for (std::size_t r = 1; r < l.size(); ++r) EXPECT_GE(s(q, l[r - 1]), s(q, l[r]));
    }
  }
}

TEST(Knn, TiesAreSeededAndDeterministic) {
  // One pile holding everything: every off-diagonal similarity is 1.
  const std::size_t n = 30;
  const SimMatrix all(letters(n), Eigen::MatrixXd::Ones(n, n), SimKind::BinaryCooccurrence);
  EXPECT_EQ(knn(all, 5, 42), knn(all, 5, 42));
  EXPECT_FALSE(knn(all, 5, 42) == knn(all, 5, 43));
}

TEST(Distances, EuclideanAndProximity) {
  Eigen::MatrixXd pts(3, 2);
  pts << 0, 0, 3, 4, 0, 1;
  const auto d = euclidean_distances(letters(3), pts);
  EXPECT_DOUBLE_EQ(d(0, 1), 5.0);
  const auto p = proximity_from_distances(d);
  EXPECT_DOUBLE_EQ(p(0, 1), 1.0 / 6.0);
  EXPECT_EQ(p.kind(), SimKind::Secondary);
  EXPECT_EQ(knn(p, 1, 0).neighbors(0)[0], 2u);
}

TEST(MatrixCsv, RoundTripWithinPrintedPrecision) {
  testing_support::TempDir dir;
  const auto s = random_sim(15, 4);
  save_matrix(s, dir / "m.csv", {"comment line"});
  const auto text = read_file(dir / "m.csv");
  EXPECT_EQ(text.rfind("# comment line\n", 0), 0u);
  const auto back = load_matrix(dir / "m.csv", SimKind::Cosine);
  EXPECT_EQ(back.vocab(), s.vocab());
  EXPECT_LT((back.values() - s.values()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(back.values(), back.values().transpose());
}
