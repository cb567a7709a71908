#include <algorithm>
#include <numeric>

#include "simaudit/hubness.hpp"
#include "support.hpp"

using namespace simaudit;
using testing_support::letters;

namespace {

NeighborhoodIndex lists(std::vector<std::vector<std::size_t>> l) {
  const std::size_t k = l.front().size();
  const std::size_t n = l.size();
  return NeighborhoodIndex(letters(n), k, 0, std::move(l));
}

DistMatrix random_dist(std::size_t n, std::uint64_t seed) {
  return to_dissimilarity(testing_support::random_sim(n, seed));
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

TEST(KOccurrence, CycleAndStar) {
  const auto cycle = k_occurrence(lists({{1}, {2}, {3}, {0}}));
  EXPECT_EQ(cycle.counts, (std::vector<std::size_t>{1, 1, 1, 1}));
  const auto star = k_occurrence(lists({{1}, {0}, {0}, {0}}));
  EXPECT_EQ(star.counts, (std::vector<std::size_t>{3, 1, 0, 0}));
}

TEST(KOccurrence, MassIsKTimesN) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 10 + seed % 30;
    const std::size_t k = 1 + seed % (n - 1);
    const auto occ = k_occurrence(knn(testing_support::random_sim(n, seed), k, seed));
    EXPECT_EQ(std::accumulate(occ.counts.begin(), occ.counts.end(), std::size_t{0}), k * n);
  }
}

TEST(Skewness, Examples) {
  EXPECT_NEAR(skewness(std::vector<double>{0, 0, 1, 3}), 0.816497, 1e-6);
  // m2 = 1.5, m3 = 1.5: g1 = 1.5 / 1.5^1.5.
  EXPECT_NEAR(skewness(std::vector<double>{0, 0, 1, 3}), 1.5 / std::pow(1.5, 1.5), 1e-14);
  EXPECT_EQ(skewness(std::vector<double>{2, 2, 2}), 0.0);
}

TEST(Skewness, AffineInvariantAndOddUnderReflection) {
  auto gen = seeded_engine(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(20);
    for (auto& x : xs) x = std::exp(standard_normal(gen));
    const double g = skewness(xs);
    const double a = 0.5 + unit_uniform(gen) * 5, b = standard_normal(gen) * 10;
    std::vector<double> ys = xs, zs = xs;
    for (auto& y : ys) y = a * y + b;
    for (auto& z : zs) z = -z;
    EXPECT_NEAR(skewness(ys), g, 1e-9);
    EXPECT_NEAR(skewness(zs), -g, 1e-12);
  }
}

TEST(Robinhood, Examples) {
  EXPECT_EQ(robinhood(std::vector<double>{3, 1, 0, 0}), 0.5);
  EXPECT_EQ(robinhood(std::vector<double>{2, 2, 2, 2}), 0.0);
}

TEST(Robinhood, BoundedAndScaleInvariant) {
  auto gen = seeded_engine(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(15);
    for (auto& x : xs) x = std::floor(unit_uniform(gen) * 10);
    xs[0] += 1;
    const double r = robinhood(xs);
    EXPECT_GE(r, 0.0);
    EXPECT_LT(r, 1.0);
    for (auto& x : xs) x *= 3;
    EXPECT_NEAR(robinhood(xs), r, 1e-12);
  }
}

TEST(MutualProximity, QuarterAtTheMean) {
  // Three points at equal mutual distance: every row has mean d and the
  // population sigma is zero, so the row is degenerate.
  Eigen::MatrixXd eq = Eigen::MatrixXd::Constant(3, 3, 0.5);
  eq.diagonal().setZero();
  EXPECT_ERRC(mutual_proximity(DistMatrix(letters(3), eq)), Errc::DegenerateDistanceRow);

  // Four points where d(0,1) equals the mean of both row 0 and row 1.
  Eigen::MatrixXd d(4, 4);
  d << 0, 2, 1, 3,  //
      2, 0, 3, 1,   //
      1, 3, 0, 2,   //
      3, 1, 2, 0;
  const auto mp = mutual_proximity(DistMatrix(letters(4), d));
  EXPECT_NEAR(mp(0, 1), 0.25, 1e-15);
  EXPECT_EQ(mp(0, 0), 1.0);
}

TEST(MutualProximity, SymmetricBoundedAndMatchesDirectFormula) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = random_dist(30, seed);
    const auto mp = mutual_proximity(d);
    EXPECT_EQ(mp.values(), mp.values().transpose());
    EXPECT_GE(mp.values().minCoeff(), 0.0);
    EXPECT_LE(mp.values().maxCoeff(), 1.0);
    // Direct evaluation of the Gaussian model, row statistics without the
    // self distance.
    std::vector<double> mu(30), sd(30);
    for (std::size_t i = 0; i < 30; ++i) {
      double s = 0, ss = 0;
      for (std::size_t j = 0; j < 30; ++j)
        if (j != i) s += d(i, j);
      mu[i] = s / 29;
      for (std::size_t j = 0; j < 30; ++j)
        if (j != i) ss += (d(i, j) - mu[i]) * (d(i, j) - mu[i]);
      sd[i] = std::sqrt(ss / 29);
    }
    auto sf = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t j = 0; j < 30; ++j)
        if (i != j) EXPECT_NEAR(mp(i, j), sf((d(i, j) - mu[i]) / sd[i]) * sf((d(i, j) - mu[j]) / sd[j]), 1e-12);
    // Self proximity dominates the rest of the row.
    for (std::size_t i = 1; i < 30; ++i) EXPECT_LT(mp(0, i), mp(0, 0));
  }
}

TEST(MutualProximity, FarPairGoesToZero) {
  // Enough points that one outlying distance sits many deviations above the mean.
  const Eigen::Index n = 100;
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, 1.0);
  auto gen = seeded_engine(1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = 1.0 + 0.1 * unit_uniform(gen);
  d.diagonal().setZero();
  d(0, 1) = d(1, 0) = 1e3;
  EXPECT_LT(mutual_proximity(DistMatrix(letters(n), d))(0, 1), 1e-12);
}

TEST(MutualProximity, ReducesHubnessOfHighDimensionalGaussians) {
  std::vector<double> before, after;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = hubness_report(testing_support::random_set(150, 500, seed), {8}, seed);
    before.push_back(r[0].skewness_before);
    after.push_back(r[0].skewness_after);
  }
  EXPECT_LT(median(after), median(before));
}

TEST(LocalScaling, SymmetricAndInUnitInterval) {
  const auto d = random_dist(25, 3);
  const auto ls = local_scaling(d, 5);
  EXPECT_EQ(ls.values(), ls.values().transpose());
  EXPECT_GT(ls.values().minCoeff(), 0.0);
  EXPECT_LE(ls.values().maxCoeff(), 1.0);
  EXPECT_EQ(ls.kind(), SimKind::Secondary);
}

TEST(HubnessReport, RowsPerKAndMethodNames) {
  const auto r = hubness_report(testing_support::random_set(40, 20, 1), {4, 8, 16}, 7, ReductionMethod::LocalScaling);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[2].k, 16u);
  EXPECT_EQ(r[0].model_tag, "rand");
  EXPECT_EQ(reduction_method_from_string("nicdm"), ReductionMethod::LocalScaling);
  EXPECT_EQ(reduction_method_from_string(to_string(ReductionMethod::MutualProximityGauss)),
            ReductionMethod::MutualProximityGauss);
  EXPECT_ERRC(reduction_method_from_string("csls"), Errc::InvalidArgument);
}
