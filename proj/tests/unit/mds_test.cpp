#include <Eigen/Eigenvalues>

#include "simaudit/mds.hpp"
#include "support.hpp"

using namespace simaudit;
using testing_support::letters;

namespace {

Eigen::MatrixXd planted(std::size_t n, std::size_t dims, std::uint64_t seed) {
  auto gen = seeded_engine(seed, 7);
  return testing_support::normal_matrix(gen, n, dims);
}

double max_distance_error(const DistMatrix& target, const Eigen::MatrixXd& x) {
  const auto got = euclidean_distances(target.vocab(), x);
  return (got.values() - target.values()).cwiseAbs().maxCoeff();
}

DistMatrix random_dissimilarity(std::size_t n, std::uint64_t seed) {
  return to_dissimilarity(testing_support::random_sim(n, seed));
}

}  // namespace

TEST(ClassicalMds, EquilateralTriangle) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(3, 3);
  d.diagonal().setZero();
  const DistMatrix dist(letters(3), d);
  const auto sol = classical_mds(dist, 2);
  EXPECT_LT(max_distance_error(dist, sol.coordinates), 1e-9);
}

TEST(ClassicalMds, ReconstructsPlantedConfigurations) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 10 + 5 * seed;
    const DistMatrix dist = euclidean_distances(letters(n), planted(n, 2, seed));
    const auto sol = classical_mds(dist, 2);
    EXPECT_LT(max_distance_error(dist, sol.coordinates), 1e-6) << "seed " << seed;
  }
}

TEST(ClassicalMds, CollinearInputHasFlatSecondAxis) {
  Eigen::MatrixXd x(6, 1);
  x << 0, 1, 2.5, 4, 7, 8;
  const auto sol = classical_mds(euclidean_distances(letters(6), x), 2);
  EXPECT_LT(sol.coordinates.col(1).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(sol.eigenvalues[1], 0.0, 1e-8);
}

TEST(ClassicalMds, BadDimension) {
  const auto d = random_dissimilarity(5, 1);
  EXPECT_ERRC(classical_mds(d, 0), Errc::BadDimension);
  EXPECT_ERRC(classical_mds(d, 5), Errc::BadDimension);
}

TEST(TopEigenpairs, MatchesDenseSolver) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto gen = seeded_engine(seed, 3);
    const Eigen::MatrixXd g = testing_support::normal_matrix(gen, 20, 20);
    const Eigen::MatrixXd a = (g + g.transpose()) / 2;
    const auto pairs = top_eigenpairs(a, 4);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const auto& ev = es.eigenvalues();  // ascending
    for (std::size_t p = 0; p < 4; ++p) {
      EXPECT_TRUE(pairs[p].converged);
      EXPECT_NEAR(pairs[p].value, ev(19 - static_cast<Eigen::Index>(p)), 1e-8);
      const Eigen::VectorXd resid = a * pairs[p].vector - pairs[p].value * pairs[p].vector;
      EXPECT_LT(resid.norm(), 1e-7);
    }
  }
}

TEST(RawStress, RigidMotionInvariant) {
  const auto d = random_dissimilarity(15, 2);
  const Eigen::MatrixXd x = planted(15, 2, 3);
  const double s = raw_stress(d, x);
  const double t = 0.7;
  Eigen::Matrix2d rot;
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  Eigen::MatrixXd moved = x * rot.transpose();
  moved.rowwise() += Eigen::RowVector2d(3, -2);
  EXPECT_NEAR(raw_stress(d, moved), s, 1e-9 * std::max(1.0, s));
  EXPECT_NEAR(raw_stress(euclidean_distances(letters(15), x), x), 0.0, 1e-20);
}

TEST(Smacof, StressNonIncreasing) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto init : {MdsInit::Classical, MdsInit::Random}) {
      SmacofOptions opt;
      opt.init = init;
      opt.seed = seed;
      const auto sol = smacof(random_dissimilarity(40, seed), 2, opt);
      ASSERT_GE(sol.stress_history.size(), 2u);
      for (std::size_t i = 1; i < sol.stress_history.size(); ++i)
        EXPECT_LE(sol.stress_history[i], sol.stress_history[i - 1] * (1 + 1e-12));
      EXPECT_EQ(sol.stress, sol.stress_history.back());
    }
  }
}

TEST(Smacof, ExactStartIsAFixedPoint) {
  const Eigen::MatrixXd x = planted(12, 2, 1);
  const auto dist = euclidean_distances(letters(12), x);
  SmacofOptions opt;
  opt.start = x;
  const auto sol = smacof(dist, 2, opt);
  EXPECT_LT(sol.stress, 1e-20);
  EXPECT_LE(sol.iterations, 1u);
}

TEST(Smacof, ImprovesOnClassicalStart) {
  const auto d = random_dissimilarity(30, 4);
  const auto cls = classical_mds(d, 2);
  const auto sm = smacof(d, 2);
  EXPECT_LE(sm.stress, raw_stress(d, cls.coordinates));
  EXPECT_EQ(sm.stress_history.front(), raw_stress(d, cls.coordinates));
}

TEST(Smacof, WrongStartShape) {
  SmacofOptions opt;
  opt.start = Eigen::MatrixXd::Zero(3, 2);
  EXPECT_ERRC(smacof(random_dissimilarity(5, 1), 2, opt), Errc::BadDimension);
}
