#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "simaudit/corpus.hpp"
#include "simaudit/error.hpp"
#include "simaudit/rng.hpp"
#include "simaudit/simspace.hpp"

namespace testing_support {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "simaudit_";
    if (info) name += std::string(info->test_suite_name()) + "_" + info->name();
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline simaudit::Vocab letters(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
  return simaudit::Vocab(labels);
}

inline Eigen::MatrixXd normal_matrix(simaudit::Engine& gen, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = simaudit::standard_normal(gen);
  return m;
}

inline simaudit::EmbeddingSet random_set(std::size_t n, std::size_t dim, std::uint64_t seed) {
  auto gen = simaudit::seeded_engine(seed, 1);
  return simaudit::EmbeddingSet(letters(n), normal_matrix(gen, n, dim), "rand");
}

// Symmetric matrix with unit diagonal and uniform off-diagonal entries.
inline simaudit::SimMatrix random_sim(std::size_t n, std::uint64_t seed) {
  auto gen = simaudit::seeded_engine(seed, 2);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) m(i, j) = m(j, i) = simaudit::unit_uniform(gen);
  return simaudit::SimMatrix(letters(n), m, simaudit::SimKind::Cosine);
}

}  // namespace testing_support

#define EXPECT_ERRC(stmt, errc)                                     \
  do {                                                              \
    try {                                                           \
      stmt;                                                         \
      ADD_FAILURE() << "expected " << simaudit::to_string(errc);    \
    } catch (const simaudit::Error& e) {                            \
      EXPECT_EQ(e.code(), errc) << e.what();                        \
    }                                                               \
  } while (0)
