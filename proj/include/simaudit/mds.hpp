#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "simaudit/simspace.hpp"

namespace simaudit {

struct MdsSolution {
  Vocab vocab;
  Eigen::MatrixXd coordinates;  // |vocab| x dims
  std::size_t dims = 0;
  double stress = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  // Stress before the first update and after each one (SMACOF only).
  std::vector<double> stress_history;
  // Eigenvalues behind each coordinate axis (classical MDS only).
  std::vector<double> eigenvalues;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Largest `count` eigenpairs (algebraically) of a symmetric matrix by
/// shifted power iteration with Hotelling deflation. Each pair stops once
/// the residual |Av - lv| falls below tol * (Gershgorin bound).
std::vector<EigenPair> top_eigenpairs(const Eigen::MatrixXd& symmetric, std::size_t count,
                                      double tol = 1e-10, std::size_t max_iter = 200000);

/// Raw stress Σ_{i<j} (|x_i - x_j| - delta_ij)^2.
double raw_stress(const DistMatrix& target, const Eigen::MatrixXd& coordinates);

/// Torgerson scaling: double-centred -1/2 J D^2 J, top `dims` eigenpairs,
/// coordinates v * sqrt(l) with negative eigenvalues truncated to zero.
/// Throws BadDimension unless 1 <= dims < n.
MdsSolution classical_mds(const DistMatrix& dist, std::size_t dims);

enum class MdsInit { Classical, Random };

struct SmacofOptions {
  MdsInit init = MdsInit::Classical;
  std::uint64_t seed = 0;
  std::size_t max_iter = 500;
  double tol = 1e-6;
  // Overrides `init` when set.
  std::optional<Eigen::MatrixXd> start;
};

/// Stress majorization (Guttman transform, unit weights). Stops when the
/// relative stress decrease drops below tol or after max_iter updates.
MdsSolution smacof(const DistMatrix& dist, std::size_t dims, const SmacofOptions& options = {});

}  // namespace simaudit
