#include "simaudit/mds.hpp"

#include <cmath>

#include "simaudit/error.hpp"
#include "simaudit/rng.hpp"

namespace simaudit {

namespace {

void check_dims(std::size_t n, std::size_t dims) {
  if (dims < 1 || dims >= n)
    fail(Errc::BadDimension, "target dimension " + std::to_string(dims) + " outside [1, " +
                                 std::to_string(n ? n - 1 : 0) + "]");
}

// Deterministic start vector with components along every eigenvector in
// general position.
Eigen::VectorXd start_vector(Eigen::Index n, std::size_t which) {
  Engine engine = seeded_engine(0x5eed, which);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = unit_uniform(engine) - 0.5;
  return v;
}

}  // namespace

std::vector<EigenPair> top_eigenpairs(const Eigen::MatrixXd& a, std::size_t count, double tol,
                                      std::size_t max_iter) {
  const Eigen::Index n = a.rows();
  // Shifting by the Gershgorin bound makes every eigenvalue non-negative, so
  // the dominant eigenvalue of the shifted matrix is the largest of `a`.
  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double scale = std::max(shift, 1e-300);
  std::vector<EigenPair> pairs;
  for (std::size_t p = 0; p < count; ++p) {
    Eigen::VectorXd v = start_vector(n, p);
    auto deflate = [&](Eigen::VectorXd& x) {
      for (const auto& q : pairs) x -= q.vector.dot(x) * q.vector;
    };
    deflate(v);
    v.normalize();
    EigenPair pair;
    for (std::size_t it = 1; it <= max_iter; ++it) {
      Eigen::VectorXd w = a * v + shift * v;
      deflate(w);
      const double norm = w.norm();
      if (norm == 0.0) break;
      v = w / norm;
      const Eigen::VectorXd av = a * v;
      pair.value = v.dot(av);
      pair.iterations = it;
      if ((av - pair.value * v).norm() <= tol * scale) {
        pair.converged = true;
        break;
      }
    }
    pair.vector = v;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

double raw_stress(const DistMatrix& target, const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = (x.row(i) - x.row(j)).norm() - target.values()(i, j);
      s += r * r;
    }
  return s;
}

MdsSolution classical_mds(const DistMatrix& dist, std::size_t dims) {
  const std::size_t n = dist.size();
  check_dims(n, dims);
  const Eigen::MatrixXd d2 = dist.values().array().square().matrix();
  // -1/2 J D^2 J without forming J.
  const Eigen::VectorXd row_mean = d2.rowwise().mean();
  const Eigen::RowVectorXd col_mean = d2.colwise().mean();
  const double grand = d2.mean();
  Eigen::MatrixXd b = d2;
  b.colwise() -= row_mean;
  b.rowwise() -= col_mean;
  b.array() += grand;
  b *= -0.5;
  b = 0.5 * (b + b.transpose()).eval();

  const auto pairs = top_eigenpairs(b, dims);
  MdsSolution sol;
  sol.vocab = dist.vocab();
  sol.dims = dims;
  sol.coordinates = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dims));
  for (std::size_t c = 0; c < dims; ++c) {
    sol.eigenvalues.push_back(pairs[c].value);
    if (pairs[c].value > 0.0)
      sol.coordinates.col(static_cast<Eigen::Index>(c)) = pairs[c].vector * std::sqrt(pairs[c].value);
    sol.iterations += pairs[c].iterations;
  }
  sol.stress = raw_stress(dist, sol.coordinates);
  return sol;
}

MdsSolution smacof(const DistMatrix& dist, std::size_t dims, const SmacofOptions& options) {
  const std::size_t n = dist.size();
  check_dims(n, dims);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(dims);

  Eigen::MatrixXd x;
  if (options.start) {
    if (options.start->rows() != rows || options.start->cols() != cols)
      fail(Errc::BadDimension, "SMACOF start configuration has the wrong shape");
    x = *options.start;
  } else if (options.init == MdsInit::Classical) {
    x = classical_mds(dist, dims).coordinates;
  } else {
    Engine engine = seeded_engine(options.seed, 0);
    x.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = 2.0 * unit_uniform(engine) - 1.0;
  }

  MdsSolution sol;
  sol.vocab = dist.vocab();
  sol.dims = dims;
  sol.seed = options.seed;
  double stress = raw_stress(dist, x);
  sol.stress_history.push_back(stress);

  const auto& delta = dist.values();
  Eigen::MatrixXd bmat(rows, rows);
  for (std::size_t it = 0; it < options.max_iter && stress > 0.0; ++it) {
    // Guttman transform X <- (1/n) B(X) X.
    bmat.setZero();
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = i + 1; j < rows; ++j) {
        const double dij = (x.row(i) - x.row(j)).norm();
        const double bij = dij > 0.0 ? -delta(i, j) / dij : 0.0;
        bmat(i, j) = bij;
        bmat(j, i) = bij;
      }
    for (Eigen::Index i = 0; i < rows; ++i) bmat(i, i) = -bmat.row(i).sum();
    x = (bmat * x) / static_cast<double>(n);

    const double next = raw_stress(dist, x);
    sol.stress_history.push_back(next);
    sol.iterations = it + 1;
    const double drop = stress - next;
    stress = next;
    if (drop <= options.tol * sol.stress_history[sol.stress_history.size() - 2]) break;
  }
  sol.coordinates = std::move(x);
  sol.stress = stress;
  return sol;
}

}  // namespace simaudit
