#include "af/linear_flow.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "af/simplex.hpp"
#include "af/stability.hpp"

namespace af {

namespace {

void check_system(const LinearSystem& sys) {
  if (sys.omega.size() != sys.s_hat.rows())
    fail(ErrorCode::invalid_argument, "LinearSystem: Omega size does not match s_hat");
  if (!is_interior(sys.s_hat))
    fail(ErrorCode::invalid_argument, "LinearSystem: s_hat must be strictly interior");
  if (sys.w0.rows() != sys.s_hat.rows() || sys.w0.cols() != sys.s_hat.cols())
    fail(ErrorCode::invalid_argument, "LinearSystem: w0 shape mismatch");
  if (!is_interior(sys.w0))
    fail(ErrorCode::invalid_argument, "LinearSystem: w0 must be strictly interior");
  if (sys.inhomogeneous && sys.b.size() != sys.dim())
    fail(ErrorCode::invalid_argument, "LinearSystem: b has wrong dimension");
}

void check_vector(const LinearSystem& sys, const Vector& v, const char* where) {
  if (v.size() != sys.dim())
    fail(ErrorCode::invalid_argument, std::string(where) + ": vector has wrong dimension");
}

Vector tangent_block_projection(const LinearSystem& sys, const Vector& v) {
  const int m = sys.vertices();
  const int n = sys.labels();
  Vector out = v;
  for (int i = 0; i < m; ++i) {
    const double mean = out.segment(i * n, n).mean();
    out.segment(i * n, n).array() -= mean;
  }
  return out;
}

}  // namespace

LinearSystem make_linear_system(const WeightMatrix& omega, const Matrix& s_hat,
                                const Vector& b, const Matrix& w0) {
  LinearSystem sys{omega, s_hat, b, w0, true};
  check_system(sys);
  const int n = sys.labels();
  for (int i = 0; i < sys.vertices(); ++i)
    if (std::abs(b.segment(i * n, n).sum()) > 1e-12)
      fail(ErrorCode::invalid_argument,
           "LinearSystem: b row-block sums must vanish within 1e-12");
  return sys;
}

LinearSystem make_homogeneous_system(const WeightMatrix& omega, const Matrix& s_hat,
                                     const Matrix& w0) {
  LinearSystem sys{omega, s_hat, Vector::Zero(s_hat.size()), w0, false};
  check_system(sys);
  return sys;
}

Vector laf_apply(const LinearSystem& sys, const Vector& v) {
  check_vector(sys, v, "laf_apply");
  const int m = sys.vertices();
  const int n = sys.labels();
  Vector out = Vector::Zero(sys.dim());
  for (int i = 0; i < m; ++i) {
    Vector mixed = Vector::Zero(n);
    for (const auto& e : sys.omega.row(i))
      mixed += e.value * v.segment(e.col * n, n);
    out.segment(i * n, n) = replicator_apply(sys.s_hat.row(i).transpose(), mixed);
  }
  if (sys.inhomogeneous) out += sys.b;
  return out;
}

Matrix laf_matrix(const LinearSystem& sys) {
  const int m = sys.vertices();
  const int n = sys.labels();
  if (static_cast<long>(m) * n > kDenseCap)
    fail(ErrorCode::resource_limit, "laf_matrix: m*n exceeds the dense cap");
  Matrix a = Matrix::Zero(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    const Vector si = sys.s_hat.row(i).transpose();
    const Matrix replicator = Matrix(si.asDiagonal()) - si * si.transpose();
    for (const auto& e : sys.omega.row(i))
      a.block(i * n, e.col * n, n, n) = e.value * replicator;
  }
  return a;
}

Homogenized homogenize(const LinearSystem& sys, const Vector& v0) {
  check_vector(sys, v0, "homogenize");
  Homogenized out;
  out.system = sys;
  out.system.inhomogeneous = false;
  out.system.b = Vector::Zero(sys.dim());
  if (!sys.inhomogeneous || sys.b.isZero(0.0)) {
    out.shifted_v0 = v0;
    out.shift = Vector::Zero(sys.dim());
    return out;
  }
  const Matrix a = laf_matrix(sys);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  const Vector pinv_b = cod.solve(sys.b);  // minimum-norm least-squares solution
  const double residual = (a * pinv_b - sys.b).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * (1.0 + sys.b.cwiseAbs().maxCoeff()))
    fail(ErrorCode::range_error,
         "homogenize: b is not in the range of A (least-squares residual " +
             std::to_string(residual) + ")");
  out.shifted_v0 = v0 + pinv_b;
  out.shift = -pinv_b;
  return out;
}

Vector rk4_propagate(const LinearSystem& sys, const Vector& v0, double t,
                     int steps) {
  check_vector(sys, v0, "rk4_propagate");
  if (steps < 1) fail(ErrorCode::invalid_argument, "rk4_propagate: steps must be >= 1");
  const double h = t / steps;
  Vector v = v0;
  for (int s = 0; s < steps; ++s) {
    const Vector k1 = laf_apply(sys, v);
    const Vector k2 = laf_apply(sys, v + 0.5 * h * k1);
    const Vector k3 = laf_apply(sys, v + 0.5 * h * k2);
    const Vector k4 = laf_apply(sys, v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

Vector propagate(const LinearSystem& sys, const Vector& v0, double t) {
  check_vector(sys, v0, "propagate");
  if (sys.inhomogeneous)
    fail(ErrorCode::invalid_argument, "propagate: homogenize the system first");
  if (t == 0.0) return v0;
  const Matrix a = laf_matrix(sys);
  Eigen::EigenSolver<Matrix> solver(a);
  bool diagonalizable = solver.info() == Eigen::Success;
  if (diagonalizable) {
    const auto& vectors = solver.eigenvectors();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(vectors);
    diagonalizable = lu.isInvertible();
    if (diagonalizable) {
      Eigen::VectorXcd coeff = lu.solve(v0.cast<std::complex<double>>());
      Eigen::VectorXcd propagated =
          vectors * (coeff.array() * (solver.eigenvalues().array() * t).exp()).matrix();
      if (propagated.imag().cwiseAbs().maxCoeff() <
          1e-6 * (1.0 + propagated.real().cwiseAbs().maxCoeff()))
        return propagated.real();
    }
  }
  // defective (or numerically unresolvable) eigenbasis
  return rk4_propagate(sys, v0, t, 1000);
}

LafSpectrumReport laf_spectrum_report(const LinearSystem& sys) {
  const Matrix a = laf_matrix(sys);
  LafSpectrumReport report;
  report.eigenvalues = dense_spectrum(a);
  Eigen::BDCSVD<Matrix> svd(a);
  const double rank_tol = 1e-10 * std::max(1.0, svd.singularValues()(0));
  report.rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > rank_tol) ++report.rank;
  report.nullspace_dim = sys.dim() - report.rank;
  report.all_real = true;
  for (const auto& z : report.eigenvalues) {
    if (std::abs(z.imag()) >= 1e-8) report.all_real = false;
    if (z.real() > 1e-9) ++report.positive;
    else if (z.real() < -1e-9) ++report.negative;
    else ++report.zero;
  }
  return report;
}

LiftResult lift_limit(const Matrix& direction, const Matrix& w0) {
  if (direction.rows() != w0.rows() || direction.cols() != w0.cols())
    fail(ErrorCode::invalid_argument, "lift_limit: shape mismatch");
  if (!is_interior(w0))
    fail(ErrorCode::invalid_argument, "lift_limit: base point must be strictly interior");
  const int m = static_cast<int>(direction.rows());
  const int n = static_cast<int>(direction.cols());
  LiftResult result;
  result.state = Matrix::Zero(m, n);
  for (int i = 0; i < m; ++i) {
    const double top = direction.row(i).maxCoeff();
    const double tol = 1e-12 * std::max(1.0, std::abs(top));
    double mass = 0.0;
    int hits = 0;
    for (int j = 0; j < n; ++j)
      if (top - direction(i, j) <= tol) {
        result.state(i, j) = w0(i, j);
        mass += w0(i, j);
        ++hits;
      }
    result.state.row(i) /= mass;
    if (hits > 1) result.tie_rows.push_back(i);
  }
  return result;
}

DominantDirection dominant_tangent_direction(const LinearSystem& sys) {
  const Matrix a = laf_matrix(sys);
  DominantDirection result;
  const int dim = sys.dim();
  // Shift so the largest-real-part eigenvalue dominates in modulus for real
  // spectra; bounded by the infinity norm.
  const double shift = 1.0 + a.cwiseAbs().rowwise().sum().maxCoeff();
  Vector x = Vector::LinSpaced(dim, 1.0, 2.0);
  x = tangent_block_projection(sys, x);
  x.normalize();
  const int max_iters = 100000;
  const double tol = 1e-10;
  for (int it = 0; it < max_iters; ++it) {
    Vector y = a * x + shift * x;
    y = tangent_block_projection(sys, y);
    const double norm = y.norm();
    if (!(norm > 0.0)) break;
    y /= norm;
    // fix orientation on the largest component so oscillating signs converge
    int lead;
    y.cwiseAbs().maxCoeff(&lead);
    if (y(lead) < 0.0) y = -y;
    const double delta = (y - x).cwiseAbs().maxCoeff();
    x = y;
    if (delta < tol) {
      result.converged = true;
      break;
    }
  }
  if (result.converged) {
    result.direction = x;
    result.eigenvalue = x.dot(a * x);
    const double residual = (a * x - result.eigenvalue * x).cwiseAbs().maxCoeff();
    if (residual > 1e-6 * (1.0 + std::abs(result.eigenvalue))) result.converged = false;
  }
  if (!result.converged) {
    // complex or clustered dominant pair; take the max-real-part tangent
    // eigenvector from the dense decomposition
    Eigen::EigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success)
      fail(ErrorCode::internal, "dominant_tangent_direction: eigensolver failed");
    int best = -1;
    for (int k = 0; k < dim; ++k) {
      Vector candidate = solver.eigenvectors().col(k).real();
      candidate = tangent_block_projection(sys, candidate);
      if (candidate.norm() < 1e-8) continue;  // nullspace direction
      if (best < 0 ||
          solver.eigenvalues()(k).real() > solver.eigenvalues()(best).real())
        best = k;
    }
    if (best < 0)
      fail(ErrorCode::internal, "dominant_tangent_direction: no tangent eigenvector found");
    Vector dir = solver.eigenvectors().col(best).real();
    dir = tangent_block_projection(sys, dir);
    dir.normalize();
    int lead;
    dir.cwiseAbs().maxCoeff(&lead);
    if (dir(lead) < 0.0) dir = -dir;
    result.direction = dir;
    result.eigenvalue = solver.eigenvalues()(best).real();
    result.used_fallback = true;
    result.converged = std::abs(solver.eigenvalues()(best).imag()) < 1e-8;
  }
  return result;
}

namespace {

// Dominant left eigenvector by inverse iteration at the known eigenvalue;
// the expansion coefficient of v0 along the dominant right eigenvector v1 is
// <u1, v0> / <u1, v1>, which differs from the orthogonal projection when A
// is not symmetric.
Vector dominant_left_eigenvector(const Matrix& a, double eigenvalue) {
  const int dim = static_cast<int>(a.rows());
  const Matrix shifted =
      a.transpose() - (eigenvalue + 1e-9) * Matrix::Identity(dim, dim);
  Eigen::PartialPivLU<Matrix> lu(shifted);
  Vector u = Vector::LinSpaced(dim, 0.5, 1.5).normalized();
  for (int it = 0; it < 4; ++it) {
    Vector next = lu.solve(u);
    const double norm = next.norm();
    if (!(norm > 0.0) || !next.allFinite()) break;
    u = next / norm;
  }
  return u;
}

}  // namespace

LimitPrediction laf_predict_limit(const LinearSystem& sys, const Vector& v0) {
  check_vector(sys, v0, "laf_predict_limit");
  const DominantDirection dominant = dominant_tangent_direction(sys);
  LimitPrediction prediction;
  if (dominant.converged) {
    const Vector left = dominant_left_eigenvector(laf_matrix(sys), dominant.eigenvalue);
    const double pairing = left.dot(dominant.direction);
    prediction.coefficient =
        std::abs(pairing) > 1e-12 ? left.dot(v0) / pairing : dominant.direction.dot(v0);
  }
  if (!dominant.converged || std::abs(prediction.coefficient) <= 1e-10) {
    prediction.determinate = false;
    return prediction;
  }
  const int m = sys.vertices();
  const int n = sys.labels();
  Matrix direction(m, n);
  const double sign = prediction.coefficient >= 0.0 ? 1.0 : -1.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      direction(i, j) = sign * dominant.direction(i * n + j) / sys.w0(i, j);
  LiftResult lifted = lift_limit(direction, sys.w0);
  prediction.state = std::move(lifted.state);
  prediction.tie_rows = std::move(lifted.tie_rows);
  prediction.determinate = true;
  std::vector<bool> unique;
  prediction.labels = argmax_labels(prediction.state, &unique);
  for (size_t i = 0; i < unique.size(); ++i)
    if (!unique[i]) prediction.labels[i] = -1;
  return prediction;
}

}  // namespace af
