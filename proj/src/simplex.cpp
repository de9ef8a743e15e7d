#include "af/simplex.hpp"

#include <cmath>
#include <limits>

#include "af/parallel.hpp"

namespace af {

Vector replicator_apply(const Vector& p, const Vector& x) {
  if (p.size() != x.size())
    fail(ErrorCode::invalid_argument,
         "replicator_apply: dimension mismatch between p and x");
  const double mean = p.dot(x);
  return p.cwiseProduct(x) - mean * p;
}

Vector project_tangent(const Vector& x) {
  return x.array() - x.mean();
}

Vector exp_map(const Vector& p, const Vector& v) {
  if (p.size() != v.size())
    fail(ErrorCode::invalid_argument, "exp_map: dimension mismatch");
  if (!v.allFinite())
    fail(ErrorCode::invalid_argument, "exp_map: non-finite tangent input");
  const double shift = v.maxCoeff();
  Vector w = p.cwiseProduct((v.array() - shift).exp().matrix());
  const double total = w.sum();
  if (!(total > 0.0))
    fail(ErrorCode::domain_error, "exp_map: base point has empty support");
  return w / total;
}

Vector inv_exp_map(const Vector& p, const Vector& q) {
  if (p.size() != q.size())
    fail(ErrorCode::invalid_argument, "inv_exp_map: dimension mismatch");
  if (!is_interior(p) || !is_interior(q))
    fail(ErrorCode::domain_error,
         "inv_exp_map: arguments must be interior simplex points");
  return project_tangent((q.array() / p.array()).log().matrix());
}

Matrix exp_map_rows(const Matrix& p, const Matrix& v) {
  if (p.rows() != v.rows() || p.cols() != v.cols())
    fail(ErrorCode::invalid_argument, "exp_map_rows: shape mismatch");
  Matrix out(p.rows(), p.cols());
  parallel_for(static_cast<int>(p.rows()), [&](int i) {
    out.row(i) = exp_map(p.row(i).transpose(), v.row(i).transpose()).transpose();
  });
  return out;
}

double avg_entropy(const Matrix& s) {
  const int m = static_cast<int>(s.rows());
  const int n = static_cast<int>(s.cols());
  if (m == 0 || n < 2)
    fail(ErrorCode::invalid_argument, "avg_entropy: need m >= 1 and n >= 2");
  double total = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = s(i, j);
      if (x > 0.0) total += x * std::log(x);
    }
  return -total / (m * std::log(static_cast<double>(n)));
}

double weighted_kl(const Matrix& s_star, const Matrix& s, const Vector& w) {
  if (s_star.rows() != s.rows() || s_star.cols() != s.cols())
    fail(ErrorCode::invalid_argument, "weighted_kl: shape mismatch");
  if (w.size() != s.rows() || (w.array() <= 0.0).any())
    fail(ErrorCode::invalid_argument, "weighted_kl: weights must be positive, one per row");
  double total = 0.0;
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) {
      const double a = s_star(i, j);
      if (a <= kSupportTol) continue;
      const double b = s(i, j);
      if (b <= kSupportTol) return std::numeric_limits<double>::infinity();
      total += w(i) * a * std::log(a / b);
    }
  return total;
}

double lyapunov_value(const Matrix& s, const WeightMatrix& omega_hat) {
  if (omega_hat.size() != s.rows())
    fail(ErrorCode::invalid_argument, "lyapunov_value: dimension mismatch");
  const int m = omega_hat.size();
  for (int i = 0; i < m; ++i)
    for (const auto& e : omega_hat.row(i))
      if (std::abs(e.value - omega_hat.coeff(e.col, i)) > 1e-10)
        fail(ErrorCode::invalid_argument,
             "lyapunov_value: matrix is not symmetric within 1e-10");
  return (s.array() * omega_hat.apply(s).array()).sum();
}

Matrix barycenter_state(int m, int n) {
  return Matrix::Constant(m, n, 1.0 / n);
}

Matrix integral_state(const std::vector<int>& labels, int n) {
  Matrix s = Matrix::Zero(static_cast<int>(labels.size()), n);
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (labels[i] < 0 || labels[i] >= n)
      fail(ErrorCode::invalid_argument, "integral_state: label out of range");
    s(i, labels[i]) = 1.0;
  }
  return s;
}

bool is_interior(const Vector& p) {
  return (p.array() > kSupportTol).all();
}

bool is_interior(const Matrix& s) {
  return (s.array() > kSupportTol).all();
}

bool on_closed_manifold(const Matrix& s, double tol) {
  if (!s.allFinite()) return false;
  if ((s.array() < -tol).any()) return false;
  for (int i = 0; i < s.rows(); ++i)
    if (std::abs(s.row(i).sum() - 1.0) > tol) return false;
  return true;
}

bool is_integral(const Matrix& s, double tol) {
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) {
      const double x = s(i, j);
      if (std::abs(x) > tol && std::abs(x - 1.0) > tol) return false;
    }
  return on_closed_manifold(s, tol);
}

std::vector<int> support(const Vector& p) {
  std::vector<int> idx;
  for (int j = 0; j < p.size(); ++j)
    if (p(j) > kSupportTol) idx.push_back(j);
  return idx;
}

std::vector<int> argmax_labels(const Matrix& s, std::vector<bool>* unique) {
  std::vector<int> labels(s.rows());
  if (unique) unique->assign(s.rows(), true);
  for (int i = 0; i < s.rows(); ++i) {
    int best = 0;
    for (int j = 1; j < s.cols(); ++j)
      if (s(i, j) > s(i, best)) best = j;
    labels[i] = best;
    if (unique)
      for (int j = 0; j < s.cols(); ++j)
        if (j != best && s(i, j) == s(i, best)) (*unique)[i] = false;
  }
  return labels;
}

double max_row_l1_distance(const Matrix& s, const Matrix& t) {
  if (s.rows() != t.rows() || s.cols() != t.cols())
    fail(ErrorCode::invalid_argument, "max_row_l1_distance: shape mismatch");
  double worst = 0.0;
  for (int i = 0; i < s.rows(); ++i)
    worst = std::max(worst, (s.row(i) - t.row(i)).cwiseAbs().sum());
  return worst;
}

}  // namespace af
