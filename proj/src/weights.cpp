#include "af/weights.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "af/parallel.hpp"

namespace af {

namespace {

void sort_row(std::vector<WeightMatrix::Entry>& row) {
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.col < b.col; });
}

}  // namespace

WeightMatrix WeightMatrix::from_rows(std::vector<std::vector<Entry>> rows) {
  WeightMatrix w;
  const int m = static_cast<int>(rows.size());
  for (auto& row : rows) {
    sort_row(row);
    for (size_t e = 0; e < row.size(); ++e) {
      if (row[e].col < 0 || row[e].col >= m)
        fail(ErrorCode::invalid_argument, "WeightMatrix: column index out of range");
      if (e > 0 && row[e].col == row[e - 1].col)
        fail(ErrorCode::invalid_argument, "WeightMatrix: duplicate entry in row");
      if (!std::isfinite(row[e].value))
        fail(ErrorCode::invalid_argument, "WeightMatrix: non-finite weight");
    }
  }
  w.rows_ = std::move(rows);
  w.compute_flags();
  return w;
}

WeightMatrix WeightMatrix::from_triplets(int m, const std::vector<int>& rows,
                                         const std::vector<int>& cols,
                                         const std::vector<double>& values) {
  if (rows.size() != cols.size() || rows.size() != values.size())
    fail(ErrorCode::invalid_argument, "WeightMatrix: triplet arrays differ in length");
  std::vector<std::vector<Entry>> r(m);
  for (size_t t = 0; t < rows.size(); ++t) {
    if (rows[t] < 0 || rows[t] >= m)
      fail(ErrorCode::invalid_argument, "WeightMatrix: row index out of range");
    r[rows[t]].push_back({cols[t], values[t]});
  }
  return from_rows(std::move(r));
}

WeightMatrix WeightMatrix::from_dense(const Matrix& dense) {
  if (dense.rows() != dense.cols())
    fail(ErrorCode::invalid_argument, "WeightMatrix: dense matrix must be square");
  std::vector<std::vector<Entry>> rows(dense.rows());
  for (int i = 0; i < dense.rows(); ++i)
    for (int k = 0; k < dense.cols(); ++k)
      if (dense(i, k) != 0.0) rows[i].push_back({k, dense(i, k)});
  return from_rows(std::move(rows));
}

WeightMatrix WeightMatrix::from_factorization(const Vector& w,
                                              const Matrix& omega_hat_dense) {
  Matrix dense = w.cwiseInverse().asDiagonal() * omega_hat_dense;
  WeightMatrix out = from_dense(dense);
  out.attach_factorization(w, omega_hat_dense);
  return out;
}

std::vector<int> WeightMatrix::neighborhood_sizes() const {
  std::vector<int> sizes(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i)
    sizes[i] = static_cast<int>(rows_[i].size());
  return sizes;
}

Matrix WeightMatrix::apply(const Matrix& s) const {
  if (s.rows() != size())
    fail(ErrorCode::invalid_argument, "WeightMatrix::apply: dimension mismatch");
  Matrix out = Matrix::Zero(s.rows(), s.cols());
  parallel_for(size(), [&](int i) {
    for (const auto& e : rows_[i]) out.row(i) += e.value * s.row(e.col);
  });
  return out;
}

Vector WeightMatrix::apply(const Vector& p) const {
  if (p.size() != size())
    fail(ErrorCode::invalid_argument, "WeightMatrix::apply: dimension mismatch");
  Vector out = Vector::Zero(p.size());
  for (int i = 0; i < size(); ++i)
    for (const auto& e : rows_[i]) out(i) += e.value * p(e.col);
  return out;
}

Vector WeightMatrix::row_sums() const {
  Vector out = Vector::Zero(size());
  for (int i = 0; i < size(); ++i)
    for (const auto& e : rows_[i]) out(i) += e.value;
  return out;
}

Matrix WeightMatrix::dense() const {
  Matrix out = Matrix::Zero(size(), size());
  for (int i = 0; i < size(); ++i)
    for (const auto& e : rows_[i]) out(i, e.col) = e.value;
  return out;
}

double WeightMatrix::coeff(int i, int k) const {
  for (const auto& e : rows_[i])
    if (e.col == k) return e.value;
  return 0.0;
}

bool WeightMatrix::row_stochastic(double tol) const {
  if (!nonnegative_) return false;
  const Vector sums = row_sums();
  return ((sums.array() - 1.0).abs() < tol).all();
}

bool WeightMatrix::uniform_rows(double tol) const {
  for (const auto& row : rows_) {
    if (row.empty()) return false;
    for (const auto& e : row)
      if (std::abs(e.value - row.front().value) > tol) return false;
  }
  return true;
}

void WeightMatrix::attach_factorization(const Vector& w,
                                        const Matrix& omega_hat_dense) {
  const int m = size();
  if (w.size() != m || omega_hat_dense.rows() != m || omega_hat_dense.cols() != m)
    fail(ErrorCode::invalid_argument, "factorization: dimension mismatch");
  if ((w.array() <= 0.0).any())
    fail(ErrorCode::invalid_argument, "factorization: scaling w must be positive");
  if ((omega_hat_dense - omega_hat_dense.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    fail(ErrorCode::invalid_argument, "factorization: OmegaHat must be symmetric within 1e-12");
  const Matrix recon = w.cwiseInverse().asDiagonal() * omega_hat_dense;
  if ((recon - dense()).cwiseAbs().maxCoeff() > 1e-12)
    fail(ErrorCode::invalid_argument,
         "factorization: Omega != Diag(w)^{-1} OmegaHat within 1e-12");
  auto fac = std::make_shared<Factorization>();
  fac->w = w;
  fac->hat_rows.resize(m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      if (omega_hat_dense(i, k) != 0.0) fac->hat_rows[i].push_back({k, omega_hat_dense(i, k)});
  factorization_ = std::move(fac);
}

Matrix WeightMatrix::apply_hat(const Matrix& s) const {
  if (!factorization_)
    fail(ErrorCode::precondition, "apply_hat: no (w, OmegaHat) factorization attached");
  if (s.rows() != size())
    fail(ErrorCode::invalid_argument, "apply_hat: dimension mismatch");
  Matrix out = Matrix::Zero(s.rows(), s.cols());
  for (int i = 0; i < size(); ++i)
    for (const auto& e : factorization_->hat_rows[i]) out.row(i) += e.value * s.row(e.col);
  return out;
}

void WeightMatrix::compute_flags() {
  const int m = size();
  nonnegative_ = true;
  positive_diagonal_ = m > 0;
  std::set<std::pair<int, int>> pattern;
  for (int i = 0; i < m; ++i) {
    bool diag_positive = false;
    for (const auto& e : rows_[i]) {
      if (e.value < 0.0) nonnegative_ = false;
      if (e.col == i && e.value > 0.0) diag_positive = true;
      pattern.emplace(i, e.col);
    }
    if (!diag_positive) positive_diagonal_ = false;
  }
  symmetric_neighborhoods_ = true;
  for (const auto& [i, k] : pattern)
    if (!pattern.count({k, i})) {
      symmetric_neighborhoods_ = false;
      break;
    }
}

}  // namespace af
