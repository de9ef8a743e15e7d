#ifndef AF_WEIGHTS_HPP
#define AF_WEIGHTS_HPP

#include <memory>
#include <vector>

#include "af/types.hpp"

namespace af {

/// Sparse m-by-m averaging-parameter matrix with explicit neighborhood
/// structure: row i holds the weights over N_i. Structural flags
/// (nonnegativity, positive diagonal, symmetric neighborhoods) are computed
/// at construction. An optional factorization Omega = Diag(w)^{-1} OmegaHat
/// with symmetric OmegaHat can be attached; it unlocks the Lyapunov
/// diagnostics and the symmetric eigenvalue path.
class WeightMatrix {
 public:
  struct Entry {
    int col;
    double value;
  };

  struct Factorization {
    Vector w;                                   // positive row scaling
    std::vector<std::vector<Entry>> hat_rows;   // symmetric OmegaHat
  };

  WeightMatrix() = default;

  static WeightMatrix from_rows(std::vector<std::vector<Entry>> rows);
  static WeightMatrix from_triplets(int m, const std::vector<int>& rows,
                                    const std::vector<int>& cols,
                                    const std::vector<double>& values);
  /// Keeps nonzero entries only.
  static WeightMatrix from_dense(const Matrix& dense);
  /// Builds Omega = Diag(w)^{-1} OmegaHat and attaches the factorization.
  static WeightMatrix from_factorization(const Vector& w,
                                         const Matrix& omega_hat_dense);

  int size() const { return static_cast<int>(rows_.size()); }
  const std::vector<Entry>& row(int i) const { return rows_[i]; }
  std::vector<int> neighborhood_sizes() const;

  /// Omega * S, row by row over the sparse neighborhoods.
  Matrix apply(const Matrix& s) const;
  Vector apply(const Vector& p) const;
  Vector row_sums() const;  // Omega 1_m
  Matrix dense() const;
  double coeff(int i, int k) const;

  bool nonnegative() const { return nonnegative_; }
  bool positive_diagonal() const { return positive_diagonal_; }
  bool symmetric_neighborhoods() const { return symmetric_neighborhoods_; }
  bool row_stochastic(double tol = 1e-12) const;
  /// True when every row has all its weights equal (uniform averaging).
  bool uniform_rows(double tol = 1e-12) const;

  const Factorization* factorization() const { return factorization_.get(); }
  /// Validates Omega = Diag(w)^{-1} OmegaHat within 1e-12 and symmetry of
  /// OmegaHat within 1e-12 before attaching.
  void attach_factorization(const Vector& w, const Matrix& omega_hat_dense);

  Matrix apply_hat(const Matrix& s) const;  // OmegaHat * S (factorization required)

 private:
  void compute_flags();

  std::vector<std::vector<Entry>> rows_;
  bool nonnegative_ = true;
  bool positive_diagonal_ = false;
  bool symmetric_neighborhoods_ = false;
  std::shared_ptr<const Factorization> factorization_;
};

}  // namespace af

#endif
