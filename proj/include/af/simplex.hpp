#ifndef AF_SIMPLEX_HPP
#define AF_SIMPLEX_HPP

#include <vector>

#include "af/types.hpp"
#include "af/weights.hpp"

namespace af {

/// R_p x = p.*x - <p,x> p. Never materializes the n-by-n replicator matrix.
Vector replicator_apply(const Vector& p, const Vector& x);

/// Orthogonal projection onto the tangent space: subtracts the mean.
Vector project_tangent(const Vector& x);

/// Lifting map exp_p(v) = p e^v / <p, e^v>, computed with max-subtraction.
/// Invariant under shifts v -> v + c 1_n.
Vector exp_map(const Vector& p, const Vector& v);

/// Inverse lift exp_p^{-1}(q) = project_tangent(log(q/p)); p, q interior.
Vector inv_exp_map(const Vector& p, const Vector& q);

/// Row-wise exp_map over a state; rows of v need not be tangent.
Matrix exp_map_rows(const Matrix& p, const Matrix& v);

/// Normalized average entropy in [0,1]: -(1/(m log n)) sum S log S.
double avg_entropy(const Matrix& s);

/// Sum_i w_i KL(Sstar_i, S_i); +infinity when supp(Sstar) is not contained
/// in supp(S).
double weighted_kl(const Matrix& s_star, const Matrix& s, const Vector& w);

/// <S, OmegaHat S>; requires a symmetric OmegaHat.
double lyapunov_value(const Matrix& s, const WeightMatrix& omega_hat);

// State helpers.
Matrix barycenter_state(int m, int n);
Matrix integral_state(const std::vector<int>& labels, int n);
bool is_interior(const Vector& p);
bool is_interior(const Matrix& s);
bool on_closed_manifold(const Matrix& s, double tol = 1e-9);
bool is_integral(const Matrix& s, double tol = 1e-9);
std::vector<int> support(const Vector& p);
/// Per-row argmax; unique[i] is false when the row max is attained twice.
std::vector<int> argmax_labels(const Matrix& s, std::vector<bool>* unique = nullptr);
/// max_i || S_i - T_i ||_1
double max_row_l1_distance(const Matrix& s, const Matrix& t);

}  // namespace af

#endif
