#ifndef AF_FLOW_HPP
#define AF_FLOW_HPP

#include "af/trajectory.hpp"
#include "af/types.hpp"
#include "af/weights.hpp"

namespace af {

/// Right-hand side of the S-flow: row i is R_{S_i} (Omega S)_i.
/// Rows sum to zero; zero entries of S stay exactly zero.
Matrix sflow_rhs(const Matrix& s, const WeightMatrix& omega);

/// Initial state of the S-flow: row i = softmax of -(Omega D)_i,
/// i.e. the lift of -Omega D at the barycenter. Strictly interior.
Matrix sflow_init(const Matrix& distances, const WeightMatrix& omega);

/// Similarity map: S_i(W) = lift at barycenter of
/// sum_k omega_ik (inv-lift(W_k) - D_k). Requires interior W.
Matrix similarity_map(const Matrix& w, const Matrix& distances,
                      const WeightMatrix& omega);

/// Assignment-flow field: row i is R_{W_i} S_i(W). Requires interior W.
Matrix assignment_rhs(const Matrix& w, const Matrix& distances,
                      const WeightMatrix& omega);

/// Single-simplex representative flow R_p(Omega p) for square Omega.
Vector representative_rhs(const Vector& p, const WeightMatrix& omega);

/// Streaming trapezoidal quadrature of the tangent-projected S-trajectory,
/// lifted at the barycenter. Feeding samples (t_k, S(t_k)) in time order
/// recovers W(t_k) from the S-parametrization.
class WFromSAccumulator {
 public:
  WFromSAccumulator(int m, int n);
  void add_sample(double t, const Matrix& s);
  Matrix current() const;  // W at the last ingested time
  long samples() const { return samples_; }

 private:
  Matrix integral_;
  Matrix prev_tangent_;
  double prev_time_ = 0.0;
  long samples_ = 0;
};

/// W at the final time of a stored S-trajectory (trapezoidal quadrature).
Matrix w_from_s_accumulate(const Trajectory& trajectory);

}  // namespace af

#endif
