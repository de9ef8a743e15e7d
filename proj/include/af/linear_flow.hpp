#ifndef AF_LINEAR_FLOW_HPP
#define AF_LINEAR_FLOW_HPP

#include <complex>
#include <vector>

#include "af/types.hpp"
#include "af/weights.hpp"

namespace af {

/// Linear assignment flow dVdt = A V + b with A = R_{S_hat} (Omega kron I_n),
/// operating on row-stacked mn vectors. s_hat must be strictly interior;
/// b lives in the product tangent space (row-block sums zero). w0 is the
/// base point for lifting tangent trajectories back to the manifold.
struct LinearSystem {
  WeightMatrix omega;
  Matrix s_hat;
  Vector b;
  Matrix w0;
  bool inhomogeneous = false;

  int vertices() const { return static_cast<int>(s_hat.rows()); }
  int labels() const { return static_cast<int>(s_hat.cols()); }
  int dim() const { return vertices() * labels(); }
};

LinearSystem make_linear_system(const WeightMatrix& omega, const Matrix& s_hat,
                                const Vector& b, const Matrix& w0);
LinearSystem make_homogeneous_system(const WeightMatrix& omega, const Matrix& s_hat,
                                     const Matrix& w0);

/// A v (+ b when the inhomogeneous flag is set), computed matrix-free
/// block-row-wise.
Vector laf_apply(const LinearSystem& sys, const Vector& v);

/// Dense materialization of A; refuses above the dense cap.
Matrix laf_matrix(const LinearSystem& sys);

struct Homogenized {
  LinearSystem system;   // same A, b = 0
  Vector shifted_v0;     // v0 + pinv(A) b
  Vector shift;          // -pinv(A) b
};

/// Reduces the inhomogeneous system to a homogeneous one via the
/// pseudoinverse shift. Requires b within 1e-8 of range(A).
Homogenized homogenize(const LinearSystem& sys, const Vector& v0);

/// Propagates the homogeneous system: eigen-expansion when A is
/// diagonalizable, dense RK4 time stepping (step t/1000) otherwise.
Vector propagate(const LinearSystem& sys, const Vector& v0, double t);
/// Classical RK4 on dVdt = A V (+ b); exposed as an independent oracle.
Vector rk4_propagate(const LinearSystem& sys, const Vector& v0, double t,
                     int steps);

struct LafSpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  int rank = 0;
  int nullspace_dim = 0;
  bool all_real = false;       // max |Im| < 1e-8
  int positive = 0;            // eigenvalue counts by real part (zero tol 1e-9)
  int zero = 0;
  int negative = 0;
};

LafSpectrumReport laf_spectrum_report(const LinearSystem& sys);

struct LiftResult {
  Matrix state;                // closed-manifold limit of exp_{w0}(t * direction)
  std::vector<int> tie_rows;   // rows whose argmax set is not a singleton
};

/// Limit of the lifted line t -> exp_{w0_i}(t d_i) per row: supported on the
/// argmax set of d_i with weights proportional to w0_i there. Pass V/W0 for
/// the lifted tangent flow.
LiftResult lift_limit(const Matrix& direction, const Matrix& w0);

struct DominantDirection {
  Vector direction;      // unit vector in the product tangent space
  double eigenvalue = 0.0;
  bool converged = false;
  bool used_fallback = false;  // dense eigendecomposition instead of power iteration
};

/// Direction of largest real-part eigenvalue of A restricted to the tangent
/// space: shifted power iteration with per-block deflation of the nullspace
/// directions, falling back to the dense solver.
DominantDirection dominant_tangent_direction(const LinearSystem& sys);

struct LimitPrediction {
  bool determinate = false;  // false on vanishing leading coefficient or complex dominance
  std::vector<int> labels;   // 0-based; -1 on tie rows
  Matrix state;
  std::vector<int> tie_rows;
  double coefficient = 0.0;  // projection of the initial value on the dominant direction
};

/// Predicted integral limit of the lifted flow from initial value v0
/// (pass the homogenized initial value for inhomogeneous systems).
LimitPrediction laf_predict_limit(const LinearSystem& sys, const Vector& v0);

}  // namespace af

#endif
