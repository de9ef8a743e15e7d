#ifndef AF_STABILITY_HPP
#define AF_STABILITY_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "af/types.hpp"
#include "af/weights.hpp"

namespace af {

// Dense Jacobians above this size are refused; only closed-form spectra
// remain available there.
inline constexpr int kDenseCap = 4096;
// Strictness margin for the stability inequalities; anything closer to
// equality than this counts as a tie.
inline constexpr double kStrictTol = 1e-12;

enum class StabilityClass {
  exp_stable,
  unstable,
  nonintegral_unstable,
  inconclusive,
};

struct EquilibriumCheck {
  bool is_equilibrium = false;
  double residual = 0.0;
};

struct IntegralEigenvalue {
  double value;
  int vertex;
  int label;  // label the eigendirection detaches from; j*(vertex) for the -<S*,(OmegaS*)> one
};

struct StabilityReport {
  Matrix equilibrium;
  double residual = 0.0;
  StabilityClass classification = StabilityClass::inconclusive;
  std::vector<std::complex<double>> spectrum;             // numeric, empty above the dense cap
  std::vector<IntegralEigenvalue> closed_form_spectrum;   // integral equilibria only
  std::optional<double> eps_est;
  std::optional<double> eps_unif;
  std::optional<Vector> rates;
};

/// Residual of the equilibrium criterion: max over i and j in supp(S_i) of
/// |(Omega S)_ij - <S_i, (Omega S)_i>|.
EquilibriumCheck is_equilibrium(const Matrix& s, const WeightMatrix& omega,
                                double tol = 1e-9);

/// Dense mn-by-mn Jacobian of the S-flow field at S, rows stacked row-wise:
/// blockdiag(B_i) + blockdiag(R_{S_i}) (Omega kron I_n).
Matrix jacobian(const Matrix& s, const WeightMatrix& omega);

/// Closed-form spectrum at an integral equilibrium: per vertex i the value
/// -<S*_i,(Omega S*)_i> plus (Omega S*)_ij - <S*_i,(Omega S*)_i> for each
/// off label j.
std::vector<IntegralEigenvalue> spectrum_integral(const Matrix& s_star,
                                                  const WeightMatrix& omega);

/// Closed-form eigenvector (row-stacked, length mn) for an entry of
/// spectrum_integral: e_i kron S*_i when label == j*(i), else
/// e_i kron (S*_i - e_label).
Vector integral_eigenvector(const IntegralEigenvalue& entry, const Matrix& s_star);

/// Closed-form spectrum at S* = (1/|J+|) 1_m 1_{J+}^T, |J+| >= 2, as a
/// multiset of mn values: per vertex n-|J+|+1 copies of -(Omega 1)_i/|J+|,
/// and |J+|-1 copies of lambda/|J+| for each lambda in sigma(Omega).
std::vector<std::complex<double>> spectrum_uniform(const std::vector<int>& j_plus,
                                                   int n, const WeightMatrix& omega);

/// Classification per the closed-form criteria; requires an equilibrium and
/// nonnegative Omega with positive diagonal.
StabilityReport classify(const Matrix& s_star, const WeightMatrix& omega);

/// Attraction-ball radius around a stable integral equilibrium:
/// min_i min_{j != j*} 2 ((OmegaS*)_{ij*} - (OmegaS*)_{ij}) /
/// ((Omega 1)_i + (OmegaS*)_{ij*} - (OmegaS*)_{ij}).
double eps_est(const Matrix& s_star, const WeightMatrix& omega);

/// Uniform-weight radius 2 / (1 + max_i |N_i|).
double eps_unif(const std::vector<int>& neighborhood_sizes);

/// Strict membership in the open polytope A(S*):
/// (Omega S)_ij < (Omega S)_{i j*(i)} for all i and j != j*(i).
bool in_attraction_polytope(const Matrix& s, const Matrix& s_star,
                            const WeightMatrix& omega);

/// Near-equilibrium convergence rates beta_i = min_{j != j*}
/// ((OmegaS*)_{ij*} - (OmegaS*)_{ij}); requires delta < eps_est.
Vector convergence_rates(const Matrix& s_star, const WeightMatrix& omega,
                         double delta);

/// Eigenvalues of a general square matrix (Hessenberg + shifted QR via the
/// dense solver).
std::vector<std::complex<double>> dense_spectrum(const Matrix& a);
/// sigma(Omega); uses the symmetric similarity reduction
/// Diag(w)^{-1/2} OmegaHat Diag(w)^{-1/2} when the factorization is present.
std::vector<std::complex<double>> omega_spectrum(const WeightMatrix& omega);

const char* stability_class_name(StabilityClass c);
std::string report_to_keyvalue(const StabilityReport& report);

}  // namespace af

#endif
