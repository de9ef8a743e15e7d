#ifndef AF_COUNTEREXAMPLE_HPP
#define AF_COUNTEREXAMPLE_HPP

#include <array>
#include <utility>
#include <vector>

#include "af/types.hpp"
#include "af/weights.hpp"

namespace af {

/// Parameters of a doubly stochastic circulant matrix
/// mu = alpha e_n + (beta/n) 1_n + sum_k gamma_k (e_k - e_{n-k}),
/// Omega = sum_k mu_k P^k with P the n-cycle. Feasibility requires
/// alpha + beta = 1, alpha + beta/n >= 0 and beta/n >= |gamma_k|.
struct CirculantParams {
  int n = 3;
  double alpha = 0.0;
  double beta = 1.0;
  Vector gamma;  // rotation coefficients, one per index k < n/2

  void validate() const;  // names the violated inequality
};

WeightMatrix circulant_from_params(const CirculantParams& params);
Vector circulant_mu(const CirculantParams& params);

/// The unique p with S = sum_k p_k P^k, read off the first row; rejects
/// matrices farther than tol from the circulant set.
Vector representative_of(const Matrix& s, double tol = 1e-10);

struct ProductDiagnostic {
  double pi;              // prod_j p_j
  double dpi_dt;          // pi (1 - n <p, Omega p>)
  int predicted_sign;     // sign of d/dt pi away from the barycenter: -sign(alpha)
};

ProductDiagnostic product_diagnostic(const Vector& p, const CirculantParams& params);

enum class Regime {
  barycenter_sink,
  frozen,
  periodic,
  vertex_attractor,
  boundary_spiral,
};

/// Asymptotic regime of the representative flow for n = 3.
Regime regime_classify(const CirculantParams& params);
const char* regime_name(Regime regime);

/// The 3-vertex, 2-label system with a vanishing diagonal weight whose
/// equilibria form a line: Omega = (1/4) [[0,2,2],[1,2,1],[1,1,2]].
struct NonposDiagExample {
  WeightMatrix omega;
  /// S*(p) = [[p, 1-p], [1, 0], [0, 1]], p in [0,1].
  static Matrix equilibrium(double p);
  /// {0, -1/2, -(p+2)/4, -p/2, -(1-p)/2, -(3-p)/4}
  static std::array<double, 6> spectrum(double p);
  /// max-abs distance of a state from the equilibrium line.
  static double distance_to_line(const Matrix& s);
};

NonposDiagExample build_nonpos_diag_example();

/// Fixed symmetric distance matrix D = 1_{3x3} - I_3 plus the parametrized
/// circulant weights: the S-flow initialized from it stays circulant.
struct WFlowDemo {
  Matrix distances;
  WeightMatrix omega;
};

WFlowDemo build_wflow_demo(const CirculantParams& params);

struct RepresentativeRunConfig {
  double h = 0.01;
  long max_steps = 100000;
  double stop_min_entry = 0.0;  // stop once min_j p_j drops below (0 disables)
  bool track_crossings = false; // Poincare section p_1 = p_2, positive orientation
};

struct RepresentativeRun {
  Vector p_final;
  long steps = 0;
  double winding = 0.0;     // |unwrapped angle| around the barycenter (n = 3 only)
  double pi_initial = 0.0;
  double pi_final = 0.0;
  double max_pi_drift = 0.0;
  double min_entry = 1.0;   // min over the whole run
  std::vector<double> crossing_times;
  std::vector<Vector> crossing_states;
};

/// Geometric Euler integration of the representative flow p -> exp_p(h Omega p).
RepresentativeRun run_representative(const Vector& p0, const WeightMatrix& omega,
                                     const RepresentativeRunConfig& cfg);

struct SweepRow {
  double alpha;
  double gamma;
  Regime regime;
  double final_pi;
  double winding;
};

std::vector<SweepRow> parameter_sweep(const std::vector<std::pair<double, double>>& alpha_gamma,
                                      const Vector& p0,
                                      const RepresentativeRunConfig& cfg);

}  // namespace af

#endif
