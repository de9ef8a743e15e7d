#ifndef AF_INTEGRATOR_HPP
#define AF_INTEGRATOR_HPP

#include "af/trajectory.hpp"
#include "af/types.hpp"
#include "af/weights.hpp"

namespace af {

enum class TerminationMode { entropy, attraction_certified, fixed_steps };

struct IntegratorConfig {
  double h = 0.1;
  long max_steps = 100000;
  double entropy_threshold = 1e-3;
  int record_every = 10;
  TerminationMode mode = TerminationMode::entropy;

  void validate() const;
};

/// Result of rounding a state to the nearest integral assignment and
/// checking the attraction-ball certificate around it.
struct CertifiedRound {
  bool certified = false;
  bool tie = false;        // some row had an argmax tie; no rounding guess made
  Matrix rounded;          // row-wise argmax labeling (rows with ties keep argmax of first max)
  double epsilon = 0.0;    // basin radius estimate at the rounded state (0 if not stable)
  double margin = 0.0;     // epsilon - max_i ||S_i - S*_i||_1
  double max_l1 = 0.0;     // max_i ||S_i - S*_i||_1
};

enum class TerminationReason { entropy, attraction_certified, fixed_steps, budget };

struct TerminationRecord {
  TerminationReason reason = TerminationReason::budget;
  long steps = 0;
  double time = 0.0;
  double final_entropy = 0.0;
  bool has_certificate = false;
  CertifiedRound certificate;
};

struct IntegrationResult {
  Trajectory trajectory;
  TerminationRecord termination;
  Matrix final_state;
};

/// One geometric Euler step: row i = exp_{S_i}(h (Omega S)_i).
/// Accepts closed-manifold states; zero entries propagate exactly.
Matrix euler_step(const Matrix& s, const WeightMatrix& omega, double h);

/// Iterates euler_step until the configured criterion fires or the step
/// budget runs out (reason "budget"; not an error). Samples are recorded at
/// step 0, every record_every steps, and at the final step.
IntegrationResult integrate(const Matrix& s0, const WeightMatrix& omega,
                            const IntegratorConfig& cfg);

/// Rounds row-wise and certifies: certified iff the rounded state is
/// exponentially stable and the state lies inside its estimated
/// attraction ball. Argmax ties fail certification with the tie flag.
CertifiedRound certified_round(const Matrix& s, const WeightMatrix& omega);

/// Max-abs endpoint gap at t_end between the h-trajectory and a
/// reference_h-trajectory (reference_h <= h/16).
double discretization_error_probe(const Matrix& s0, const WeightMatrix& omega,
                                  double h, double t_end, double reference_h);

const char* termination_reason_name(TerminationReason reason);

}  // namespace af

#endif
