#include "af/integrator.hpp"

#include <cmath>
#include <limits>

#include "af/parallel.hpp"
#include "af/simplex.hpp"
#include "af/stability.hpp"

namespace af {

namespace {

void validate_step_input(const Matrix& s, const WeightMatrix& omega, double h) {
  if (omega.size() != s.rows())
    fail(ErrorCode::invalid_argument, "euler_step: Omega size does not match vertex count");
  if (!(h > 0.0)) fail(ErrorCode::invalid_argument, "euler_step: step size must be positive");
  if (!on_closed_manifold(s))
    fail(ErrorCode::domain_error, "euler_step: state is not on the closed manifold");
}

Trajectory::Diagnostics sample_diagnostics(const Matrix& s, const WeightMatrix& omega) {
  Trajectory::Diagnostics d;
  d.avg_entropy = avg_entropy(s);
  d.lyapunov = omega.factorization()
                   ? (s.array() * omega.apply_hat(s).array()).sum()
                   : std::numeric_limits<double>::quiet_NaN();
  d.min_rowmax = s.rowwise().maxCoeff().minCoeff();
  return d;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(h > 0.0)) fail(ErrorCode::invalid_argument, "IntegratorConfig: h must be positive");
  if (max_steps < 1) fail(ErrorCode::invalid_argument, "IntegratorConfig: max_steps must be >= 1");
  if (!(entropy_threshold > 0.0 && entropy_threshold < 1.0))
    fail(ErrorCode::invalid_argument, "IntegratorConfig: entropy_threshold must lie in (0,1)");
  if (record_every < 1)
    fail(ErrorCode::invalid_argument, "IntegratorConfig: record_every must be >= 1");
}

Matrix euler_step(const Matrix& s, const WeightMatrix& omega, double h) {
  validate_step_input(s, omega, h);
  return exp_map_rows(s, h * omega.apply(s));
}

CertifiedRound certified_round(const Matrix& s, const WeightMatrix& omega) {
  CertifiedRound result;
  std::vector<bool> unique;
  const std::vector<int> labels = argmax_labels(s, &unique);
  result.rounded = integral_state(labels, static_cast<int>(s.cols()));
  result.max_l1 = max_row_l1_distance(s, result.rounded);
  result.epsilon = 0.0;
  result.margin = -result.max_l1;
  for (bool u : unique)
    if (!u) result.tie = true;
  // a tie leaves the rounding ambiguous; weights outside the nonnegative,
  // positive-diagonal class carry no certificate at all
  if (result.tie || !omega.nonnegative() || !omega.positive_diagonal()) return result;

  // strict stability margins of the rounded labeling; cheaper than a full
  // classification (no spectrum), which matters on the per-check path
  const Matrix os = omega.apply(result.rounded);
  bool stable = true;
  for (int i = 0; i < os.rows() && stable; ++i)
    for (int j = 0; j < os.cols(); ++j)
      if (j != labels[i] && os(i, labels[i]) - os(i, j) <= kStrictTol) {
        stable = false;
        break;
      }
  if (!stable) return result;

  result.epsilon = eps_est(result.rounded, omega);
  result.margin = result.epsilon - result.max_l1;
  result.certified = result.max_l1 < result.epsilon;
  return result;
}

IntegrationResult integrate(const Matrix& s0, const WeightMatrix& omega,
                            const IntegratorConfig& cfg) {
  cfg.validate();
  if (!on_closed_manifold(s0))
    fail(ErrorCode::domain_error, "integrate: initial state is not on the closed manifold");

  IntegrationResult result;
  Matrix s = s0;
  long step = 0;
  double entropy = avg_entropy(s);
  bool done = false;
  TerminationReason reason = TerminationReason::budget;

  auto record = [&](long at_step) {
    result.trajectory.times.push_back(at_step * cfg.h);
    result.trajectory.states.push_back(s);
    result.trajectory.diagnostics.push_back(sample_diagnostics(s, omega));
  };
  record(0);

  auto check_criterion = [&]() {
    switch (cfg.mode) {
      case TerminationMode::entropy:
        if (entropy < cfg.entropy_threshold) {
          reason = TerminationReason::entropy;
          return true;
        }
        return false;
      case TerminationMode::attraction_certified: {
        if (step % cfg.record_every != 0) return false;
        CertifiedRound round = certified_round(s, omega);
        if (round.certified) {
          reason = TerminationReason::attraction_certified;
          result.termination.certificate = std::move(round);
          result.termination.has_certificate = true;
          return true;
        }
        return false;
      }
      case TerminationMode::fixed_steps:
        return false;
    }
    return false;
  };

  if (cfg.mode != TerminationMode::fixed_steps) done = check_criterion();
  while (!done && step < cfg.max_steps) {
    s = euler_step(s, omega, cfg.h);
    ++step;
    entropy = avg_entropy(s);
    if (step % cfg.record_every == 0 && step != cfg.max_steps) record(step);
    if (cfg.mode != TerminationMode::fixed_steps) done = check_criterion();
  }
  if (step % cfg.record_every != 0 || step == cfg.max_steps || done) {
    if (result.trajectory.times.back() < step * cfg.h) record(step);
  }

  if (!done && cfg.mode == TerminationMode::fixed_steps)
    reason = TerminationReason::fixed_steps;

  result.termination.reason = reason;
  result.termination.steps = step;
  result.termination.time = step * cfg.h;
  result.termination.final_entropy = entropy;
  if (!result.termination.has_certificate) {
    result.termination.certificate = certified_round(s, omega);
    result.termination.has_certificate = true;
  }
  result.final_state = std::move(s);
  return result;
}

double discretization_error_probe(const Matrix& s0, const WeightMatrix& omega,
                                  double h, double t_end, double reference_h) {
  if (!(h > 0.0) || !(reference_h > 0.0) || !(t_end > 0.0))
    fail(ErrorCode::invalid_argument, "discretization_error_probe: positive h, reference_h, t_end required");
  // reference_h == h is the degenerate self-comparison (gap exactly 0);
  // anything else must be a genuinely finer reference
  if (reference_h != h && reference_h > h / 16.0 + 1e-15)
    fail(ErrorCode::invalid_argument, "discretization_error_probe: reference_h must be <= h/16");
  const double steps_f = t_end / h;
  const long steps = std::lround(steps_f);
  if (std::abs(steps_f - steps) > 1e-9)
    fail(ErrorCode::invalid_argument, "discretization_error_probe: t_end must be a multiple of h");
  const double ref_steps_f = t_end / reference_h;
  const long ref_steps = std::lround(ref_steps_f);
  if (std::abs(ref_steps_f - ref_steps) > 1e-6)
    fail(ErrorCode::invalid_argument, "discretization_error_probe: t_end must be a multiple of reference_h");

  Matrix coarse = s0;
  for (long k = 0; k < steps; ++k) coarse = euler_step(coarse, omega, h);
  Matrix fine = s0;
  for (long k = 0; k < ref_steps; ++k) fine = euler_step(fine, omega, reference_h);
  return (coarse - fine).cwiseAbs().maxCoeff();
}

const char* termination_reason_name(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::entropy: return "entropy";
    case TerminationReason::attraction_certified: return "attraction_certified";
    case TerminationReason::fixed_steps: return "fixed_steps";
    case TerminationReason::budget: return "budget";
  }
  return "unknown";
}

}  // namespace af
