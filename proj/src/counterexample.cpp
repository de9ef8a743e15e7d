#include "af/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "af/flow.hpp"
#include "af/simplex.hpp"

namespace af {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFeasTol = 1e-12;

int gamma_count(int n) {
  // indices k with 1 <= k < n - k
  return (n - 1) / 2;
}

// p_k coefficient of P^k read from matrix position (i, j): k = i - j mod n,
// with k = 0 standing for P^n.
int cycle_power(int i, int j, int n) {
  int k = (i - j) % n;
  if (k < 0) k += n;
  return k == 0 ? n : k;
}

}  // namespace

void CirculantParams::validate() const {
  if (n < 2) fail(ErrorCode::invalid_argument, "CirculantParams: n must be >= 2");
  if (gamma.size() != gamma_count(n)) {
    std::ostringstream msg;
    msg << "CirculantParams: expected " << gamma_count(n) << " gamma value(s) for n=" << n;
    fail(ErrorCode::invalid_argument, msg.str());
  }
  if (std::abs(alpha + beta - 1.0) > kFeasTol)
    fail(ErrorCode::invalid_argument,
         "CirculantParams: constraint alpha + beta = 1 violated");
  if (alpha + beta / n < -kFeasTol)
    fail(ErrorCode::invalid_argument,
         "CirculantParams: constraint alpha + beta/n >= 0 violated");
  for (int k = 0; k < gamma.size(); ++k)
    if (beta / n < std::abs(gamma(k)) - kFeasTol) {
      std::ostringstream msg;
      msg << "CirculantParams: constraint beta/n >= |gamma_" << (k + 1) << "| violated";
      fail(ErrorCode::invalid_argument, msg.str());
    }
}

Vector circulant_mu(const CirculantParams& params) {
  params.validate();
  const int n = params.n;
  Vector mu = Vector::Constant(n, params.beta / n);
  mu(n - 1) += params.alpha;  // coefficient of P^n = I
  for (int k = 1; k <= params.gamma.size(); ++k) {
    mu(k - 1) += params.gamma(k - 1);
    mu(n - k - 1) -= params.gamma(k - 1);
  }
  return mu;
}

WeightMatrix circulant_from_params(const CirculantParams& params) {
  const Vector mu = circulant_mu(params);
  const int n = params.n;
  Matrix omega = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) omega(i, j) = mu(cycle_power(i, j, n) - 1);
  return WeightMatrix::from_dense(omega);
}

Vector representative_of(const Matrix& s, double tol) {
  if (s.rows() != s.cols())
    fail(ErrorCode::invalid_argument, "representative_of: state must be square");
  const int n = static_cast<int>(s.rows());
  Vector p(n);
  for (int k = 1; k <= n; ++k) p(k - 1) = s(0, (n - k) % n);
  double deviation = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      deviation = std::max(deviation,
                           std::abs(s(i, j) - p(cycle_power(i, j, n) - 1)));
  if (deviation > tol) {
    std::ostringstream msg;
    msg << "representative_of: state is not circulant (deviation " << deviation << ")";
    fail(ErrorCode::invalid_argument, msg.str());
  }
  return p;
}

ProductDiagnostic product_diagnostic(const Vector& p, const CirculantParams& params) {
  const WeightMatrix omega = circulant_from_params(params);
  if (p.size() != params.n)
    fail(ErrorCode::invalid_argument, "product_diagnostic: dimension mismatch");
  ProductDiagnostic diag;
  diag.pi = p.prod();
  diag.dpi_dt = diag.pi * (1.0 - params.n * p.dot(omega.apply(p)));
  const bool at_barycenter =
      (p.array() - 1.0 / params.n).abs().maxCoeff() <= kFeasTol;
  if (at_barycenter || params.alpha == 0.0) diag.predicted_sign = 0;
  else diag.predicted_sign = params.alpha > 0.0 ? -1 : 1;
  return diag;
}

Regime regime_classify(const CirculantParams& params) {
  params.validate();
  if (params.n != 3)
    fail(ErrorCode::unsupported, "regime_classify: case analysis covers n = 3 only");
  const double gamma = params.gamma(0);
  if (params.alpha < 0.0) return Regime::barycenter_sink;
  if (params.alpha == 0.0) return gamma == 0.0 ? Regime::frozen : Regime::periodic;
  if (params.alpha > std::abs(gamma)) return Regime::vertex_attractor;
  return Regime::boundary_spiral;
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::barycenter_sink: return "barycenter_sink";
    case Regime::frozen: return "frozen";
    case Regime::periodic: return "periodic";
    case Regime::vertex_attractor: return "vertex_attractor";
    case Regime::boundary_spiral: return "boundary_spiral";
  }
  return "unknown";
}

NonposDiagExample build_nonpos_diag_example() {
  Matrix omega(3, 3);
  omega << 0, 2, 2,
           1, 2, 1,
           1, 1, 2;
  omega /= 4.0;
  return {WeightMatrix::from_dense(omega)};
}

Matrix NonposDiagExample::equilibrium(double p) {
  if (p < 0.0 || p > 1.0)
    fail(ErrorCode::invalid_argument, "NonposDiagExample: p must lie in [0,1]");
  Matrix s(3, 2);
  s << p, 1.0 - p,
       1.0, 0.0,
       0.0, 1.0;
  return s;
}

std::array<double, 6> NonposDiagExample::spectrum(double p) {
  return {0.0, -0.5, -(p + 2.0) / 4.0, -p / 2.0, -(1.0 - p) / 2.0, -(3.0 - p) / 4.0};
}

double NonposDiagExample::distance_to_line(const Matrix& s) {
  if (s.rows() != 3 || s.cols() != 2)
    fail(ErrorCode::invalid_argument, "NonposDiagExample: state must be 3x2");
  const double p = std::clamp(s(0, 0), 0.0, 1.0);
  return (s - equilibrium(p)).cwiseAbs().maxCoeff();
}

WFlowDemo build_wflow_demo(const CirculantParams& params) {
  if (params.n != 3)
    fail(ErrorCode::unsupported, "build_wflow_demo: n = 3 only");
  WFlowDemo demo;
  demo.omega = circulant_from_params(params);
  demo.distances = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  return demo;
}

RepresentativeRun run_representative(const Vector& p0, const WeightMatrix& omega,
                                     const RepresentativeRunConfig& cfg) {
  if (omega.size() != p0.size())
    fail(ErrorCode::invalid_argument, "run_representative: dimension mismatch");
  if (!(cfg.h > 0.0) || cfg.max_steps < 1)
    fail(ErrorCode::invalid_argument, "run_representative: need h > 0 and max_steps >= 1");
  const int n = static_cast<int>(p0.size());
  const bool planar = n == 3;

  RepresentativeRun run;
  run.pi_initial = p0.prod();
  Vector p = p0;
  run.min_entry = p.minCoeff();

  // isometric embedding of the 3-simplex plane for the winding angle
  const auto angle_of = [](const Vector& q) {
    const double u = (q(0) - q(1)) / std::sqrt(2.0);
    const double v = (q(0) + q(1) - 2.0 * q(2)) / std::sqrt(6.0);
    return std::atan2(v, u);
  };
  double prev_angle = planar ? angle_of(p) : 0.0;
  double prev_section = n >= 2 ? p(0) - p(1) : 0.0;

  for (long step = 0; step < cfg.max_steps; ++step) {
    p = exp_map(p, cfg.h * omega.apply(p));
    ++run.steps;
    run.min_entry = std::min(run.min_entry, p.minCoeff());
    run.max_pi_drift = std::max(run.max_pi_drift, std::abs(p.prod() - run.pi_initial));
    if (planar) {
      const double angle = angle_of(p);
      double delta = angle - prev_angle;
      if (delta > kPi) delta -= 2.0 * kPi;
      if (delta < -kPi) delta += 2.0 * kPi;
      run.winding += delta;
      prev_angle = angle;
    }
    if (cfg.track_crossings) {
      const double section = p(0) - p(1);
      if (prev_section < 0.0 && section >= 0.0) {
        // linear interpolation of the crossing inside the step
        const double frac = prev_section / (prev_section - section);
        run.crossing_times.push_back((step + frac) * cfg.h);
        run.crossing_states.push_back(p);
      }
      prev_section = section;
    }
    if (cfg.stop_min_entry > 0.0 && p.minCoeff() < cfg.stop_min_entry) break;
  }
  run.winding = std::abs(run.winding);
  run.p_final = p;
  run.pi_final = p.prod();
  return run;
}

std::vector<SweepRow> parameter_sweep(
    const std::vector<std::pair<double, double>>& alpha_gamma, const Vector& p0,
    const RepresentativeRunConfig& cfg) {
  std::vector<SweepRow> rows;
  rows.reserve(alpha_gamma.size());
  for (const auto& [alpha, gamma] : alpha_gamma) {
    CirculantParams params{3, alpha, 1.0 - alpha, Vector::Constant(1, gamma)};
    const RepresentativeRun run =
        run_representative(p0, circulant_from_params(params), cfg);
    rows.push_back({alpha, gamma, regime_classify(params), run.pi_final, run.winding});
  }
  return rows;
}

}  // namespace af
