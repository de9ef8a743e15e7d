// Acceptance suite: runs every guarantee the library is built around and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "af/counterexample.hpp"
#include "af/flow.hpp"
#include "af/integrator.hpp"
#include "af/linear_flow.hpp"
#include "af/pipeline.hpp"
#include "af/simplex.hpp"
#include "af/stability.hpp"

using af::Matrix;
using af::Vector;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", index, name,
              detail.c_str());
  if (!ok) ++g_failures;
}

double spectrum_multiset_gap(std::vector<std::complex<double>> a,
                             std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return 1e9;
  auto key = [](const std::complex<double>& x, const std::complex<double>& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  double gap = 0.0;
  for (size_t k = 0; k < a.size(); ++k) gap = std::max(gap, std::abs(a[k] - b[k]));
  return gap;
}

af::WeightMatrix random_row_stochastic(std::mt19937& rng, int m) {
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  Matrix dense(m, m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) dense(i, k) = dist(rng);
    dense.row(i) /= dense.row(i).sum();
  }
  return af::WeightMatrix::from_dense(dense);
}

Matrix random_state(std::mt19937& rng, int m, int n) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  Matrix s(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) s(i, j) = dist(rng);
    s.row(i) /= s.row(i).sum();
  }
  return s;
}

// 1. closed-form Jacobian spectra along the vanishing-diagonal line
void criterion_line_spectra() {
  const auto start = std::chrono::steady_clock::now();
  const af::NonposDiagExample example = af::build_nonpos_diag_example();
  double worst = 0.0;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Matrix jac = af::jacobian(af::NonposDiagExample::equilibrium(p), example.omega);
    std::vector<std::complex<double>> expected;
    for (double v : af::NonposDiagExample::spectrum(p)) expected.emplace_back(v, 0.0);
    worst = std::max(worst, spectrum_multiset_gap(af::dense_spectrum(jac), expected));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(1, "line-of-equilibria spectra match the closed form",
         worst < 1e-10 && seconds < 1.0,
         "max multiset gap " + std::to_string(worst) + ", " + std::to_string(seconds) + " s");
}

// 2. reference spectra of the linearized flow for the two 2x2 instances
void criterion_laf_reference_spectra() {
  const Matrix shat = af::barycenter_state(2, 2);
  Matrix rotational(2, 2), exchange(2, 2);
  rotational << 1.0, 1.0, -1.0, 1.0;
  exchange << -0.5, 0.5, 0.5, -0.5;

  std::vector<std::complex<double>> expected_rot{
      {0.5, 0.5}, {0.5, -0.5}, {0.0, 0.0}, {0.0, 0.0}};
  std::vector<std::complex<double>> expected_exc{
      {-0.5, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};

  const double gap_rot = spectrum_multiset_gap(
      af::laf_spectrum_report(af::make_homogeneous_system(
                                  af::WeightMatrix::from_dense(rotational), shat, shat))
          .eigenvalues,
      expected_rot);
  const double gap_exc = spectrum_multiset_gap(
      af::laf_spectrum_report(af::make_homogeneous_system(
                                  af::WeightMatrix::from_dense(exchange), shat, shat))
          .eigenvalues,
      expected_exc);
  report(2, "reference spectra of the linearized flow", gap_rot < 1e-10 && gap_exc < 1e-10,
         "gaps " + std::to_string(gap_rot) + " / " + std::to_string(gap_exc));
}

// 3. basin radius estimates: exact 0.2 on the bundled instance, sampled
//    inclusion of the ball in the attraction polytope on random instances
void criterion_eps_estimates() {
  const af::WeightMatrix grid_omega = af::build_uniform_weights(af::tricolor_demo_grid());
  const auto input_labels = af::argmax_labels(af::tricolor_demo_features());
  std::vector<int> stabilized = input_labels;
  for (int rc : {2 * 12 + 2, 2 * 12 + 5, 5 * 12 + 2, 5 * 12 + 5,
                 6 * 12 + 6, 6 * 12 + 9, 9 * 12 + 6, 9 * 12 + 9})
    stabilized[rc] = 0;
  const Matrix star = af::integral_state(stabilized, 3);
  const double est = af::eps_est(star, grid_omega);
  const double unif = af::eps_unif(grid_omega.neighborhood_sizes());
  const bool exact = std::abs(est - 0.2) < 1e-12 && std::abs(unif - 0.2) < 1e-12;

  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  long violations = 0;
  for (int instance = 0; instance < 5; ++instance) {
    const int m = 3 + instance % 3;
    Matrix dense(m, m);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) dense(i, k) = 0.3 * dist(rng) / m;
      dense(i, i) = 0.5 + 0.5 * dist(rng);
      dense.row(i) /= dense.row(i).sum();
    }
    const af::WeightMatrix omega = af::WeightMatrix::from_dense(dense);
    std::vector<int> labels(m);
    for (int i = 0; i < m; ++i) labels[i] = static_cast<int>(rng() % 3);
    const Matrix target = af::integral_state(labels, 3);
    const double radius = af::eps_est(target, omega);
    for (int sample = 0; sample < 10000; ++sample) {
      Matrix s(m, 3);
      for (int i = 0; i < m; ++i) {
        Vector q(3);
        for (int j = 0; j < 3; ++j) q(j) = dist(rng);
        q /= q.sum();
        const double u = 0.4999 * radius * dist(rng);
        s.row(i) = (1.0 - u) * target.row(i) + u * q.transpose();
      }
      if (!af::in_attraction_polytope(s, target, omega)) ++violations;
    }
  }
  report(3, "basin radius estimates (exact 0.2 + sampled inclusion)",
         exact && violations == 0,
         "eps_est " + std::to_string(est) + ", eps_unif " + std::to_string(unif) +
             ", violations " + std::to_string(violations) + "/50000");
}

// 4. certified labeling of the bundled 12x12 tri-color instance
void criterion_tricolor_labeling() {
  const auto start = std::chrono::steady_clock::now();
  const Matrix features = af::tricolor_demo_features();
  const af::WeightMatrix omega = af::build_uniform_weights(af::tricolor_demo_grid());
  af::IntegratorConfig cfg;  // entropy threshold 1e-3
  const af::LabelingResult result =
      af::label(features, af::tricolor_demo_labels(), omega, cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto input_labels = af::argmax_labels(features);
  std::vector<int> flips;
  for (int i = 0; i < 144; ++i)
    if (result.labels[i] != input_labels[i]) flips.push_back(i);
  const std::vector<int> corners{2 * 12 + 2, 2 * 12 + 5, 5 * 12 + 2, 5 * 12 + 5,
                                 6 * 12 + 6, 6 * 12 + 9, 9 * 12 + 6, 9 * 12 + 9};
  const bool corner_flips = flips == corners;

  bool input_unstable = false;
  const af::StabilityReport input_report =
      af::classify(af::integral_state(input_labels, 3), omega);
  input_unstable = input_report.classification == af::StabilityClass::unstable;

  const bool ok = result.termination.reason == af::TerminationReason::entropy &&
                  result.certified() && result.certificate.max_l1 < 0.2 &&
                  corner_flips && input_unstable && seconds < 10.0;
  report(4, "bundled tri-color instance: certified corner flips", ok,
         "entropy steps " + std::to_string(result.termination.steps) + ", max l1 " +
             std::to_string(result.certificate.max_l1) + ", flips " +
             std::to_string(flips.size()) + ", input unstable " +
             (input_unstable ? "yes" : "no") + ", " + std::to_string(seconds) + " s");
}

// 5. representative-flow regimes: conservation, sink, vertex, spiral
void criterion_representative_regimes() {
  Vector p0(3);
  p0 << 0.36, 0.33, 0.31;

  af::RepresentativeRunConfig conserve_cfg;
  conserve_cfg.h = 1e-3;
  conserve_cfg.max_steps = 10000;
  const af::RepresentativeRun conserve = af::run_representative(
      p0, af::circulant_from_params({3, 0.0, 1.0, Vector::Constant(1, 1.0 / 3.0)}),
      conserve_cfg);
  const bool conservation = conserve.max_pi_drift < 1e-6;

  af::RepresentativeRunConfig cfg;
  cfg.h = 0.01;
  cfg.max_steps = 30000;
  const af::RepresentativeRun sink = af::run_representative(
      p0, af::circulant_from_params({3, -0.5, 1.5, Vector::Constant(1, 0.5)}), cfg);
  const bool to_barycenter = (sink.p_final.array() - 1.0 / 3.0).abs().maxCoeff() < 1e-6;

  const af::RepresentativeRun vertex = af::run_representative(
      p0, af::circulant_from_params({3, 0.2, 0.8, Vector::Constant(1, 0.1)}), cfg);
  double vertex_dist = 2.0;
  for (int j = 0; j < 3; ++j)
    vertex_dist = std::min(vertex_dist,
                           (vertex.p_final - Vector::Unit(3, j)).cwiseAbs().maxCoeff());
  const bool to_vertex = vertex_dist < 1e-6;

  af::RepresentativeRunConfig spiral_cfg;
  spiral_cfg.h = 0.01;
  spiral_cfg.max_steps = 200000;
  spiral_cfg.stop_min_entry = 1e-4;
  const af::RepresentativeRun spiral = af::run_representative(
      p0, af::circulant_from_params({3, 0.1, 0.9, Vector::Constant(1, 0.3)}), spiral_cfg);
  const bool spirals = spiral.p_final.minCoeff() < 1e-4 &&
                       spiral.winding > 4.0 * std::numbers::pi;

  report(5, "representative-flow regimes", conservation && to_barycenter && to_vertex && spirals,
         "pi drift " + std::to_string(conserve.max_pi_drift) + ", sink dist " +
             std::to_string((sink.p_final.array() - 1.0 / 3.0).abs().maxCoeff()) +
             ", vertex dist " + std::to_string(vertex_dist) + ", winding/(pi) " +
             std::to_string(spiral.winding / std::numbers::pi));
}

// 6. first-order convergence of the geometric Euler scheme
void criterion_integrator_order() {
  std::mt19937 rng(7);
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 3; ++trial) {
    const int m = 3, n = 3;
    const af::WeightMatrix omega = random_row_stochastic(rng, m);
    const Matrix s0 = random_state(rng, m, n);
    const double coarse = af::discretization_error_probe(s0, omega, 0.05, 1.0, 0.05 / 16);
    const double fine = af::discretization_error_probe(s0, omega, 0.025, 1.0, 0.025 / 16);
    const double ratio = coarse / fine;
    detail += (trial ? ", " : "") + std::to_string(ratio);
    ok = ok && ratio > 1.5 && ratio < 2.5;
  }
  report(6, "order-1 convergence of the geometric scheme", ok, "ratios " + detail);
}

// 7. equivalence of the direct flow and the reconstructed parametrization
void criterion_parametrization_equivalence() {
  std::mt19937 rng(21);
  const int m = 4, n = 3;
  const af::WeightMatrix omega = random_row_stochastic(rng, m);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  Matrix d(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = dist(rng);

  const double h = 1e-3;
  const int steps = 2000;  // t = 2
  Matrix w = af::barycenter_state(m, n);
  for (int k = 0; k < steps; ++k)
    w = af::exp_map_rows(w, h * af::similarity_map(w, d, omega));

  Matrix s = af::sflow_init(d, omega);
  af::WFromSAccumulator acc(m, n);
  acc.add_sample(0.0, s);
  for (int k = 1; k <= steps; ++k) {
    s = af::euler_step(s, omega, h);
    acc.add_sample(k * h, s);
  }
  const double gap = (w - acc.current()).cwiseAbs().maxCoeff();
  report(7, "parametrization equivalence at t = 2", gap < 1e-4,
         "max-abs gap " + std::to_string(gap));
}

// 8. Jacobian against central finite differences
void criterion_jacobian_fd() {
  std::mt19937 rng(31);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3;          // mn <= 12 <= 36
    const int n = 2 + (trial / 3) % 2;
    const af::WeightMatrix omega = random_row_stochastic(rng, m);
    const Matrix s = random_state(rng, m, n);
    const Matrix analytic = af::jacobian(s, omega);

    const double step = 1e-6;
    Matrix numeric(m * n, m * n);
    for (int col = 0; col < m * n; ++col) {
      Matrix plus = s, minus = s;
      plus(col / n, col % n) += step;
      minus(col / n, col % n) -= step;
      const Matrix df =
          (af::sflow_rhs(plus, omega) - af::sflow_rhs(minus, omega)) / (2.0 * step);
      for (int row = 0; row < m * n; ++row) numeric(row, col) = df(row / n, row % n);
    }
    worst_rel = std::max(worst_rel,
                         (analytic - numeric).cwiseAbs().maxCoeff() /
                             (1.0 + analytic.cwiseAbs().maxCoeff()));
  }
  report(8, "Jacobian matches finite differences", worst_rel < 1e-6,
         "worst relative gap " + std::to_string(worst_rel));
}

// 9. monotone quadratic form along trajectories of factorized weights
void criterion_lyapunov_monotonicity() {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  long dips = 0;
  double worst_dip = 0.0;
  for (int instance = 0; instance < 10; ++instance) {
    const int m = 4, n = 3;
    Matrix hat(m, m);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k <= i; ++k) hat(i, k) = hat(k, i) = dist(rng);
    hat /= hat.cwiseAbs().maxCoeff() * m;
    Vector scale(m);
    for (int i = 0; i < m; ++i) scale(i) = 0.5 + std::abs(dist(rng));
    const af::WeightMatrix omega = af::WeightMatrix::from_factorization(scale, hat);
    const af::WeightMatrix hat_only = af::WeightMatrix::from_dense(hat);

    Matrix s = random_state(rng, m, n);
    double prev = af::lyapunov_value(s, hat_only);
    for (int k = 0; k < 10000; ++k) {
      s = af::euler_step(s, omega, 1e-3);
      const double value = af::lyapunov_value(s, hat_only);
      if (value < prev - 1e-8) {
        ++dips;
        worst_dip = std::max(worst_dip, prev - value);
      }
      prev = value;
    }
  }
  report(9, "Lyapunov monotonicity along trajectories", dips == 0,
         "dips " + std::to_string(dips) + ", worst " + std::to_string(worst_dip));
}

// 10. dominant-eigenvector prediction of the lifted integral limit
void criterion_laf_limit_prediction() {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  int valid = 0, agreed = 0;
  for (int trial = 0; trial < 40 && valid < 10; ++trial) {
    const int m = 3, n = 3;
    Matrix hat(m, m);
    std::uniform_real_distribution<double> udist(0.0, 1.0);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k <= i; ++k) hat(i, k) = hat(k, i) = udist(rng);
    hat += 0.5 * Matrix::Identity(m, m);
    Vector scale(m);
    for (int i = 0; i < m; ++i) scale(i) = 0.5 + 1.5 * udist(rng);
    const af::WeightMatrix omega = af::WeightMatrix::from_factorization(scale, hat);

    Matrix d(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = dist(rng);
    const Matrix shat = af::sflow_init(d, omega);
    Vector b(m * n);
    const Matrix od = omega.apply(d);
    for (int i = 0; i < m; ++i)
      b.segment(i * n, n) =
          af::replicator_apply(shat.row(i).transpose(), (-od.row(i)).transpose());

    const af::LinearSystem sys = af::make_linear_system(omega, shat, b, shat);
    const af::Homogenized hom = af::homogenize(sys, Vector::Zero(m * n));
    const af::LimitPrediction prediction =
        af::laf_predict_limit(hom.system, hom.shifted_v0);
    if (!prediction.determinate || !prediction.tie_rows.empty()) continue;
    ++valid;

    Vector v = Vector::Zero(m * n);
    double t = 0.0;
    while (v.cwiseAbs().maxCoeff() < 1e8 && t < 400.0) {
      v = af::rk4_propagate(sys, v, 2.0, 200);
      t += 2.0;
    }
    Matrix lifted(m, n);
    for (int i = 0; i < m; ++i)
      lifted.row(i) =
          af::exp_map(shat.row(i).transpose(),
                      (v.segment(i * n, n).array() / shat.row(i).transpose().array())
                          .matrix())
              .transpose();
    if (af::argmax_labels(lifted) == prediction.labels) ++agreed;
  }
  report(10, "linear-flow limit prediction", valid == 10 && agreed == 10,
         std::to_string(agreed) + "/" + std::to_string(valid) + " agreements");
}

}  // namespace

int main() {
  criterion_line_spectra();
  criterion_laf_reference_spectra();
  criterion_eps_estimates();
  criterion_tricolor_labeling();
  criterion_representative_regimes();
  criterion_integrator_order();
  criterion_parametrization_equivalence();
  criterion_jacobian_fd();
  criterion_lyapunov_monotonicity();
  criterion_laf_limit_prediction();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
