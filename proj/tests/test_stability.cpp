#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "af/counterexample.hpp"
#include "af/flow.hpp"
#include "af/pipeline.hpp"
#include "af/simplex.hpp"
#include "af/stability.hpp"
#include "doctest.h"

using af::Matrix;
using af::Vector;

namespace {

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

std::vector<double> sorted_real(const std::vector<std::complex<double>>& spec) {
  std::vector<double> out;
  for (const auto& z : spec) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

// multiset comparison by sorted real and imaginary parts
double spectrum_gap(std::vector<std::complex<double>> a,
                    std::vector<std::complex<double>> b) {
  REQUIRE(a.size() == b.size());
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

Matrix central_difference_jacobian(const Matrix& s, const af::WeightMatrix& omega) {
  const int m = static_cast<int>(s.rows());
  const int n = static_cast<int>(s.cols());
  const double step = 1e-6;
  Matrix jac(m * n, m * n);
  for (int col = 0; col < m * n; ++col) {
    Matrix plus = s, minus = s;
    plus(col / n, col % n) += step;
    minus(col / n, col % n) -= step;
    const Matrix df = (af::sflow_rhs(plus, omega) - af::sflow_rhs(minus, omega)) /
                      (2.0 * step);
    for (int row = 0; row < m * n; ++row) jac(row, col) = df(row / n, row % n);
  }
  return jac;
}

}  // namespace

TEST_CASE("is_equilibrium examples") {
  std::mt19937 rng(1);
  const af::WeightMatrix omega = random_row_stochastic(rng, 4);

  const auto integral = af::is_equilibrium(af::integral_state({0, 1, 2, 1}, 3), omega);
  CHECK(integral.is_equilibrium);
  CHECK(integral.residual == 0.0);

  // S* = (1/|J+|) 1 1_{J+}^T with J+ = {0,1}, n = 3
  Matrix half = Matrix::Zero(4, 3);
  half.col(0).setConstant(0.5);
  half.col(1).setConstant(0.5);
  CHECK(af::is_equilibrium(half, omega).is_equilibrium);

  Matrix bumped = af::barycenter_state(4, 3);
  bumped(1, 0) += 0.1;
  bumped.row(1) /= bumped.row(1).sum();
  CHECK_FALSE(af::is_equilibrium(bumped, omega).is_equilibrium);
  CHECK(af::is_equilibrium(bumped, omega).residual > 1e-3);
}

TEST_CASE("jacobian agrees with central differences on random interior states") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + (trial / 3) % 2;
    const af::WeightMatrix omega = random_row_stochastic(rng, m);
    const Matrix s = random_state(rng, m, n);
    const Matrix analytic = af::jacobian(s, omega);
    const Matrix numeric = central_difference_jacobian(s, omega);
    const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
    CHECK((analytic - numeric).cwiseAbs().maxCoeff() < 1e-6 * scale);
  }
}

TEST_CASE("jacobian is block diagonal at integral states") {
  std::mt19937 rng(3);
  const af::WeightMatrix omega = random_row_stochastic(rng, 3);
  const Matrix star = af::integral_state({2, 0, 1}, 3);
  const Matrix jac = af::jacobian(star, omega);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      if (i == k) continue;
      CHECK(jac.block(i * 3, k * 3, 3, 3).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("jacobian refuses sizes above the dense cap") {
  const af::WeightMatrix omega =
      af::build_uniform_weights({40, 40, 1});  // 1600 vertices
  const Matrix star = af::barycenter_state(1600, 3);  // mn = 4800 > 4096
  CHECK_THROWS_AS(af::jacobian(star, omega), af::Error);
}

TEST_CASE("vanishing-diagonal example spectrum at p = 1/2") {
  const af::NonposDiagExample example = af::build_nonpos_diag_example();
  const Matrix star = af::NonposDiagExample::equilibrium(0.5);
  const auto numeric = af::dense_spectrum(af::jacobian(star, example.omega));
  std::vector<std::complex<double>> expected;
  for (double v : {0.0, -0.5, -0.625, -0.25, -0.25, -0.625}) expected.emplace_back(v, 0.0);
  CHECK(spectrum_gap(numeric, expected) < 1e-10);
}

TEST_CASE("spectrum_integral closed forms") {
  // 2x2 identity weights at the identity labeling: all eigenvalues -1
  const af::WeightMatrix eye = af::WeightMatrix::from_dense(Matrix::Identity(2, 2));
  const auto spec = af::spectrum_integral(af::integral_state({0, 1}, 2), eye);
  REQUIRE(spec.size() == 4);
  for (const auto& e : spec) CHECK(e.value == doctest::Approx(-1.0));

  // constant labeling with row-stochastic weights: -1 per vertex and
  // (OmegaS*)_ij - 1 < 0 for the off labels
  std::mt19937 rng(4);
  const af::WeightMatrix omega = random_row_stochastic(rng, 3);
  const Matrix constant = af::integral_state({1, 1, 1}, 3);
  int minus_one = 0;
  for (const auto& e : af::spectrum_integral(constant, omega)) {
    if (e.label == 1) {
      CHECK(e.value == doctest::Approx(-1.0).epsilon(1e-12));
      ++minus_one;
    } else {
      CHECK(e.value == doctest::Approx(-1.0).epsilon(1e-12));  // (OmegaS*)_ij = 0 here
    }
  }
  CHECK(minus_one == 3);

  CHECK_THROWS_AS(af::spectrum_integral(af::barycenter_state(2, 2), eye), af::Error);
}

TEST_CASE("closed-form eigenvectors satisfy the eigen equation") {
  std::mt19937 rng(14);
  const af::WeightMatrix omega = random_row_stochastic(rng, 4);
  const Matrix star = af::integral_state({2, 0, 1, 2}, 3);
  const Matrix jac = af::jacobian(star, omega);
  for (const auto& entry : af::spectrum_integral(star, omega)) {
    const af::Vector v = af::integral_eigenvector(entry, star);
    CHECK((jac * v - entry.value * v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("closed-form integral spectrum matches the numeric solver") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + trial % 4;
    const int n = 2 + trial % 3;
    const af::WeightMatrix omega = random_row_stochastic(rng, m);
    std::vector<int> labels(m);
    for (int i = 0; i < m; ++i) labels[i] = static_cast<int>(rng() % n);
    const Matrix star = af::integral_state(labels, n);
    const auto numeric = af::dense_spectrum(af::jacobian(star, omega));
    std::vector<std::complex<double>> closed;
    for (const auto& e : af::spectrum_integral(star, omega)) closed.emplace_back(e.value, 0.0);
    CHECK(spectrum_gap(numeric, closed) < 1e-8);
  }
}

TEST_CASE("spectrum_uniform at the barycenter matches the numeric solver") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + trial % 2;
    const af::WeightMatrix omega = random_row_stochastic(rng, m);
    std::vector<int> all_labels(n);
    for (int j = 0; j < n; ++j) all_labels[j] = j;
    const auto closed = af::spectrum_uniform(all_labels, n, omega);
    const auto numeric = af::dense_spectrum(af::jacobian(af::barycenter_state(m, n), omega));
    CHECK(spectrum_gap(closed, numeric) < 1e-8);

    // Perron eigenvalue of a row-stochastic matrix is 1: 1/n appears, and
    // -(Omega 1)_i / n = -1/n appears m times
    const auto reals = sorted_real(closed);
    CHECK(std::count_if(reals.begin(), reals.end(), [&](double x) {
            return std::abs(x - 1.0 / n) < 1e-9;
          }) >= 1);
    CHECK(std::count_if(reals.begin(), reals.end(), [&](double x) {
            return std::abs(x + 1.0 / n) < 1e-9;
          }) >= m);
  }
}

TEST_CASE("spectrum_uniform with identity weights") {
  const af::WeightMatrix eye = af::WeightMatrix::from_dense(Matrix::Identity(4, 4));
  const auto spec = af::spectrum_uniform({0, 1}, 3, eye);  // |J+| = 2, n = 3
  REQUIRE(spec.size() == 12);
  int plus = 0, minus = 0;
  for (const auto& z : spec) {
    if (std::abs(z.real() - 0.5) < 1e-12) ++plus;
    if (std::abs(z.real() + 0.5) < 1e-12) ++minus;
  }
  CHECK(plus == 4);    // m (|J+|-1) copies of 1/|J+|
  CHECK(minus == 8);   // m (n-|J+|+1) copies of -1/|J+|

  CHECK_THROWS_AS(af::spectrum_uniform({0}, 3, eye), af::Error);
}

TEST_CASE("classify on the tri-color instance") {
  const af::WeightMatrix omega = af::build_uniform_weights(af::tricolor_demo_grid());
  std::vector<bool> unique;
  const auto input_labels = af::argmax_labels(af::tricolor_demo_features(), &unique);
  const Matrix input = af::integral_state(input_labels, 3);

  const af::StabilityReport input_report = af::classify(input, omega);
  CHECK(input_report.classification == af::StabilityClass::unstable);

  // flipping the eight quadrilateral corners to the background label makes
  // the labeling exponentially stable
  std::vector<int> flipped = input_labels;
  for (int rc : {2 * 12 + 2, 2 * 12 + 5, 5 * 12 + 2, 5 * 12 + 5,
                 6 * 12 + 6, 6 * 12 + 9, 9 * 12 + 6, 9 * 12 + 9})
    flipped[rc] = 0;
  const af::StabilityReport stable_report =
      af::classify(af::integral_state(flipped, 3), omega);
  CHECK(stable_report.classification == af::StabilityClass::exp_stable);
  REQUIRE(stable_report.eps_est.has_value());
  CHECK(*stable_report.eps_est == doctest::Approx(0.2).epsilon(1e-12));
  REQUIRE(stable_report.eps_unif.has_value());
  CHECK(*stable_report.eps_unif == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("classify marks half-half equilibria nonintegral_unstable") {
  std::mt19937 rng(7);
  const af::WeightMatrix omega = random_row_stochastic(rng, 3);
  Matrix half = Matrix::Zero(3, 3);
  half.col(0).setConstant(0.5);
  half.col(2).setConstant(0.5);
  const af::StabilityReport report = af::classify(half, omega);
  CHECK(report.classification == af::StabilityClass::nonintegral_unstable);
  CHECK_FALSE(report.eps_est.has_value());

  // positive-diagonal weights force a positive-real-part eigenvalue there
  double max_real = -1.0;
  for (const auto& z : report.spectrum) max_real = std::max(max_real, z.real());
  CHECK(max_real > -1e-10);
}

TEST_CASE("classify enforces its hypotheses") {
  Matrix hollow(2, 2);
  hollow << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_WITH_AS(
      af::classify(af::integral_state({0, 0}, 2), af::WeightMatrix::from_dense(hollow)),
      doctest::Contains("positive diagonal"), af::Error);

  Matrix negative(2, 2);
  negative << 1.0, -0.5, 0.25, 1.0;
  CHECK_THROWS_WITH_AS(
      af::classify(af::integral_state({0, 0}, 2), af::WeightMatrix::from_dense(negative)),
      doctest::Contains("nonnegative"), af::Error);

  std::mt19937 rng(8);
  const af::WeightMatrix omega = random_row_stochastic(rng, 2);
  CHECK_THROWS_AS(af::classify(random_state(rng, 2, 2), omega), af::Error);
}

TEST_CASE("classify reports exact ties as inconclusive") {
  Matrix dense(2, 2);
  dense << 0.5, 0.5, 0.5, 0.5;
  const af::WeightMatrix omega = af::WeightMatrix::from_dense(dense);
  // non-constant labeling: (OmegaS*) rows are (0.5, 0.5) everywhere
  const af::StabilityReport report =
      af::classify(af::integral_state({0, 1}, 2), omega);
  CHECK(report.classification == af::StabilityClass::inconclusive);
}

TEST_CASE("eps_est values and the two-vertex grid-search oracle") {
  // constant labeling with row-stochastic weights: margins are 1, so the
  // closed form gives 2 * 1 / (1 + 1) = 1
  std::mt19937 rng(9);
  const af::WeightMatrix omega = random_row_stochastic(rng, 4);
  CHECK(af::eps_est(af::integral_state({1, 1, 1, 1}, 3), omega) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Matrix two(2, 2);
  two << 0.55, 0.45, 0.25, 0.75;
  const af::WeightMatrix omega2 = af::WeightMatrix::from_dense(two);
  const Matrix star = af::integral_state({0, 1}, 2);
  const double estimate = af::eps_est(star, omega2);
  CHECK(estimate == doctest::Approx(0.2 / 1.1).epsilon(1e-12));

  // brute force: largest eps on a fine grid with B_eps inside A(S*)
  double best = 0.0;
  const int grid = 2000;
  for (int k = 1; k <= grid; ++k) {
    const double eps = 2.0 * k / grid;
    bool inside = true;
    // worst corners of the ball: s1 minimal, s2 maximal
    const double s1 = 1.0 - eps / 2.0;
    const double s2 = eps / 2.0;
    for (double a : {s1, 1.0}) {
      for (double b : {0.0, s2}) {
        Matrix s(2, 2);
        s << a, 1.0 - a, b, 1.0 - b;
        if (!af::in_attraction_polytope(s, star, omega2)) inside = false;
      }
    }
    if (inside) best = eps;
    else break;
  }
  CHECK(std::abs(estimate - best) / best < 0.1);

  CHECK_THROWS_AS(af::eps_est(star, af::WeightMatrix::from_dense(Matrix::Ones(2, 2) * 0.5)),
                  af::Error);
}

TEST_CASE("eps_unif formula") {
  CHECK(af::eps_unif({9, 9, 6, 4}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(af::eps_unif({1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(af::eps_unif({0, 2}), af::Error);
  CHECK_THROWS_AS(af::eps_unif({}), af::Error);

  // eps_unif <= eps_est on uniform-weight instances
  std::mt19937 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const int side = 3 + trial % 2;
    const af::GridSpec grid{side, side, 1};
    const af::WeightMatrix omega = af::build_uniform_weights(grid);
    std::vector<int> labels(grid.vertices(), trial % 2);
    const Matrix star = af::integral_state(labels, 2);
    CHECK(af::eps_unif(omega.neighborhood_sizes()) <= af::eps_est(star, omega) + 1e-15);
  }
}

TEST_CASE("in_attraction_polytope basics") {
  Matrix two(2, 2);
  two << 0.55, 0.45, 0.25, 0.75;
  const af::WeightMatrix omega = af::WeightMatrix::from_dense(two);
  const Matrix star = af::integral_state({0, 1}, 2);
  CHECK(af::in_attraction_polytope(star, star, omega));

  // uniform averaging, non-constant target: A(S*) is empty
  Matrix flat(2, 2);
  flat << 0.5, 0.5, 0.5, 0.5;
  const af::WeightMatrix uniform = af::WeightMatrix::from_dense(flat);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix s = random_state(rng, 2, 2);
    CHECK_FALSE(af::in_attraction_polytope(s, star, uniform));
  }
}

TEST_CASE("sampled inclusion of the attraction ball in the polytope") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int instance = 0; instance < 3; ++instance) {
    const int m = 3 + instance;
    // diagonally dominant rows keep every labeling stable
    Matrix dense(m, m);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) dense(i, k) = 0.2 * dist(rng) / m;
      dense(i, i) = 0.5 + 0.5 * dist(rng);
      dense.row(i) /= dense.row(i).sum();
    }
    const af::WeightMatrix omega = af::WeightMatrix::from_dense(dense);
    std::vector<int> labels(m);
    for (int i = 0; i < m; ++i) labels[i] = static_cast<int>(rng() % 3);
    const Matrix star = af::integral_state(labels, 3);
    const double radius = af::eps_est(star, omega);

    for (int sample = 0; sample < 2000; ++sample) {
      Matrix s(m, 3);
      for (int i = 0; i < m; ++i) {
        Vector q(3);
        for (int j = 0; j < 3; ++j) q(j) = dist(rng);
        q /= q.sum();
        const double u = 0.499 * radius * dist(rng);
        s.row(i) = (1.0 - u) * star.row(i) + u * q.transpose();
      }
      REQUIRE(af::max_row_l1_distance(s, star) < radius);
      CHECK(af::in_attraction_polytope(s, star, omega));
    }
  }
}

TEST_CASE("convergence_rates on uniform neighborhoods") {
  const af::GridSpec grid{5, 5, 1};
  const af::WeightMatrix omega = af::build_uniform_weights(grid);
  const Matrix star = af::integral_state(std::vector<int>(25, 0), 2);
  const Vector rates = af::convergence_rates(star, omega, 0.1);
  for (int i = 0; i < 25; ++i) CHECK(rates(i) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(af::convergence_rates(star, omega, 10.0), af::Error);
}

TEST_CASE("observed contraction beats the predicted near-equilibrium rate") {
  const af::WeightMatrix omega = af::build_uniform_weights(af::tricolor_demo_grid());
  const Matrix d = af::compute_distances(af::tricolor_demo_features(),
                                         af::tricolor_demo_labels());
  af::IntegratorConfig cfg;
  const af::IntegrationResult result = af::integrate(af::sflow_init(d, omega), omega, cfg);
  REQUIRE(result.termination.certificate.certified);
  const Matrix star = result.termination.certificate.rounded;
  const Vector rates = af::convergence_rates(star, omega, 0.1);
  const double beta = rates.minCoeff();

  Matrix s = result.final_state;
  const double start = af::max_row_l1_distance(s, star);
  const double t_extra = 5.0;
  for (int k = 0; k < 50; ++k) s = af::euler_step(s, omega, 0.1);
  const double end = af::max_row_l1_distance(s, star);
  // decay at least as fast as exp(-beta t), 10 percent slack
  CHECK(end <= start * std::exp(-0.9 * beta * t_extra));
}
