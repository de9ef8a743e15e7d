#include "af/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "af/simplex.hpp"

namespace af {

namespace {

// Strict stability margins (OmegaS*)_{ij*} - (OmegaS*)_{ij} at an integral
// equilibrium; the j* column holds +infinity.
Matrix stability_margins(const Matrix& s_star, const WeightMatrix& omega,
                         const std::vector<int>& labels) {
  const Matrix os = omega.apply(s_star);
  Matrix margins(s_star.rows(), s_star.cols());
  for (int i = 0; i < s_star.rows(); ++i)
    for (int j = 0; j < s_star.cols(); ++j)
      margins(i, j) = (j == labels[i]) ? std::numeric_limits<double>::infinity()
                                       : os(i, labels[i]) - os(i, j);
  return margins;
}

void require_integral(const Matrix& s, const char* where) {
  if (!is_integral(s))
    fail(ErrorCode::invalid_argument,
         std::string(where) + ": state must be integral");
}

}  // namespace

EquilibriumCheck is_equilibrium(const Matrix& s, const WeightMatrix& omega,
                                double tol) {
  const Matrix os = omega.apply(s);
  double residual = 0.0;
  for (int i = 0; i < s.rows(); ++i) {
    const double mean = s.row(i).dot(os.row(i));
    for (int j = 0; j < s.cols(); ++j)
      if (s(i, j) > kSupportTol)
        residual = std::max(residual, std::abs(os(i, j) - mean));
  }
  return {residual < tol, residual};
}

Matrix jacobian(const Matrix& s, const WeightMatrix& omega) {
  const int m = static_cast<int>(s.rows());
  const int n = static_cast<int>(s.cols());
  if (static_cast<long>(m) * n > kDenseCap)
    fail(ErrorCode::resource_limit,
         "jacobian: m*n exceeds the dense cap; use the closed-form spectra");
  const Matrix os = omega.apply(s);
  Matrix jac = Matrix::Zero(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    const Vector si = s.row(i).transpose();
    const Vector osi = os.row(i).transpose();
    const double mean = si.dot(osi);
    // B_i = Diag((OmegaS)_i) - <S_i,(OmegaS)_i> I - S_i (OmegaS)_i^T
    Matrix block = Matrix(osi.asDiagonal()) - mean * Matrix::Identity(n, n) -
                   si * osi.transpose();
    jac.block(i * n, i * n, n, n) += block;
    const Matrix replicator = Matrix(si.asDiagonal()) - si * si.transpose();
    for (const auto& e : omega.row(i))
      jac.block(i * n, e.col * n, n, n) += e.value * replicator;
  }
  return jac;
}

std::vector<IntegralEigenvalue> spectrum_integral(const Matrix& s_star,
                                                  const WeightMatrix& omega) {
  require_integral(s_star, "spectrum_integral");
  const Matrix os = omega.apply(s_star);
  const std::vector<int> labels = argmax_labels(s_star);
  std::vector<IntegralEigenvalue> spec;
  spec.reserve(s_star.size());
  for (int i = 0; i < s_star.rows(); ++i) {
    const double mean = os(i, labels[i]);
    spec.push_back({-mean, i, labels[i]});
    for (int j = 0; j < s_star.cols(); ++j)
      if (j != labels[i]) spec.push_back({os(i, j) - mean, i, j});
  }
  return spec;
}

Vector integral_eigenvector(const IntegralEigenvalue& entry, const Matrix& s_star) {
  require_integral(s_star, "integral_eigenvector");
  const int n = static_cast<int>(s_star.cols());
  if (entry.vertex < 0 || entry.vertex >= s_star.rows() || entry.label < 0 ||
      entry.label >= n)
    fail(ErrorCode::invalid_argument, "integral_eigenvector: index out of range");
  Vector v = Vector::Zero(s_star.size());
  v.segment(entry.vertex * n, n) = s_star.row(entry.vertex).transpose();
  if (s_star(entry.vertex, entry.label) == 0.0) v(entry.vertex * n + entry.label) -= 1.0;
  return v;
}

std::vector<std::complex<double>> spectrum_uniform(const std::vector<int>& j_plus,
                                                   int n, const WeightMatrix& omega) {
  if (j_plus.size() < 2)
    fail(ErrorCode::invalid_argument, "spectrum_uniform: |J+| must be at least 2");
  for (size_t a = 0; a < j_plus.size(); ++a) {
    if (j_plus[a] < 0 || j_plus[a] >= n)
      fail(ErrorCode::invalid_argument, "spectrum_uniform: label index out of range");
    for (size_t b = a + 1; b < j_plus.size(); ++b)
      if (j_plus[a] == j_plus[b])
        fail(ErrorCode::invalid_argument, "spectrum_uniform: duplicate label index");
  }
  const int m = omega.size();
  const int plus = static_cast<int>(j_plus.size());
  const Vector sums = omega.row_sums();
  std::vector<std::complex<double>> spec;
  const int per_vertex = n - plus + 1;
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < per_vertex; ++c) spec.emplace_back(-sums(i) / plus, 0.0);
  for (const auto& lambda : omega_spectrum(omega))
    for (int c = 0; c < plus - 1; ++c) spec.push_back(lambda / static_cast<double>(plus));
  return spec;
}

StabilityReport classify(const Matrix& s_star, const WeightMatrix& omega) {
  if (!omega.nonnegative())
    fail(ErrorCode::precondition,
         "classify: hypothesis violated: Omega must be nonnegative");
  if (!omega.positive_diagonal())
    fail(ErrorCode::precondition,
         "classify: hypothesis violated: Omega must have a positive diagonal");
  const EquilibriumCheck eq = is_equilibrium(s_star, omega);
  if (!eq.is_equilibrium)
    fail(ErrorCode::precondition, "classify: state is not an equilibrium");

  StabilityReport report;
  report.equilibrium = s_star;
  report.residual = eq.residual;

  const long mn = s_star.size();
  if (mn <= kDenseCap) {
    report.spectrum = dense_spectrum(jacobian(s_star, omega));
  }

  if (!is_integral(s_star)) {
    report.classification = StabilityClass::nonintegral_unstable;
    return report;
  }

  report.closed_form_spectrum = spectrum_integral(s_star, omega);
  const std::vector<int> labels = argmax_labels(s_star);
  const Matrix margins = stability_margins(s_star, omega, labels);
  bool violated = false;
  bool tied = false;
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < margins.rows(); ++i)
    for (int j = 0; j < margins.cols(); ++j) {
      if (j == labels[i]) continue;
      const double g = margins(i, j);
      if (g < -kStrictTol) violated = true;
      else if (g <= kStrictTol) tied = true;
      min_margin = std::min(min_margin, g);
    }
  if (violated) {
    report.classification = StabilityClass::unstable;
  } else if (tied) {
    report.classification = StabilityClass::inconclusive;
  } else {
    report.classification = StabilityClass::exp_stable;
    report.eps_est = eps_est(s_star, omega);
    if (omega.uniform_rows()) report.eps_unif = eps_unif(omega.neighborhood_sizes());
    report.rates = convergence_rates(s_star, omega, *report.eps_est / 2.0);
  }
  return report;
}

double eps_est(const Matrix& s_star, const WeightMatrix& omega) {
  require_integral(s_star, "eps_est");
  const std::vector<int> labels = argmax_labels(s_star);
  const Matrix margins = stability_margins(s_star, omega, labels);
  const Vector sums = omega.row_sums();
  double eps = std::numeric_limits<double>::infinity();
  for (int i = 0; i < margins.rows(); ++i)
    for (int j = 0; j < margins.cols(); ++j) {
      if (j == labels[i]) continue;
      const double g = margins(i, j);
      if (g <= kStrictTol)
        fail(ErrorCode::precondition,
             "eps_est: equilibrium does not satisfy the strict stability criterion");
      eps = std::min(eps, 2.0 * g / (sums(i) + g));
    }
  return eps;
}

double eps_unif(const std::vector<int>& neighborhood_sizes) {
  if (neighborhood_sizes.empty())
    fail(ErrorCode::invalid_argument, "eps_unif: empty size list");
  int largest = 0;
  for (int size : neighborhood_sizes) {
    if (size < 1) fail(ErrorCode::invalid_argument, "eps_unif: sizes must be >= 1");
    largest = std::max(largest, size);
  }
  return 2.0 / (1.0 + largest);
}

bool in_attraction_polytope(const Matrix& s, const Matrix& s_star,
                            const WeightMatrix& omega) {
  require_integral(s_star, "in_attraction_polytope");
  const std::vector<int> labels = argmax_labels(s_star);
  const Matrix os = omega.apply(s);
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j)
      if (j != labels[i] && !(os(i, j) < os(i, labels[i]))) return false;
  return true;
}

Vector convergence_rates(const Matrix& s_star, const WeightMatrix& omega,
                         double delta) {
  const double radius = eps_est(s_star, omega);  // also verifies stability
  if (!(delta < radius))
    fail(ErrorCode::precondition, "convergence_rates: delta must be below eps_est");
  const std::vector<int> labels = argmax_labels(s_star);
  const Matrix margins = stability_margins(s_star, omega, labels);
  Vector rates(s_star.rows());
  for (int i = 0; i < s_star.rows(); ++i) {
    double beta = std::numeric_limits<double>::infinity();
    for (int j = 0; j < s_star.cols(); ++j)
      if (j != labels[i]) beta = std::min(beta, margins(i, j));
    rates(i) = beta;
  }
  return rates;
}

std::vector<std::complex<double>> dense_spectrum(const Matrix& a) {
  if (a.rows() != a.cols())
    fail(ErrorCode::invalid_argument, "dense_spectrum: matrix must be square");
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::internal, "dense_spectrum: eigensolver did not converge");
  std::vector<std::complex<double>> spec(a.rows());
  for (int k = 0; k < a.rows(); ++k) spec[k] = solver.eigenvalues()(k);
  return spec;
}

std::vector<std::complex<double>> omega_spectrum(const WeightMatrix& omega) {
  if (const auto* fac = omega.factorization()) {
    // Omega = Diag(w)^{-1} OmegaHat is similar to the symmetric matrix
    // Diag(w)^{-1/2} OmegaHat Diag(w)^{-1/2}; real spectrum.
    const Vector scale = fac->w.cwiseSqrt().cwiseInverse();
    Matrix sym = Matrix::Zero(omega.size(), omega.size());
    for (int i = 0; i < omega.size(); ++i)
      for (const auto& e : fac->hat_rows[i])
        sym(i, e.col) = scale(i) * e.value * scale(e.col);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
      fail(ErrorCode::internal, "omega_spectrum: symmetric eigensolver failed");
    std::vector<std::complex<double>> spec(omega.size());
    for (int k = 0; k < omega.size(); ++k) spec[k] = {solver.eigenvalues()(k), 0.0};
    return spec;
  }
  return dense_spectrum(omega.dense());
}

const char* stability_class_name(StabilityClass c) {
  switch (c) {
    case StabilityClass::exp_stable: return "exp_stable";
    case StabilityClass::unstable: return "unstable";
    case StabilityClass::nonintegral_unstable: return "nonintegral_unstable";
    case StabilityClass::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string report_to_keyvalue(const StabilityReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "classification=" << stability_class_name(report.classification) << "\n";
  out << "equilibrium_residual=" << report.residual << "\n";
  out << "vertices=" << report.equilibrium.rows() << "\n";
  out << "labels=" << report.equilibrium.cols() << "\n";
  out << "spectrum_size=" << report.spectrum.size() << "\n";
  if (!report.spectrum.empty()) {
    double max_re = -std::numeric_limits<double>::infinity();
    for (const auto& z : report.spectrum) max_re = std::max(max_re, z.real());
    out << "spectrum_max_real=" << max_re << "\n";
  }
  if (report.eps_est) out << "eps_est=" << *report.eps_est << "\n";
  if (report.eps_unif) out << "eps_unif=" << *report.eps_unif << "\n";
  if (report.rates) {
    out << "rates_min=" << report.rates->minCoeff() << "\n";
    out << "rates_max=" << report.rates->maxCoeff() << "\n";
  }
  return out.str();
}

}  // namespace af
