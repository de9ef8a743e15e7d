#include "af/pipeline.hpp"

#include <cmath>
#include <ostream>

#include "af/flow.hpp"
#include "af/simplex.hpp"

namespace af {

WeightMatrix build_uniform_weights(const GridSpec& grid) {
  if (grid.height < 1 || grid.width < 1 || grid.radius < 0)
    fail(ErrorCode::invalid_argument, "build_uniform_weights: bad grid spec");
  const int m = grid.vertices();
  std::vector<std::vector<WeightMatrix::Entry>> rows(m);
  Vector sizes(m);
  for (int r = 0; r < grid.height; ++r)
    for (int c = 0; c < grid.width; ++c) {
      const int i = r * grid.width + c;
      std::vector<int> neighbors;
      for (int dr = -grid.radius; dr <= grid.radius; ++dr)
        for (int dc = -grid.radius; dc <= grid.radius; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr < 0 || rr >= grid.height || cc < 0 || cc >= grid.width) continue;
          neighbors.push_back(rr * grid.width + cc);
        }
      sizes(i) = static_cast<double>(neighbors.size());
      rows[i].reserve(neighbors.size());
      for (int k : neighbors) rows[i].push_back({k, 1.0 / neighbors.size()});
    }
  WeightMatrix omega = WeightMatrix::from_rows(std::move(rows));
  // w_i = |N_i| and 0/1 adjacency-with-self; Chebyshev windows are symmetric
  Matrix hat = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (const auto& e : omega.row(i)) hat(i, e.col) = 1.0;
  omega.attach_factorization(sizes, hat);
  return omega;
}

void LabelSet::validate() const {
  if (prototypes.rows() < 2)
    fail(ErrorCode::invalid_argument, "LabelSet: need at least two prototypes");
  if (!(scale > 0.0) || !std::isfinite(scale))
    fail(ErrorCode::invalid_argument, "LabelSet: scale must be positive and finite");
  for (int a = 0; a < prototypes.rows(); ++a)
    for (int b = a + 1; b < prototypes.rows(); ++b)
      if ((prototypes.row(a) - prototypes.row(b)).norm() == 0.0)
        fail(ErrorCode::invalid_argument, "LabelSet: prototypes must be pairwise distinct");
}

Matrix compute_distances(const Matrix& features, const LabelSet& labels) {
  labels.validate();
  if (features.cols() != labels.prototypes.cols())
    fail(ErrorCode::invalid_argument,
         "compute_distances: feature dimension does not match prototypes");
  for (int i = 0; i < features.rows(); ++i)
    if (!features.row(i).allFinite())
      fail(ErrorCode::data_error,
           "compute_distances: non-finite feature at vertex " + std::to_string(i));
  Matrix d(features.rows(), labels.prototypes.rows());
  for (int i = 0; i < features.rows(); ++i)
    for (int j = 0; j < labels.prototypes.rows(); ++j)
      d(i, j) = labels.scale * (features.row(i) - labels.prototypes.row(j)).norm();
  return d;
}

LabelingResult label(const Matrix& features, const LabelSet& labels,
                     const WeightMatrix& omega, const IntegratorConfig& cfg) {
  const Matrix distances = compute_distances(features, labels);
  const Matrix s0 = sflow_init(distances, omega);
  IntegrationResult integration = integrate(s0, omega, cfg);

  LabelingResult result;
  result.termination = integration.termination;
  result.certificate = integration.termination.certificate;
  result.trajectory = std::move(integration.trajectory);
  result.final_state = std::move(integration.final_state);
  result.labels = argmax_labels(result.final_state);
  if (!result.certificate.tie) {
    result.report = classify(result.certificate.rounded, omega);
    result.has_report = true;
  }
  return result;
}

void phase_portrait_sflow(const WeightMatrix& omega, int resolution,
                          std::ostream& out) {
  const int m = omega.size();
  if (m > 3)
    fail(ErrorCode::unsupported,
         "phase_portrait_sflow: at most 3 free coordinates (2-label system)");
  if (resolution < 2)
    fail(ErrorCode::invalid_argument, "phase_portrait_sflow: resolution must be >= 2");
  out.precision(17);
  out << "s1";
  for (int i = 1; i < m; ++i) out << ",s" << i + 1;
  for (int i = 0; i < m; ++i) out << ",rhs" << i + 1;
  out << "\n";
  std::vector<int> idx(m, 0);
  const double step = 1.0 / (resolution - 1);
  bool carry = false;
  while (!carry) {
    Matrix s(m, 2);
    for (int i = 0; i < m; ++i) {
      const double x = idx[i] * step;
      s(i, 0) = x;
      s(i, 1) = 1.0 - x;
    }
    const Matrix rhs = sflow_rhs(s, omega);
    for (int i = 0; i < m; ++i) out << (i ? "," : "") << s(i, 0);
    for (int i = 0; i < m; ++i) out << "," << rhs(i, 0);
    out << "\n";
    // odometer over the m grid axes
    carry = true;
    for (int i = 0; i < m && carry; ++i) {
      if (++idx[i] < resolution) carry = false;
      else idx[i] = 0;
    }
  }
}

void phase_portrait_representative(const CirculantParams& params, int resolution,
                                   std::ostream& out) {
  if (params.n != 3)
    fail(ErrorCode::unsupported, "phase_portrait_representative: n = 3 only");
  if (resolution < 2)
    fail(ErrorCode::invalid_argument,
         "phase_portrait_representative: resolution must be >= 2");
  const WeightMatrix omega = circulant_from_params(params);
  out.precision(17);
  out << "p1,p2,p3,rhs1,rhs2,rhs3\n";
  const double step = 1.0 / (resolution - 1);
  for (int a = 0; a < resolution; ++a)
    for (int b = 0; b + a < resolution; ++b) {
      Vector p(3);
      p << a * step, b * step, 1.0 - (a + b) * step;
      if (p(2) < 0.0) continue;
      const Vector rhs = representative_rhs(p, omega);
      out << p(0) << "," << p(1) << "," << p(2) << ","
          << rhs(0) << "," << rhs(1) << "," << rhs(2) << "\n";
    }
}

Matrix tricolor_demo_features() {
  // red background, green square rows 2..5 x cols 2..5, blue square
  // rows 6..9 x cols 6..9 (0-based, inclusive)
  Matrix features(144, 3);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) {
      int label = 0;
      if (r >= 2 && r <= 5 && c >= 2 && c <= 5) label = 1;
      if (r >= 6 && r <= 9 && c >= 6 && c <= 9) label = 2;
      for (int ch = 0; ch < 3; ++ch)
        features(r * 12 + c, ch) = ch == label ? 1.0 : 0.0;
    }
  return features;
}

GridSpec tricolor_demo_grid() { return {12, 12, 1}; }

LabelSet tricolor_demo_labels() {
  LabelSet labels;
  labels.prototypes = Matrix::Identity(3, 3);
  labels.scale = 10.0;
  return labels;
}

}  // namespace af
