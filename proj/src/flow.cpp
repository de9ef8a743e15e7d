#include "af/flow.hpp"

#include "af/parallel.hpp"
#include "af/simplex.hpp"

namespace af {

Matrix sflow_rhs(const Matrix& s, const WeightMatrix& omega) {
  if (omega.size() != s.rows())
    fail(ErrorCode::invalid_argument, "sflow_rhs: Omega size does not match vertex count");
  const Matrix os = omega.apply(s);
  Matrix out(s.rows(), s.cols());
  parallel_for(static_cast<int>(s.rows()), [&](int i) {
    out.row(i) =
        replicator_apply(s.row(i).transpose(), os.row(i).transpose()).transpose();
  });
  return out;
}

Matrix sflow_init(const Matrix& distances, const WeightMatrix& omega) {
  if (!distances.allFinite())
    fail(ErrorCode::invalid_argument, "sflow_init: distances must be finite");
  if (omega.size() != distances.rows())
    fail(ErrorCode::invalid_argument, "sflow_init: Omega size does not match vertex count");
  const int m = static_cast<int>(distances.rows());
  const int n = static_cast<int>(distances.cols());
  return exp_map_rows(barycenter_state(m, n), -omega.apply(distances));
}

Matrix similarity_map(const Matrix& w, const Matrix& distances,
                      const WeightMatrix& omega) {
  if (w.rows() != distances.rows() || w.cols() != distances.cols())
    fail(ErrorCode::invalid_argument, "similarity_map: state/distance shape mismatch");
  if (!is_interior(w))
    fail(ErrorCode::domain_error, "similarity_map: state must be strictly interior");
  const int m = static_cast<int>(w.rows());
  const int n = static_cast<int>(w.cols());
  const Matrix bary = barycenter_state(m, n);
  Matrix lifted(m, n);
  for (int i = 0; i < m; ++i)
    lifted.row(i) =
        inv_exp_map(bary.row(i).transpose(), w.row(i).transpose()).transpose();
  lifted -= distances;
  return exp_map_rows(bary, omega.apply(lifted));
}

Matrix assignment_rhs(const Matrix& w, const Matrix& distances,
                      const WeightMatrix& omega) {
  const Matrix sim = similarity_map(w, distances, omega);
  Matrix out(w.rows(), w.cols());
  for (int i = 0; i < w.rows(); ++i)
    out.row(i) =
        replicator_apply(w.row(i).transpose(), sim.row(i).transpose()).transpose();
  return out;
}

Vector representative_rhs(const Vector& p, const WeightMatrix& omega) {
  if (omega.size() != p.size())
    fail(ErrorCode::invalid_argument, "representative_rhs: Omega must be square of size n");
  return replicator_apply(p, omega.apply(p));
}

WFromSAccumulator::WFromSAccumulator(int m, int n)
    : integral_(Matrix::Zero(m, n)), prev_tangent_(Matrix::Zero(m, n)) {}

void WFromSAccumulator::add_sample(double t, const Matrix& s) {
  if (s.rows() != integral_.rows() || s.cols() != integral_.cols())
    fail(ErrorCode::invalid_argument, "WFromSAccumulator: sample shape mismatch");
  Matrix tangent = s;
  tangent.colwise() -= Vector(s.rowwise().mean());
  if (samples_ > 0) {
    if (t <= prev_time_)
      fail(ErrorCode::invalid_argument, "WFromSAccumulator: times must increase");
    integral_ += 0.5 * (t - prev_time_) * (prev_tangent_ + tangent);
  }
  prev_tangent_ = std::move(tangent);
  prev_time_ = t;
  ++samples_;
}

Matrix WFromSAccumulator::current() const {
  if (samples_ == 0)
    fail(ErrorCode::invalid_argument, "WFromSAccumulator: no samples ingested");
  return exp_map_rows(
      barycenter_state(static_cast<int>(integral_.rows()),
                       static_cast<int>(integral_.cols())),
      integral_);
}

Matrix w_from_s_accumulate(const Trajectory& trajectory) {
  if (trajectory.empty())
    fail(ErrorCode::invalid_argument, "w_from_s_accumulate: empty trajectory");
  WFromSAccumulator acc(static_cast<int>(trajectory.states.front().rows()),
                        static_cast<int>(trajectory.states.front().cols()));
  for (long k = 0; k < trajectory.count(); ++k)
    acc.add_sample(trajectory.times[k], trajectory.states[k]);
  return acc.current();
}

}  // namespace af
