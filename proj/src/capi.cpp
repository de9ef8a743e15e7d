#include "assignflow.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "af/counterexample.hpp"
#include "af/flow.hpp"
#include "af/integrator.hpp"
#include "af/io.hpp"
#include "af/linear_flow.hpp"
#include "af/pipeline.hpp"
#include "af/simplex.hpp"
#include "af/stability.hpp"
#include "af/types.hpp"
#include "af/weights.hpp"

using af::Matrix;
using af::Vector;

struct af_weights {
  af::WeightMatrix w;
};

struct af_trajectory {
  af::Trajectory t;
  Matrix final_state;
};

struct af_report {
  af::StabilityReport r;
};

struct af_linear_system {
  af::LinearSystem sys;
};

namespace {

thread_local std::string g_last_error;

af_status status_of(const af::Error& e) {
  switch (e.code()) {
    case af::ErrorCode::invalid_argument: return AF_ERROR_INVALID_ARGUMENT;
    case af::ErrorCode::domain_error: return AF_ERROR_DOMAIN;
    case af::ErrorCode::range_error: return AF_ERROR_RANGE;
    case af::ErrorCode::resource_limit: return AF_ERROR_RESOURCE_LIMIT;
    case af::ErrorCode::precondition: return AF_ERROR_PRECONDITION;
    case af::ErrorCode::data_error: return AF_ERROR_DATA;
    case af::ErrorCode::unsupported: return AF_ERROR_UNSUPPORTED;
    case af::ErrorCode::io_error: return AF_ERROR_IO;
    case af::ErrorCode::internal: return AF_ERROR_INTERNAL;
  }
  return AF_ERROR_INTERNAL;
}

template <typename Fn>
af_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return AF_OK;
  } catch (const af::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return AF_ERROR_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AF_ERROR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) af::fail(af::ErrorCode::invalid_argument, what);
}

Matrix to_matrix(const double* data, int rows, int cols, const char* what) {
  require(data != nullptr && rows > 0 && cols > 0, what);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = data[static_cast<size_t>(i) * cols + j];
  return m;
}

Vector to_vector(const double* data, int size, const char* what) {
  require(data != nullptr && size > 0, what);
  Vector v(size);
  for (int i = 0; i < size; ++i) v(i) = data[i];
  return v;
}

void from_matrix(const Matrix& m, double* out) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out[static_cast<size_t>(i) * m.cols() + j] = m(i, j);
}

void from_vector(const Vector& v, double* out) {
  for (int i = 0; i < v.size(); ++i) out[i] = v(i);
}

af::IntegratorConfig to_config(const af_integrator_config* cfg) {
  require(cfg != nullptr, "config must not be null");
  af::IntegratorConfig out;
  out.h = cfg->h;
  out.max_steps = cfg->max_steps;
  out.entropy_threshold = cfg->entropy_threshold;
  out.record_every = cfg->record_every;
  switch (cfg->mode) {
    case AF_TERMINATE_ENTROPY: out.mode = af::TerminationMode::entropy; break;
    case AF_TERMINATE_ATTRACTION_CERTIFIED:
      out.mode = af::TerminationMode::attraction_certified;
      break;
    case AF_TERMINATE_FIXED_STEPS: out.mode = af::TerminationMode::fixed_steps; break;
    default: af::fail(af::ErrorCode::invalid_argument, "unknown termination mode");
  }
  return out;
}

void fill_termination(const af::TerminationRecord& record, af_termination* out) {
  if (out == nullptr) return;
  switch (record.reason) {
    case af::TerminationReason::entropy: out->reason = AF_REASON_ENTROPY; break;
    case af::TerminationReason::attraction_certified: out->reason = AF_REASON_ATTRACTION; break;
    case af::TerminationReason::fixed_steps: out->reason = AF_REASON_FIXED; break;
    case af::TerminationReason::budget: out->reason = AF_REASON_BUDGET; break;
  }
  out->steps = record.steps;
  out->time = record.time;
  out->final_entropy = record.final_entropy;
  out->certified = record.certificate.certified ? 1 : 0;
  out->argmax_tie = record.certificate.tie ? 1 : 0;
  out->epsilon = record.certificate.epsilon;
  out->margin = record.certificate.margin;
  out->max_l1 = record.certificate.max_l1;
}

af::TerminationRecord to_record(const af_termination* t) {
  af::TerminationRecord record;
  switch (t->reason) {
    case AF_REASON_ENTROPY: record.reason = af::TerminationReason::entropy; break;
    case AF_REASON_ATTRACTION: record.reason = af::TerminationReason::attraction_certified; break;
    case AF_REASON_FIXED: record.reason = af::TerminationReason::fixed_steps; break;
    default: record.reason = af::TerminationReason::budget; break;
  }
  record.steps = t->steps;
  record.time = t->time;
  record.final_entropy = t->final_entropy;
  record.has_certificate = true;
  record.certificate.certified = t->certified != 0;
  record.certificate.tie = t->argmax_tie != 0;
  record.certificate.epsilon = t->epsilon;
  record.certificate.margin = t->margin;
  record.certificate.max_l1 = t->max_l1;
  return record;
}

af::CirculantParams to_params(int n, double alpha, double beta,
                              const double* gamma, int gamma_count) {
  af::CirculantParams params;
  params.n = n;
  params.alpha = alpha;
  params.beta = beta;
  params.gamma = Vector::Zero(gamma_count);
  for (int k = 0; k < gamma_count; ++k) {
    require(gamma != nullptr, "gamma must not be null");
    params.gamma(k) = gamma[k];
  }
  return params;
}

}  // namespace

extern "C" {

const char* af_version(void) { return "0.1.0"; }

const char* af_last_error(void) { return g_last_error.c_str(); }

void af_buffer_free(double* buffer) { delete[] buffer; }

/* ---- weights ---- */

af_status af_weights_grid_uniform(int height, int width, int radius,
                                  af_weights** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new af_weights{af::build_uniform_weights({height, width, radius})};
  });
}

af_status af_weights_from_entries(int m, size_t count, const int* rows,
                                  const int* cols, const double* values,
                                  af_weights** out) {
  return guarded([&] {
    require(out != nullptr && rows != nullptr && cols != nullptr && values != nullptr,
            "null argument");
    std::vector<int> r(rows, rows + count), c(cols, cols + count);
    std::vector<double> v(values, values + count);
    *out = new af_weights{af::WeightMatrix::from_triplets(m, r, c, v)};
  });
}

af_status af_weights_from_dense(int m, const double* values, af_weights** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new af_weights{af::WeightMatrix::from_dense(to_matrix(values, m, m, "values"))};
  });
}

af_status af_weights_circulant(int n, double alpha, double beta,
                               const double* gamma, int gamma_count,
                               af_weights** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new af_weights{
        af::circulant_from_params(to_params(n, alpha, beta, gamma, gamma_count))};
  });
}

af_status af_weights_nonpos_diag(af_weights** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = new af_weights{af::build_nonpos_diag_example().omega};
  });
}

af_status af_weights_read_csv(const char* path, af_weights** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    *out = new af_weights{af::read_weights_edge_csv(path)};
  });
}

int af_weights_size(const af_weights* w) { return w ? w->w.size() : 0; }

af_status af_weights_dense(const af_weights* w, double* out) {
  return guarded([&] {
    require(w != nullptr && out != nullptr, "null argument");
    from_matrix(w->w.dense(), out);
  });
}

af_status af_weights_neighborhood_sizes(const af_weights* w, int* sizes) {
  return guarded([&] {
    require(w != nullptr && sizes != nullptr, "null argument");
    const auto s = w->w.neighborhood_sizes();
    std::memcpy(sizes, s.data(), s.size() * sizeof(int));
  });
}

void af_weights_free(af_weights* w) { delete w; }

/* ---- core ops ---- */

af_status af_sflow_init(const af_weights* w, const double* distances, int m,
                        int n, double* state_out) {
  return guarded([&] {
    require(w != nullptr && state_out != nullptr, "null argument");
    from_matrix(af::sflow_init(to_matrix(distances, m, n, "distances"), w->w), state_out);
  });
}

af_status af_sflow_rhs(const af_weights* w, const double* state, int m, int n,
                       double* rhs_out) {
  return guarded([&] {
    require(w != nullptr && rhs_out != nullptr, "null argument");
    from_matrix(af::sflow_rhs(to_matrix(state, m, n, "state"), w->w), rhs_out);
  });
}

af_status af_representative_rhs(const af_weights* w, const double* p, int n,
                                double* rhs_out) {
  return guarded([&] {
    require(w != nullptr && rhs_out != nullptr, "null argument");
    from_vector(af::representative_rhs(to_vector(p, n, "p"), w->w), rhs_out);
  });
}

af_status af_euler_step(const af_weights* w, const double* state, int m, int n,
                        double h, double* state_out) {
  return guarded([&] {
    require(w != nullptr && state_out != nullptr, "null argument");
    from_matrix(af::euler_step(to_matrix(state, m, n, "state"), w->w, h), state_out);
  });
}

af_status af_avg_entropy(const double* state, int m, int n, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = af::avg_entropy(to_matrix(state, m, n, "state"));
  });
}

/* ---- integration ---- */

void af_integrator_config_init(af_integrator_config* cfg) {
  if (cfg == nullptr) return;
  const af::IntegratorConfig defaults;
  cfg->h = defaults.h;
  cfg->max_steps = defaults.max_steps;
  cfg->entropy_threshold = defaults.entropy_threshold;
  cfg->record_every = defaults.record_every;
  cfg->mode = AF_TERMINATE_ENTROPY;
}

af_status af_integrate(const af_weights* w, const double* state0, int m, int n,
                       const af_integrator_config* cfg,
                       af_trajectory** trajectory_out,
                       af_termination* termination_out) {
  return guarded([&] {
    require(w != nullptr, "weights must not be null");
    af::IntegrationResult result =
        af::integrate(to_matrix(state0, m, n, "state0"), w->w, to_config(cfg));
    fill_termination(result.termination, termination_out);
    if (trajectory_out != nullptr)
      *trajectory_out =
          new af_trajectory{std::move(result.trajectory), std::move(result.final_state)};
  });
}

long af_trajectory_count(const af_trajectory* t) { return t ? t->t.count() : 0; }

af_status af_trajectory_sample(const af_trajectory* t, long index,
                               double* time_out, double* state_out) {
  return guarded([&] {
    require(t != nullptr, "trajectory must not be null");
    require(index >= 0 && index < t->t.count(), "sample index out of range");
    if (time_out) *time_out = t->t.times[index];
    if (state_out) from_matrix(t->t.states[index], state_out);
  });
}

af_status af_trajectory_final(const af_trajectory* t, double* state_out) {
  return guarded([&] {
    require(t != nullptr && state_out != nullptr, "null argument");
    from_matrix(t->final_state, state_out);
  });
}

af_status af_trajectory_w_state(const af_trajectory* t, double* w_out) {
  return guarded([&] {
    require(t != nullptr && w_out != nullptr, "null argument");
    from_matrix(af::w_from_s_accumulate(t->t), w_out);
  });
}

af_status af_trajectory_write_csv(const af_trajectory* t, const char* states_path,
                                  const char* diagnostics_path) {
  return guarded([&] {
    require(t != nullptr, "trajectory must not be null");
    if (states_path) af::write_trajectory_csv(states_path, t->t);
    if (diagnostics_path) af::write_diagnostics_csv(diagnostics_path, t->t);
  });
}

void af_trajectory_free(af_trajectory* t) { delete t; }

af_status af_certified_round(const af_weights* w, const double* state, int m,
                             int n, double* rounded_out, int* certified,
                             double* epsilon, double* margin, int* argmax_tie) {
  return guarded([&] {
    require(w != nullptr, "weights must not be null");
    const af::CertifiedRound round =
        af::certified_round(to_matrix(state, m, n, "state"), w->w);
    if (rounded_out) from_matrix(round.rounded, rounded_out);
    if (certified) *certified = round.certified ? 1 : 0;
    if (epsilon) *epsilon = round.epsilon;
    if (margin) *margin = round.margin;
    if (argmax_tie) *argmax_tie = round.tie ? 1 : 0;
  });
}

/* ---- stability ---- */

af_status af_is_equilibrium(const af_weights* w, const double* state, int m,
                            int n, double tol, int* is_equilibrium,
                            double* residual) {
  return guarded([&] {
    require(w != nullptr, "weights must not be null");
    const af::EquilibriumCheck check =
        af::is_equilibrium(to_matrix(state, m, n, "state"), w->w, tol);
    if (is_equilibrium) *is_equilibrium = check.is_equilibrium ? 1 : 0;
    if (residual) *residual = check.residual;
  });
}

af_status af_classify(const af_weights* w, const double* state, int m, int n,
                      af_report** out) {
  return guarded([&] {
    require(w != nullptr && out != nullptr, "null argument");
    *out = new af_report{af::classify(to_matrix(state, m, n, "state"), w->w)};
  });
}

af_status af_report_classification(const af_report* r, const char** name) {
  return guarded([&] {
    require(r != nullptr && name != nullptr, "null argument");
    *name = af::stability_class_name(r->r.classification);
  });
}

af_status af_report_values(const af_report* r, double* residual, double* eps_est,
                           double* eps_unif) {
  return guarded([&] {
    require(r != nullptr, "report must not be null");
    const double nan = std::nan("");
    if (residual) *residual = r->r.residual;
    if (eps_est) *eps_est = r->r.eps_est.value_or(nan);
    if (eps_unif) *eps_unif = r->r.eps_unif.value_or(nan);
  });
}

long af_report_spectrum_count(const af_report* r) {
  return r ? static_cast<long>(r->r.spectrum.size()) : 0;
}

af_status af_report_spectrum(const af_report* r, double* re, double* im) {
  return guarded([&] {
    require(r != nullptr && re != nullptr && im != nullptr, "null argument");
    for (size_t k = 0; k < r->r.spectrum.size(); ++k) {
      re[k] = r->r.spectrum[k].real();
      im[k] = r->r.spectrum[k].imag();
    }
  });
}

af_status af_report_rates(const af_report* r, double* rates) {
  return guarded([&] {
    require(r != nullptr && rates != nullptr, "null argument");
    require(r->r.rates.has_value(), "report carries no rates");
    from_vector(*r->r.rates, rates);
  });
}

af_status af_report_write(const af_report* r, const char* keyvalue_path,
                          const char* spectrum_csv_path) {
  return guarded([&] {
    require(r != nullptr, "report must not be null");
    if (keyvalue_path) {
      std::ofstream out(keyvalue_path);
      if (!out) af::fail(af::ErrorCode::io_error, std::string("cannot write ") + keyvalue_path);
      out << af::report_to_keyvalue(r->r);
    }
    if (spectrum_csv_path) af::write_spectrum_csv(spectrum_csv_path, r->r.spectrum);
  });
}

void af_report_free(af_report* r) { delete r; }

af_status af_jacobian(const af_weights* w, const double* state, int m, int n,
                      double* jacobian_out) {
  return guarded([&] {
    require(w != nullptr && jacobian_out != nullptr, "null argument");
    from_matrix(af::jacobian(to_matrix(state, m, n, "state"), w->w), jacobian_out);
  });
}

af_status af_eps_est(const af_weights* w, const double* integral_state, int m,
                     int n, double* out) {
  return guarded([&] {
    require(w != nullptr && out != nullptr, "null argument");
    *out = af::eps_est(to_matrix(integral_state, m, n, "state"), w->w);
  });
}

af_status af_eps_unif(const int* neighborhood_sizes, int m, double* out) {
  return guarded([&] {
    require(neighborhood_sizes != nullptr && out != nullptr && m > 0, "null argument");
    *out = af::eps_unif(std::vector<int>(neighborhood_sizes, neighborhood_sizes + m));
  });
}

af_status af_in_attraction_polytope(const af_weights* w, const double* state,
                                    const double* integral_state, int m, int n,
                                    int* inside) {
  return guarded([&] {
    require(w != nullptr && inside != nullptr, "null argument");
    *inside = af::in_attraction_polytope(to_matrix(state, m, n, "state"),
                                         to_matrix(integral_state, m, n, "integral state"),
                                         w->w)
                  ? 1
                  : 0;
  });
}

/* ---- linear assignment flow ---- */

af_status af_linsys_create(const af_weights* w, const double* s_hat,
                           const double* b, const double* w0, int m, int n,
                           af_linear_system** out) {
  return guarded([&] {
    require(w != nullptr && out != nullptr, "null argument");
    const Matrix shat = to_matrix(s_hat, m, n, "s_hat");
    const Matrix base = w0 ? to_matrix(w0, m, n, "w0") : shat;
    if (b == nullptr) {
      *out = new af_linear_system{af::make_homogeneous_system(w->w, shat, base)};
    } else {
      *out = new af_linear_system{
          af::make_linear_system(w->w, shat, to_vector(b, m * n, "b"), base)};
    }
  });
}

af_status af_linsys_apply(const af_linear_system* sys, const double* v,
                          double* out) {
  return guarded([&] {
    require(sys != nullptr && out != nullptr, "null argument");
    from_vector(af::laf_apply(sys->sys, to_vector(v, sys->sys.dim(), "v")), out);
  });
}

af_status af_linsys_homogenize(const af_linear_system* sys, const double* v0,
                               double* shifted_v0, double* shift) {
  return guarded([&] {
    require(sys != nullptr, "system must not be null");
    const Vector start =
        v0 ? to_vector(v0, sys->sys.dim(), "v0") : Vector::Zero(sys->sys.dim());
    const af::Homogenized hom = af::homogenize(sys->sys, start);
    if (shifted_v0) from_vector(hom.shifted_v0, shifted_v0);
    if (shift) from_vector(hom.shift, shift);
  });
}

af_status af_linsys_propagate(const af_linear_system* sys, const double* v0,
                              double t, double* v_out) {
  return guarded([&] {
    require(sys != nullptr && v_out != nullptr, "null argument");
    const Vector start = to_vector(v0, sys->sys.dim(), "v0");
    if (sys->sys.inhomogeneous) {
      const af::Homogenized hom = af::homogenize(sys->sys, start);
      from_vector(af::propagate(hom.system, hom.shifted_v0, t) + hom.shift, v_out);
    } else {
      from_vector(af::propagate(sys->sys, start, t), v_out);
    }
  });
}

af_status af_linsys_spectrum(const af_linear_system* sys, double* re, double* im,
                             int* rank, int* nullspace_dim, int* all_real) {
  return guarded([&] {
    require(sys != nullptr, "system must not be null");
    const af::LafSpectrumReport report = af::laf_spectrum_report(sys->sys);
    for (size_t k = 0; k < report.eigenvalues.size(); ++k) {
      if (re) re[k] = report.eigenvalues[k].real();
      if (im) im[k] = report.eigenvalues[k].imag();
    }
    if (rank) *rank = report.rank;
    if (nullspace_dim) *nullspace_dim = report.nullspace_dim;
    if (all_real) *all_real = report.all_real ? 1 : 0;
  });
}

af_status af_linsys_predict_labels(const af_linear_system* sys, const double* v0,
                                   int* labels_out, int* determinate) {
  return guarded([&] {
    require(sys != nullptr && labels_out != nullptr, "null argument");
    Vector start;
    if (v0 != nullptr) {
      start = to_vector(v0, sys->sys.dim(), "v0");
    } else {
      start = af::homogenize(sys->sys, Vector::Zero(sys->sys.dim())).shifted_v0;
    }
    af::LinearSystem homogeneous = sys->sys;
    homogeneous.inhomogeneous = false;
    const af::LimitPrediction prediction = af::laf_predict_limit(homogeneous, start);
    if (determinate) *determinate = prediction.determinate ? 1 : 0;
    for (int i = 0; i < sys->sys.vertices(); ++i) {
      const int raw = prediction.determinate ? prediction.labels[i] : -1;
      labels_out[i] = raw < 0 ? 0 : raw + 1;
    }
  });
}

void af_linsys_free(af_linear_system* sys) { delete sys; }

af_status af_lift_limit(const double* direction, const double* base, int m,
                        int n, double* state_out, int* tie_count) {
  return guarded([&] {
    require(state_out != nullptr, "state_out must not be null");
    const af::LiftResult result = af::lift_limit(
        to_matrix(direction, m, n, "direction"), to_matrix(base, m, n, "base"));
    from_matrix(result.state, state_out);
    if (tie_count) *tie_count = static_cast<int>(result.tie_rows.size());
  });
}

/* ---- counterexample lab ---- */

af_status af_representative_of(const double* state, int n, double tol,
                               double* p_out) {
  return guarded([&] {
    require(p_out != nullptr, "p_out must not be null");
    from_vector(af::representative_of(to_matrix(state, n, n, "state"), tol), p_out);
  });
}

af_status af_product_diagnostic(const double* p, int n, double alpha, double beta,
                                const double* gamma, int gamma_count, double* pi,
                                double* dpi_dt, int* predicted_sign) {
  return guarded([&] {
    const af::ProductDiagnostic diag = af::product_diagnostic(
        to_vector(p, n, "p"), to_params(n, alpha, beta, gamma, gamma_count));
    if (pi) *pi = diag.pi;
    if (dpi_dt) *dpi_dt = diag.dpi_dt;
    if (predicted_sign) *predicted_sign = diag.predicted_sign;
  });
}

af_status af_regime_classify(int n, double alpha, double beta, const double* gamma,
                             int gamma_count, const char** regime) {
  return guarded([&] {
    require(regime != nullptr, "regime must not be null");
    *regime = af::regime_name(
        af::regime_classify(to_params(n, alpha, beta, gamma, gamma_count)));
  });
}

af_status af_run_representative(const af_weights* circulant, const double* p0,
                                int n, double h, long max_steps,
                                double stop_min_entry, double* p_final,
                                double* winding, double* pi_final,
                                double* min_entry, long* steps_run) {
  return guarded([&] {
    require(circulant != nullptr, "weights must not be null");
    af::RepresentativeRunConfig cfg;
    cfg.h = h;
    cfg.max_steps = max_steps;
    cfg.stop_min_entry = stop_min_entry;
    const af::RepresentativeRun run =
        af::run_representative(to_vector(p0, n, "p0"), circulant->w, cfg);
    if (p_final) from_vector(run.p_final, p_final);
    if (winding) *winding = run.winding;
    if (pi_final) *pi_final = run.pi_final;
    if (min_entry) *min_entry = run.min_entry;
    if (steps_run) *steps_run = run.steps;
  });
}

/* ---- pipeline ---- */

af_status af_compute_distances(const double* features, int m, int dim,
                               const double* prototypes, int n, double scale,
                               double* distances_out) {
  return guarded([&] {
    require(distances_out != nullptr, "distances_out must not be null");
    af::LabelSet labels{to_matrix(prototypes, n, dim, "prototypes"), scale};
    from_matrix(af::compute_distances(to_matrix(features, m, dim, "features"), labels),
                distances_out);
  });
}

af_status af_label_grid(const double* features, int height, int width, int dim,
                        const double* prototypes, int n, double scale, int radius,
                        const af_integrator_config* cfg, int* labels_out,
                        af_termination* termination_out, af_report** report_out) {
  return guarded([&] {
    require(labels_out != nullptr, "labels_out must not be null");
    const af::WeightMatrix omega = af::build_uniform_weights({height, width, radius});
    af::LabelSet labels{to_matrix(prototypes, n, dim, "prototypes"), scale};
    const af::LabelingResult result =
        af::label(to_matrix(features, height * width, dim, "features"), labels, omega,
                  to_config(cfg));
    for (size_t i = 0; i < result.labels.size(); ++i)
      labels_out[i] = result.labels[i] + 1;
    fill_termination(result.termination, termination_out);
    if (report_out != nullptr)
      *report_out = result.has_report ? new af_report{result.report} : nullptr;
  });
}

af_status af_read_features(const char* path, int* height, int* width, int* dim,
                           double** features) {
  return guarded([&] {
    require(path != nullptr && features != nullptr, "null argument");
    int h = 0, w = 0;
    const Matrix m = af::read_features(path, &h, &w);
    double* buffer = new double[static_cast<size_t>(m.rows()) * m.cols()];
    from_matrix(m, buffer);
    *features = buffer;
    if (height) *height = h;
    if (width) *width = w;
    if (dim) *dim = static_cast<int>(m.cols());
  });
}

af_status af_read_matrix_csv(const char* path, int* rows, int* cols,
                             double** values) {
  return guarded([&] {
    require(path != nullptr && values != nullptr, "null argument");
    const Matrix m = af::read_matrix_csv(path);
    double* buffer = new double[static_cast<size_t>(m.rows()) * m.cols()];
    from_matrix(m, buffer);
    *values = buffer;
    if (rows) *rows = static_cast<int>(m.rows());
    if (cols) *cols = static_cast<int>(m.cols());
  });
}

af_status af_write_ppm(const char* path, const double* rgb, int height,
                       int width) {
  return guarded([&] {
    require(path != nullptr, "path must not be null");
    af::write_ppm(path, to_matrix(rgb, height * width, 3, "rgb"), height, width);
  });
}

af_status af_write_labeling_csv(const char* path, const int* labels, int count,
                                int row_width) {
  return guarded([&] {
    require(path != nullptr && labels != nullptr && count > 0, "null argument");
    std::vector<int> zero_based(count);
    for (int i = 0; i < count; ++i) zero_based[i] = labels[i] - 1;
    af::write_labeling_csv(path, zero_based, row_width);
  });
}

af_status af_write_certificate(const char* path, const af_termination* termination,
                               const af_report* report) {
  return guarded([&] {
    require(path != nullptr && termination != nullptr, "null argument");
    af::write_certificate(path, to_record(termination), report ? &report->r : nullptr);
  });
}

af_status af_demo_tricolor(double* features, int* height, int* width) {
  return guarded([&] {
    require(features != nullptr, "features must not be null");
    from_matrix(af::tricolor_demo_features(), features);
    if (height) *height = 12;
    if (width) *width = 12;
  });
}

}  // extern "C"
