// afcli — command-line front end of the assignflow shared library.
//
// Subcommands:
//   label           certified labeling of grid data
//   stability       classify an equilibrium and export its report/spectrum
//   portrait        phase-portrait sample grids for small systems
//   counterexample  circulant lab: regimes, runs, parameter sweeps
//   linflow         linear assignment flow: spectrum and limit prediction
//
// Exit codes: 0 success (for `label`: certified), 1 error, 2 uncertified.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "assignflow.h"

namespace {

[[noreturn]] void die(const std::string& context);

// parses "HxW" grid shapes
void parse_grid(const std::string& text, int* height, int* width) {
  const auto sep = text.find('x');
  if (sep == std::string::npos) {
    *height = *width = 0;
    return;
  }
  *height = std::atoi(text.substr(0, sep).c_str());
  *width = std::atoi(text.substr(sep + 1).c_str());
}

[[noreturn]] void die(const std::string& context) {
  std::cerr << "error: " << context;
  const char* detail = af_last_error();
  if (detail != nullptr && detail[0] != '\0') std::cerr << ": " << detail;
  std::cerr << "\n";
  std::exit(1);
}

void check(af_status status, const std::string& context) {
  if (status != AF_OK) die(context);
}

struct WeightsHandle {
  af_weights* ptr = nullptr;
  ~WeightsHandle() { af_weights_free(ptr); }
};

struct Buffer {
  double* ptr = nullptr;
  ~Buffer() { af_buffer_free(ptr); }
};

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) die("cannot create output directory " + out_dir);
  return dir;
}

void write_csv_matrix(const std::string& path, const std::vector<double>& values,
                      int rows, int cols) {
  std::ofstream out(path);
  if (!out) die("cannot write " + path);
  out.precision(17);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) out << (j ? "," : "") << values[i * cols + j];
    out << "\n";
  }
}

// ------------------------------------------------------------------ label

struct LabelArgs {
  std::string input;
  std::string prototypes;
  std::string out_dir = "out";
  bool demo = false;
  int radius = 1;
  double scale = 1.0;
  af_integrator_config cfg{};
  std::string mode = "certified";
};

int run_label(const LabelArgs& args) {
  int height = 0, width = 0, dim = 0;
  std::vector<double> features;
  if (args.demo) {
    height = width = 12;
    dim = 3;
    features.resize(144 * 3);
    check(af_demo_tricolor(features.data(), &height, &width), "building demo instance");
  } else {
    Buffer raw;
    check(af_read_features(args.input.c_str(), &height, &width, &dim, &raw.ptr),
          "reading " + args.input);
    if (height == 0 || width == 0)
      die(args.input + " carries no grid shape; supply a PGM/PPM image");
    features.assign(raw.ptr, raw.ptr + static_cast<size_t>(height) * width * dim);
  }
  const int m = height * width;

  std::vector<double> protos;
  int n = 0;
  if (!args.prototypes.empty()) {
    Buffer raw;
    int rows = 0, cols = 0;
    check(af_read_matrix_csv(args.prototypes.c_str(), &rows, &cols, &raw.ptr),
          "reading " + args.prototypes);
    if (cols != dim) die("prototype dimension does not match the input features");
    n = rows;
    protos.assign(raw.ptr, raw.ptr + static_cast<size_t>(rows) * cols);
  } else {
    // default: one unit-vector prototype per feature channel
    if (dim < 2) die("need --prototypes for single-channel input");
    n = dim;
    protos.assign(static_cast<size_t>(n) * dim, 0.0);
    for (int j = 0; j < n; ++j) protos[static_cast<size_t>(j) * dim + j] = 1.0;
  }

  af_integrator_config cfg = args.cfg;
  if (args.mode == "entropy") cfg.mode = AF_TERMINATE_ENTROPY;
  else if (args.mode == "certified") cfg.mode = AF_TERMINATE_ATTRACTION_CERTIFIED;
  else if (args.mode == "fixed") cfg.mode = AF_TERMINATE_FIXED_STEPS;
  else die("unknown termination mode " + args.mode);

  std::vector<int> labels(m);
  af_termination term;
  af_report* report = nullptr;
  check(af_label_grid(features.data(), height, width, dim, protos.data(), n,
                      args.scale, args.radius, &cfg, labels.data(), &term, &report),
        "labeling");

  const auto dir = prepare_out_dir(args.out_dir);
  check(af_write_labeling_csv((dir / "labeling.csv").string().c_str(), labels.data(),
                              m, width),
        "writing labeling");
  check(af_write_certificate((dir / "certificate.txt").string().c_str(), &term, report),
        "writing certificate");
  if (report != nullptr) {
    check(af_report_write(report, (dir / "report.txt").string().c_str(),
                          (dir / "spectrum.csv").string().c_str()),
          "writing report");
    af_report_free(report);
  }

  // re-run the integration once more to export the trajectory files
  WeightsHandle w;
  check(af_weights_grid_uniform(height, width, args.radius, &w.ptr), "building weights");
  std::vector<double> distances(static_cast<size_t>(m) * n);
  check(af_compute_distances(features.data(), m, dim, protos.data(), n, args.scale,
                             distances.data()),
        "computing distances");
  std::vector<double> s0(static_cast<size_t>(m) * n);
  check(af_sflow_init(w.ptr, distances.data(), m, n, s0.data()), "initializing flow");
  af_trajectory* traj = nullptr;
  af_termination term2;
  check(af_integrate(w.ptr, s0.data(), m, n, &cfg, &traj, &term2), "integrating");
  check(af_trajectory_write_csv(traj, (dir / "trajectory.csv").string().c_str(),
                                (dir / "diagnostics.csv").string().c_str()),
        "writing trajectory");
  af_trajectory_free(traj);

  std::cout << "labeling written to " << (dir / "labeling.csv").string() << "\n";
  std::cout << "termination: steps=" << term.steps << " entropy=" << term.final_entropy
            << " certified=" << (term.certified ? "true" : "false");
  if (term.certified)
    std::cout << " epsilon=" << term.epsilon << " margin=" << term.margin;
  if (term.argmax_tie) std::cout << " (argmax tie)";
  std::cout << "\n";
  return term.certified ? 0 : 2;
}

// -------------------------------------------------------------- stability

int run_stability(const std::string& state_path, const std::string& weights_path,
                  int grid_h, int grid_w, int radius, const std::string& out_dir) {
  Buffer raw;
  int m = 0, n = 0;
  check(af_read_matrix_csv(state_path.c_str(), &m, &n, &raw.ptr),
        "reading " + state_path);

  WeightsHandle w;
  if (!weights_path.empty()) {
    check(af_weights_read_csv(weights_path.c_str(), &w.ptr), "reading " + weights_path);
  } else if (grid_h > 0 && grid_w > 0) {
    check(af_weights_grid_uniform(grid_h, grid_w, radius, &w.ptr), "building weights");
  } else {
    die("supply --weights or --grid HxW");
  }
  if (af_weights_size(w.ptr) != m) die("weight matrix size does not match the state");

  int is_eq = 0;
  double residual = 0.0;
  check(af_is_equilibrium(w.ptr, raw.ptr, m, n, 1e-9, &is_eq, &residual),
        "equilibrium check");
  if (!is_eq) {
    std::cout << "not an equilibrium (residual " << residual << ")\n";
    return 2;
  }

  af_report* report = nullptr;
  check(af_classify(w.ptr, raw.ptr, m, n, &report), "classifying");
  const auto dir = prepare_out_dir(out_dir);
  check(af_report_write(report, (dir / "report.txt").string().c_str(),
                        (dir / "spectrum.csv").string().c_str()),
        "writing report");
  const char* name = nullptr;
  check(af_report_classification(report, &name), "reading classification");
  double res = 0, eps_est = 0, eps_unif = 0;
  check(af_report_values(report, &res, &eps_est, &eps_unif), "reading report");
  std::cout << "classification: " << name << "\n";
  if (!std::isnan(eps_est)) std::cout << "eps_est: " << eps_est << "\n";
  if (!std::isnan(eps_unif)) std::cout << "eps_unif: " << eps_unif << "\n";
  std::cout << "report written to " << (dir / "report.txt").string() << "\n";
  af_report_free(report);
  return 0;
}

// --------------------------------------------------------------- portrait

int run_portrait(const std::string& weights_path, bool representative, double alpha,
                 double gamma, int resolution, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) die("cannot write " + out_path);
  out.precision(17);

  if (representative) {
    WeightsHandle w;
    check(af_weights_circulant(3, alpha, 1.0 - alpha, &gamma, 1, &w.ptr),
          "building circulant weights");
    out << "p1,p2,p3,rhs1,rhs2,rhs3\n";
    const double step = 1.0 / (resolution - 1);
    for (int a = 0; a < resolution; ++a)
      for (int b = 0; b + a < resolution; ++b) {
        const double p[3] = {a * step, b * step, 1.0 - (a + b) * step};
        if (p[2] < 0.0) continue;
        double rhs[3];
        check(af_representative_rhs(w.ptr, p, 3, rhs), "sampling field");
        out << p[0] << "," << p[1] << "," << p[2] << "," << rhs[0] << "," << rhs[1]
            << "," << rhs[2] << "\n";
      }
  } else {
    WeightsHandle w;
    check(af_weights_read_csv(weights_path.c_str(), &w.ptr), "reading " + weights_path);
    const int m = af_weights_size(w.ptr);
    if (m > 3) die("portrait supports at most 3 vertices (2-label systems)");
    out << "s1";
    for (int i = 1; i < m; ++i) out << ",s" << i + 1;
    for (int i = 0; i < m; ++i) out << ",rhs" << i + 1;
    out << "\n";
    const double step = 1.0 / (resolution - 1);
    std::vector<int> idx(m, 0);
    bool carry = false;
    while (!carry) {
      std::vector<double> state(2 * m), rhs(2 * m);
      for (int i = 0; i < m; ++i) {
        state[i * 2] = idx[i] * step;
        state[i * 2 + 1] = 1.0 - state[i * 2];
      }
      check(af_sflow_rhs(w.ptr, state.data(), m, 2, rhs.data()), "sampling field");
      for (int i = 0; i < m; ++i) out << (i ? "," : "") << state[i * 2];
      for (int i = 0; i < m; ++i) out << "," << rhs[i * 2];
      out << "\n";
      carry = true;
      for (int i = 0; i < m && carry; ++i) {
        if (++idx[i] < resolution) carry = false;
        else idx[i] = 0;
      }
    }
  }
  std::cout << "portrait written to " << out_path << "\n";
  return 0;
}

// --------------------------------------------------------- counterexample

int run_counterexample(double alpha, double gamma, double h, long steps,
                       const std::string& p0_csv, double stop_min,
                       const std::string& sweep_path, const std::string& out_dir) {
  const auto dir = prepare_out_dir(out_dir);
  double p0[3] = {0.36, 0.33, 0.31};
  if (!p0_csv.empty()) {
    std::istringstream cells(p0_csv);
    std::string cell;
    int k = 0;
    while (std::getline(cells, cell, ',') && k < 3) p0[k++] = std::stod(cell);
    const double total = p0[0] + p0[1] + p0[2];
    if (k != 3 || std::abs(total - 1.0) > 1e-9) die("--p0 must be three values summing to 1");
  }

  std::vector<std::pair<double, double>> runs;
  if (!sweep_path.empty()) {
    std::ifstream in(sweep_path);
    if (!in) die("cannot open " + sweep_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' || line[0] == '+' ||
                            line[0] == '.'))
        continue;
      std::istringstream cells(line);
      std::string a, g;
      if (std::getline(cells, a, ',') && std::getline(cells, g, ','))
        runs.emplace_back(std::stod(a), std::stod(g));
    }
    if (runs.empty()) die("no alpha,gamma rows in " + sweep_path);
  } else {
    runs.emplace_back(alpha, gamma);
  }

  const std::string csv_path = (dir / "sweep.csv").string();
  std::ofstream csv(csv_path);
  if (!csv) die("cannot write " + csv_path);
  csv.precision(17);
  csv << "alpha,gamma,regime,final_pi,winding\n";
  for (const auto& [a, g] : runs) {
    const char* regime = nullptr;
    check(af_regime_classify(3, a, 1.0 - a, &g, 1, &regime), "classifying regime");
    WeightsHandle w;
    check(af_weights_circulant(3, a, 1.0 - a, &g, 1, &w.ptr), "building weights");
    double p_final[3], winding = 0, pi_final = 0, min_entry = 0;
    long steps_run = 0;
    check(af_run_representative(w.ptr, p0, 3, h, steps, stop_min, p_final, &winding,
                                &pi_final, &min_entry, &steps_run),
          "integrating representative flow");
    csv << a << "," << g << "," << regime << "," << pi_final << "," << winding << "\n";
    std::cout << "alpha=" << a << " gamma=" << g << " regime=" << regime
              << " steps=" << steps_run << " final_pi=" << pi_final
              << " winding=" << winding << " min_entry=" << min_entry << "\n";
  }
  std::cout << "sweep written to " << csv_path << "\n";
  return 0;
}

// ------------------------------------------------------------------ linflow

int run_linflow(const std::string& distances_path, const std::string& weights_path,
                int grid_h, int grid_w, int radius, const std::string& out_dir) {
  Buffer draw;
  int m = 0, n = 0;
  check(af_read_matrix_csv(distances_path.c_str(), &m, &n, &draw.ptr),
        "reading " + distances_path);

  WeightsHandle w;
  if (!weights_path.empty()) {
    check(af_weights_read_csv(weights_path.c_str(), &w.ptr), "reading " + weights_path);
  } else if (grid_h > 0 && grid_w > 0) {
    check(af_weights_grid_uniform(grid_h, grid_w, radius, &w.ptr), "building weights");
  } else {
    die("supply --weights or --grid HxW");
  }
  if (af_weights_size(w.ptr) != m) die("weight matrix size does not match the distances");

  // s_hat = initial flow state; data coupling through the replicator rows
  std::vector<double> shat(static_cast<size_t>(m) * n);
  check(af_sflow_init(w.ptr, draw.ptr, m, n, shat.data()), "initializing base point");

  std::vector<double> dense(static_cast<size_t>(m) * m);
  check(af_weights_dense(w.ptr, dense.data()), "reading weights");
  std::vector<double> b(static_cast<size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i) {
    std::vector<double> mixed(n, 0.0);
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < n; ++j)
        mixed[j] -= dense[static_cast<size_t>(i) * m + k] * draw.ptr[static_cast<size_t>(k) * n + j];
    double mean = 0.0;
    for (int j = 0; j < n; ++j) mean += shat[static_cast<size_t>(i) * n + j] * mixed[j];
    for (int j = 0; j < n; ++j)
      b[static_cast<size_t>(i) * n + j] =
          shat[static_cast<size_t>(i) * n + j] * (mixed[j] - mean);
  }

  af_linear_system* sys = nullptr;
  check(af_linsys_create(w.ptr, shat.data(), b.data(), nullptr, m, n, &sys),
        "building linear system");

  std::vector<double> re(static_cast<size_t>(m) * n), im(static_cast<size_t>(m) * n);
  int rank = 0, nullspace = 0, all_real = 0;
  check(af_linsys_spectrum(sys, re.data(), im.data(), &rank, &nullspace, &all_real),
        "computing spectrum");

  const auto dir = prepare_out_dir(out_dir);
  {
    std::ofstream out(dir / "spectrum.csv");
    if (!out) die("cannot write spectrum.csv");
    out.precision(17);
    out << "re,im\n";
    for (size_t k = 0; k < re.size(); ++k) out << re[k] << "," << im[k] << "\n";
  }

  std::vector<int> labels(m);
  int determinate = 0;
  check(af_linsys_predict_labels(sys, nullptr, labels.data(), &determinate),
        "predicting limit");
  af_linsys_free(sys);

  check(af_write_labeling_csv((dir / "predicted_labels.csv").string().c_str(),
                              labels.data(), m, grid_w > 0 ? grid_w : m),
        "writing predicted labels");

  std::cout << "rank=" << rank << " nullspace_dim=" << nullspace
            << " real_spectrum=" << (all_real ? "true" : "false")
            << " prediction=" << (determinate ? "determinate" : "indeterminate") << "\n";
  std::cout << "spectrum written to " << (dir / "spectrum.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"assignment-flow data labeling with stability certificates"};
  app.set_help_flag("--help", "print this help message");  // keep --h free
  app.require_subcommand(1);

  unsigned seed = 0;  // recorded in outputs-to-come; runs themselves are deterministic

  LabelArgs label_args;
  af_integrator_config_init(&label_args.cfg);
  auto* label_cmd = app.add_subcommand("label", "certified labeling of grid data");
  label_cmd->add_option("--input", label_args.input, "PGM/PPM image or CSV feature rows");
  label_cmd->add_flag("--demo", label_args.demo, "run the bundled 12x12 tri-color instance");
  label_cmd->add_option("--prototypes", label_args.prototypes,
                        "CSV of prototype rows (default: unit vectors per channel)");
  label_cmd->add_option("--radius", label_args.radius, "neighborhood Chebyshev radius");
  label_cmd->add_option("--scale", label_args.scale, "distance scale factor");
  label_cmd->add_option("--h", label_args.cfg.h, "integration step size");
  label_cmd->add_option("--entropy-eps", label_args.cfg.entropy_threshold,
                        "average-entropy termination threshold");
  label_cmd->add_option("--max-steps", label_args.cfg.max_steps, "step budget");
  label_cmd->add_option("--record-every", label_args.cfg.record_every,
                        "sampling/certificate-check stride");
  label_cmd->add_option("--mode", label_args.mode, "entropy | certified | fixed");
  label_cmd->add_option("--out-dir", label_args.out_dir, "output directory");
  label_cmd->add_option("--seed", seed, "seed recorded in output metadata");

  std::string st_state, st_weights, st_grid, st_out = "out";
  int st_radius = 1;
  auto* st_cmd = app.add_subcommand("stability", "classify an equilibrium state");
  st_cmd->add_option("--state", st_state, "CSV with one simplex row per vertex")->required();
  st_cmd->add_option("--weights", st_weights, "edge-list CSV i,k,omega");
  st_cmd->add_option("--grid", st_grid, "HxW grid with uniform weights");
  st_cmd->add_option("--radius", st_radius, "neighborhood radius for --grid");
  st_cmd->add_option("--out-dir", st_out, "output directory");

  std::string po_weights, po_out = "portrait.csv";
  bool po_rep = false;
  double po_alpha = 0.0, po_gamma = 1.0 / 3.0;
  int po_res = 21;
  auto* po_cmd = app.add_subcommand("portrait", "sample a phase portrait grid");
  po_cmd->add_option("--weights", po_weights, "edge-list CSV (2-label mode)");
  po_cmd->add_flag("--representative", po_rep, "representative 3-label circulant mode");
  po_cmd->add_option("--alpha", po_alpha, "circulant alpha");
  po_cmd->add_option("--gamma", po_gamma, "circulant gamma");
  po_cmd->add_option("--resolution", po_res, "grid points per axis");
  po_cmd->add_option("--out", po_out, "output CSV path");

  double ce_alpha = 0.0, ce_gamma = 1.0 / 3.0, ce_h = 0.01, ce_stop = 0.0;
  long ce_steps = 100000;
  std::string ce_p0, ce_sweep, ce_out = "out";
  auto* ce_cmd = app.add_subcommand("counterexample", "circulant averaging lab");
  ce_cmd->add_option("--alpha", ce_alpha, "circulant alpha");
  ce_cmd->add_option("--gamma", ce_gamma, "circulant gamma");
  ce_cmd->add_option("--h", ce_h, "step size");
  ce_cmd->add_option("--max-steps", ce_steps, "step budget");
  ce_cmd->add_option("--p0", ce_p0, "initial point, three comma-separated values");
  ce_cmd->add_option("--stop-min", ce_stop, "stop when min_j p_j drops below this");
  ce_cmd->add_option("--sweep", ce_sweep, "CSV of alpha,gamma rows to sweep");
  ce_cmd->add_option("--out-dir", ce_out, "output directory");

  std::string lf_distances, lf_weights, lf_grid, lf_out = "out";
  int lf_radius = 1;
  auto* lf_cmd = app.add_subcommand("linflow", "linear assignment flow analysis");
  lf_cmd->add_option("--distances", lf_distances, "CSV distance matrix")->required();
  lf_cmd->add_option("--weights", lf_weights, "edge-list CSV i,k,omega");
  lf_cmd->add_option("--grid", lf_grid, "HxW grid with uniform weights");
  lf_cmd->add_option("--radius", lf_radius, "neighborhood radius for --grid");
  lf_cmd->add_option("--out-dir", lf_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (label_cmd->parsed()) {
      if (!label_args.demo && label_args.input.empty())
        die("label needs --input or --demo");
      if (label_args.demo && label_cmd->count("--scale") == 0)
        label_args.scale = 10.0;  // the bundled instance uses D = 10 * distance
      return run_label(label_args);
    }
    if (st_cmd->parsed()) {
      int st_h = 0, st_w = 0;
      parse_grid(st_grid, &st_h, &st_w);
      return run_stability(st_state, st_weights, st_h, st_w, st_radius, st_out);
    }
    if (po_cmd->parsed()) {
      if (!po_rep && po_weights.empty()) die("portrait needs --weights or --representative");
      return run_portrait(po_weights, po_rep, po_alpha, po_gamma, po_res, po_out);
    }
    if (ce_cmd->parsed())
      return run_counterexample(ce_alpha, ce_gamma, ce_h, ce_steps, ce_p0, ce_stop,
                                ce_sweep, ce_out);
    if (lf_cmd->parsed()) {
      int lf_h = 0, lf_w = 0;
      parse_grid(lf_grid, &lf_h, &lf_w);
      return run_linflow(lf_distances, lf_weights, lf_h, lf_w, lf_radius, lf_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
