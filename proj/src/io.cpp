#include "af/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace af {

namespace {

std::ifstream open_input(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out.precision(17);
  return out;
}

// next whitespace-delimited token, skipping `#` comment lines
std::string pnm_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (tok[0] != '#') return tok;
    std::string rest;
    std::getline(in, rest);
  }
  fail(ErrorCode::data_error, "truncated PNM header");
}

std::vector<double> parse_csv_line(const std::string& line) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    try {
      values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      fail(ErrorCode::data_error, "bad numeric cell '" + cell + "'");
    }
  }
  return values;
}

bool numeric_start(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t') continue;
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
  }
  return false;
}

Matrix read_csv_rows(std::istream& in, const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first && !numeric_start(line)) {  // header line
      first = false;
      continue;
    }
    first = false;
    rows.push_back(parse_csv_line(line));
    if (rows.back().empty()) rows.pop_back();
  }
  if (rows.empty()) fail(ErrorCode::data_error, path + ": no data rows");
  const size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) fail(ErrorCode::data_error, path + ": ragged CSV rows");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

Matrix read_features(const std::string& path, int* height, int* width) {
  if (height) *height = 0;
  if (width) *width = 0;
  std::ifstream probe = open_input(path, true);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  probe.seekg(0);
  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) {
    const int channels = magic[1] == '6' ? 3 : 1;
    pnm_token(probe);  // magic
    const int w = std::stoi(pnm_token(probe));
    const int h = std::stoi(pnm_token(probe));
    const int maxval = std::stoi(pnm_token(probe));
    if (w < 1 || h < 1) fail(ErrorCode::data_error, path + ": bad image size");
    if (maxval != 255) fail(ErrorCode::unsupported, path + ": only maxval 255 supported");
    probe.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(static_cast<size_t>(w) * h * channels);
    probe.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (probe.gcount() != static_cast<std::streamsize>(raw.size()))
      fail(ErrorCode::data_error, path + ": truncated pixel data");
    Matrix features(w * h, channels);
    for (int i = 0; i < w * h; ++i)
      for (int c = 0; c < channels; ++c)
        features(i, c) = raw[static_cast<size_t>(i) * channels + c] / 255.0;
    if (height) *height = h;
    if (width) *width = w;
    return features;
  }
  std::ifstream in = open_input(path);
  return read_csv_rows(in, path);
}

void write_ppm(const std::string& path, const Matrix& rgb, int height, int width) {
  if (rgb.cols() != 3 || rgb.rows() != static_cast<long>(height) * width)
    fail(ErrorCode::invalid_argument, "write_ppm: need height*width rows of RGB");
  std::ofstream out = open_output(path, true);
  out << "P6\n" << width << " " << height << "\n255\n";
  for (int i = 0; i < rgb.rows(); ++i)
    for (int c = 0; c < 3; ++c) {
      const double clamped = std::clamp(rgb(i, c), 0.0, 1.0);
      out.put(static_cast<char>(std::lround(clamped * 255.0)));
    }
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_csv_rows(in, path);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out = open_output(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << "\n";
  }
}

WeightMatrix read_weights_edge_csv(const std::string& path) {
  const Matrix edges = read_matrix_csv(path);
  if (edges.cols() != 3)
    fail(ErrorCode::data_error, path + ": expected columns i,k,omega");
  int m = 0;
  for (int r = 0; r < edges.rows(); ++r)
    m = std::max(m, static_cast<int>(std::max(edges(r, 0), edges(r, 1))) + 1);
  std::vector<int> rows(edges.rows()), cols(edges.rows());
  std::vector<double> values(edges.rows());
  for (int r = 0; r < edges.rows(); ++r) {
    rows[r] = static_cast<int>(edges(r, 0));
    cols[r] = static_cast<int>(edges(r, 1));
    values[r] = edges(r, 2);
  }
  return WeightMatrix::from_triplets(m, rows, cols, values);
}

void write_weights_edge_csv(const std::string& path, const WeightMatrix& omega) {
  std::ofstream out = open_output(path);
  out << "i,k,omega\n";
  for (int i = 0; i < omega.size(); ++i)
    for (const auto& e : omega.row(i)) out << i << "," << e.col << "," << e.value << "\n";
}

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
  std::ofstream out = open_output(path);
  out << "t,i,j,value\n";
  for (long k = 0; k < trajectory.count(); ++k) {
    const Matrix& s = trajectory.states[k];
    for (int i = 0; i < s.rows(); ++i)
      for (int j = 0; j < s.cols(); ++j)
        out << trajectory.times[k] << "," << i << "," << j << "," << s(i, j) << "\n";
  }
}

void write_diagnostics_csv(const std::string& path, const Trajectory& trajectory) {
  std::ofstream out = open_output(path);
  out << "t,avg_entropy,lyapunov,min_rowmax\n";
  for (long k = 0; k < trajectory.count(); ++k) {
    const auto& d = trajectory.diagnostics[k];
    out << trajectory.times[k] << "," << d.avg_entropy << "," << d.lyapunov << ","
        << d.min_rowmax << "\n";
  }
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<std::complex<double>>& eigenvalues) {
  std::ofstream out = open_output(path);
  out << "re,im\n";
  for (const auto& z : eigenvalues) out << z.real() << "," << z.imag() << "\n";
}

void write_labeling_csv(const std::string& path, const std::vector<int>& labels,
                        int width) {
  std::ofstream out = open_output(path);
  if (width < 1) width = static_cast<int>(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    out << labels[i] + 1;  // 1-based label ids on disk
    out << (((i + 1) % width == 0 || i + 1 == labels.size()) ? "\n" : ",");
  }
}

void write_certificate(const std::string& path, const TerminationRecord& termination,
                       const StabilityReport* report) {
  std::ofstream out = open_output(path);
  out << "termination=" << termination_reason_name(termination.reason) << "\n";
  out << "steps=" << termination.steps << "\n";
  out << "time=" << termination.time << "\n";
  out << "final_entropy=" << termination.final_entropy << "\n";
  const CertifiedRound& cert = termination.certificate;
  out << "certified=" << (cert.certified ? "true" : "false") << "\n";
  out << "argmax_tie=" << (cert.tie ? "true" : "false") << "\n";
  out << "epsilon=" << cert.epsilon << "\n";
  out << "max_l1_distance=" << cert.max_l1 << "\n";
  out << "margin=" << cert.margin << "\n";
  if (report) out << report_to_keyvalue(*report);
}

}  // namespace af
