#ifndef AF_IO_HPP
#define AF_IO_HPP

#include <complex>
#include <string>
#include <vector>

#include "af/integrator.hpp"
#include "af/stability.hpp"
#include "af/trajectory.hpp"
#include "af/types.hpp"
#include "af/weights.hpp"

namespace af {

/// Per-pixel feature rows from a binary PGM (P5) or PPM (P6) with maxval
/// 255 (features scaled to [0,1]), or a plain CSV of feature rows.
/// For images, height/width are filled; for CSV they are 0.
Matrix read_features(const std::string& path, int* height, int* width);

void write_ppm(const std::string& path, const Matrix& rgb, int height, int width);

Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);

/// Edge-list CSV `i,k,omega` (0-based vertex ids, optional header line).
WeightMatrix read_weights_edge_csv(const std::string& path);
void write_weights_edge_csv(const std::string& path, const WeightMatrix& omega);

/// Long-format state samples `t,i,j,value`.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);
/// Compact per-sample diagnostics `t,avg_entropy,lyapunov,min_rowmax`.
void write_diagnostics_csv(const std::string& path, const Trajectory& trajectory);

/// Spectrum CSV with `re,im` columns.
void write_spectrum_csv(const std::string& path,
                        const std::vector<std::complex<double>>& eigenvalues);

/// Labeling as integer CSV in row-major grid order, 1-based label ids.
void write_labeling_csv(const std::string& path, const std::vector<int>& labels,
                        int width);

/// Certificate / report as flat `key=value` lines.
void write_certificate(const std::string& path, const TerminationRecord& termination,
                       const StabilityReport* report);

}  // namespace af

#endif
