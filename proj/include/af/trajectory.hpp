#ifndef AF_TRAJECTORY_HPP
#define AF_TRAJECTORY_HPP

#include <vector>

#include "af/types.hpp"

namespace af {

/// Recorded integration samples plus per-sample scalar diagnostics.
/// Times are strictly increasing; states live on the closed manifold.
struct Trajectory {
  struct Diagnostics {
    double avg_entropy = 0.0;
    double lyapunov = 0.0;  // NaN when no (w, OmegaHat) factorization
    double min_rowmax = 0.0;
  };

  std::vector<double> times;
  std::vector<Matrix> states;
  std::vector<Diagnostics> diagnostics;

  long count() const { return static_cast<long>(times.size()); }
  bool empty() const { return times.empty(); }
};

}  // namespace af

#endif
