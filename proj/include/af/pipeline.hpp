#ifndef AF_PIPELINE_HPP
#define AF_PIPELINE_HPP

#include <iosfwd>
#include <vector>

#include "af/counterexample.hpp"
#include "af/integrator.hpp"
#include "af/stability.hpp"
#include "af/types.hpp"
#include "af/weights.hpp"

namespace af {

/// Regular pixel grid with Chebyshev neighborhoods (radius 1 = 3x3),
/// shrunk where the window intersects the boundary.
struct GridSpec {
  int height = 0;
  int width = 0;
  int radius = 1;

  int vertices() const { return height * width; }
};

/// Uniform weights 1/|N_i| over the grid neighborhoods; row-stochastic with
/// positive diagonal, carrying the factorization w_i = |N_i|,
/// OmegaHat = 0/1 adjacency-with-self.
WeightMatrix build_uniform_weights(const GridSpec& grid);

struct LabelSet {
  Matrix prototypes;   // n x d, pairwise distinct, n >= 2
  double scale = 1.0;  // multiplier on the Euclidean distances

  void validate() const;
};

/// D_ij = scale * || f_i - prototype_j ||_2.
Matrix compute_distances(const Matrix& features, const LabelSet& labels);

struct LabelingResult {
  std::vector<int> labels;  // 0-based argmax of the final state
  TerminationRecord termination;
  CertifiedRound certificate;
  bool has_report = false;
  StabilityReport report;   // classification of the rounded state
  Trajectory trajectory;
  Matrix final_state;

  bool certified() const { return certificate.certified; }
};

/// Full certified labeling loop: sflow_init, integrate, certified_round,
/// classify of the rounded state. Uncertified termination is a result,
/// not an error.
LabelingResult label(const Matrix& features, const LabelSet& labels,
                     const WeightMatrix& omega, const IntegratorConfig& cfg);

/// Samples the S-flow field of a 2-label system with at most 3 free row
/// coordinates on a regular grid; long-format CSV.
void phase_portrait_sflow(const WeightMatrix& omega, int resolution,
                          std::ostream& out);

/// Samples the representative flow of a 3-label circulant system over the
/// barycentric grid; long-format CSV.
void phase_portrait_representative(const CirculantParams& params, int resolution,
                                   std::ostream& out);

// Bundled 12x12 tri-color instance: red background with a green and a blue
// quadrilateral; unit-vector prototypes, distance scale 10, radius-1
// uniform weights.
Matrix tricolor_demo_features();  // 144 x 3
GridSpec tricolor_demo_grid();
LabelSet tricolor_demo_labels();

}  // namespace af

#endif
