#pragma once

#include "dlab/qmat.hpp"

#include <functional>
#include <optional>

// Measurement/dephasing machinery and the generic optimizer over local bases
// that every deficit calculator calls. Projective (von Neumann) measurements
// only; no POVMs.

namespace dlab::measure {

using qmat::DensityMatrix;
using qmat::Matrix;
using qmat::Vector;

/// Orthonormal basis on one tensor factor (columns of `vectors`).
struct LocalBasis {
  int factor = 0;
  Matrix vectors;
  void validate(int expected_dim = -1) const;  // unitarity within 1e-10
};

/// Qubit basis {cos(t/2)|0> + e^{ip} sin(t/2)|1>, e^{-ip} sin(t/2)|0> - cos(t/2)|1>}.
struct BlochBasis {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2pi)
  LocalBasis to_local(int factor) const;
};

/// Bloch angles reproducing a given qubit basis up to per-vector phases.
BlochBasis bloch_angles_of(const Matrix& qubit_basis);

struct OptimizerConfig {
  int grid_points_per_angle = 24;
  int refine_iterations = 200;
  double tolerance = 1e-8;
  int restarts = 8;
  void validate() const;
};

/// Measurement outcome: probability and the normalized conditional state on
/// the remaining factors. Outcomes with p <= 1e-12 carry no state and are
/// excluded from entropy averages.
struct Outcome {
  double p = 0.0;
  Matrix state;  // empty when null
  bool null_state = false;
};

struct ConditionalEnsemble {
  std::vector<int> remaining_dims;
  std::vector<Outcome> outcomes;
  double shannon() const;           // H({p_i})
  double average_entropy() const;   // sum_i p_i S(rho_i)
};

/// rho -> sum_i (P_i (x) I) rho (P_i (x) I) in the chosen local basis.
DensityMatrix dephase(const DensityMatrix& rho, const LocalBasis& basis);
Matrix dephase_raw(const Matrix& rho, const std::vector<int>& dims,
                   const LocalBasis& basis);

ConditionalEnsemble condition(const DensityMatrix& rho, const LocalBasis& basis);
ConditionalEnsemble condition_raw(const Matrix& rho, const std::vector<int>& dims,
                                  const LocalBasis& basis);

/// H({p_i}) + sum_i p_i S(rho_B^i); equals S(dephase(rho, basis)).
double post_dephasing_entropy(const DensityMatrix& rho, const LocalBasis& basis);

enum class Goal { Minimize, Maximize };

/// Number of angles parametrizing a measurement basis on a factor of
/// dimension d: 2 for a qubit (Bloch), 4(d-1) for d in {3,4} (chain of
/// 2(d-1) Givens rotations).
int basis_angle_count(int d);

/// Build the basis from its angle vector.
Matrix basis_from_angles(int d, std::span<const double> angles);

/// Number of angles parametrizing a pure vector in C^d: 2(d-1).
int vector_angle_count(int d);
Vector vector_from_angles(int d, std::span<const double> angles);

struct BasisOptimum {
  double value = 0.0;
  std::vector<double> angles;          // winning parametrization (all factors)
  std::vector<LocalBasis> bases;       // one per optimized factor
  bool refined_below_grid = false;     // local refinement improved on the grid
  long evaluations = 0;
  /// All near-optimal angle sets (populated when collect_optima is set):
  /// refined representatives of every grid cell within `optima_window` of
  /// the best value.
  std::vector<std::vector<double>> optima_angles;
};

using SingleObjective = std::function<double(const LocalBasis&)>;
using ProductObjective = std::function<double(const std::vector<LocalBasis>&)>;

/// Multi-start grid scan over basis angles followed by Nelder-Mead
/// refinement. Deterministic for a fixed config. Factor dimension 2 uses the
/// Bloch parametrization, 3 and 4 a Givens-rotation chain.
BasisOptimum optimize_single_basis(const DensityMatrix& rho, int factor,
                                   const SingleObjective& objective,
                                   const OptimizerConfig& config,
                                   Goal goal = Goal::Minimize,
                                   bool collect_optima = false,
                                   double optima_window = 1e-3);

/// Joint optimization over one basis per listed factor (4 angles for two
/// qubits), same grid+refine scheme. `extra_seed_angles` are additional
/// refinement starts (concatenated per-factor angle blocks).
BasisOptimum optimize_product_bases(
    const DensityMatrix& rho, const std::vector<int>& factors,
    const ProductObjective& objective, const OptimizerConfig& config,
    Goal goal = Goal::Minimize,
    const std::vector<std::vector<double>>& extra_seed_angles = {});

// Generic derivative-free minimizer (exposed for reuse by the entanglement
// tools; minimizes always — negate for maximization).
struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  long evaluations = 0;
};
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double initial_step, int max_iterations,
    double ftol);

}  // namespace dlab::measure
