#pragma once

#include "dlab/measure.hpp"
#include "dlab/states.hpp"

#include <map>
#include <optional>

// The correlation quantities built on basis optimization: one-way, zero-way
// and two-qubit deficits, localisable information, classical deficits,
// Henderson-Vedral, discord, and the closed forms the source states admit.

namespace dlab::deficits {

using measure::BasisOptimum;
using measure::LocalBasis;
using measure::OptimizerConfig;
using qmat::DensityMatrix;
using qmat::PureState;
using states::AcinParams;
using states::BellWeights;

enum class Quantity {
  I,
  I_LO,
  I_l_oneway,
  I_l_zeroway,
  Delta_oneway,
  Delta_zeroway,
  Delta_twoqubit,
  Delta_c,
  C_HV,
  C_zero,
  I_M,
  discord,
};

const char* quantity_name(Quantity q);
std::optional<Quantity> quantity_from_name(std::string_view name);

enum class Direction { AtoB, BtoA };

/// How a reported value was produced.
enum class Provenance { Exact, Optimizer, Bound };

struct OptimizerDiagnostics {
  long evaluations = 0;
  bool refined_below_grid = false;
  bool converged = true;  // false when refinement failed to improve the grid
  std::vector<std::vector<double>> optima_angles;
};

struct DeficitReport {
  Quantity quantity;
  double value = 0.0;
  std::vector<LocalBasis> argmax_bases;
  OptimizerDiagnostics diagnostics;
  std::map<std::string, double> companions;  // I, I_l, I_M, Delta_c, ...
  Provenance provenance = Provenance::Optimizer;
};

double mutual_information(const DensityMatrix& rho);   // S_A + S_B - S_AB
double local_information(const DensityMatrix& rho);    // N - S_A - S_B

/// One-way deficit: minimize S(rho'_A) + sum_i p_i S(rho_B^i) over the
/// sending party's projective bases, minus S(rho). Companions carry I_l.
DeficitReport oneway_deficit(const DensityMatrix& rho, Direction dir,
                             const OptimizerConfig& config,
                             bool collect_optima = false);

/// Single-copy deficit for dims [2,2]: min over both one-way directions (all
/// two-qubit implementable product bases are one-way implementable).
DeficitReport twoqubit_deficit(const DensityMatrix& rho,
                               const OptimizerConfig& config);

/// Zero-way deficit: minimize S of the doubly-dephased state over product
/// bases (the remaining classical correlations localize at no entropy cost).
DeficitReport zeroway_deficit(const DensityMatrix& rho,
                              const OptimizerConfig& config);

/// 1 + H(p1+p2) - S(rho_Bm) with p1,p2 the two largest Bell weights.
double bell_deficit_closed_form(const BellWeights& w);

/// Zero-way closed form for Bell mixtures: 1 + H(p_max) - S(rho_Bm) with
/// p_max = (1 + max_i |t_ii|)/2, t_ii the diagonal correlation coefficients.
double bell_zeroway_closed_form(const BellWeights& w);

/// One-way (= zero-way) deficit of the isotropic state, in the form fixed by
/// the lambda in {0,1} anchors: log2 d + S_cond - S(rho_iso).
double isotropic_deficit(double lambda, int d);

struct PureDeficitInput {
  PureState state;
  std::vector<int> cut;  // factor indices forming one side
};

/// Delta(|psi>) = S(tr_cut |psi><psi|).
double pure_state_deficit(const PureDeficitInput& input);

struct PureQuantities {
  double information;
  double localisable;
  double deficit;
};

/// n-party, n-dimensional GHZ: I = n log2 n, I_l = (n-1) log2 n, Delta = log2 n.
PureQuantities ghz_quantities(int n);

/// Aharonov state: the reported closed forms I = n log2 n, I_l = 1,
/// Delta = n log2 n - 1.
PureQuantities aharonov_quantities(int n);

/// Closed-form localisable information of the W state for a measurement with
/// |<0|e1>|^2 = x2.
double w_localisable_closed_form(double x2);

/// Maximize the W state's localisable information; evaluates both the closed
/// form over x and the generic acin_localisable optimizer and reports the
/// optimizer value with all optimal bases.
DeficitReport w_localisable(const OptimizerConfig& config);

/// I_l of a three-qubit pure state in canonical form under the
/// measure-then-tell protocol: sup over Alice's basis of
/// 3 - H(p) - sum_i p_i S(marginal of conditional pure pair state).
DeficitReport acin_localisable(const AcinParams& p, const OptimizerConfig& config,
                               bool collect_optima = false);

/// Delta_c = I_l - I_LO (with I_l from the matching deficit routine);
/// asserts I_M = Delta + Delta_c.
double classical_deficit(const DensityMatrix& rho, const OptimizerConfig& config);

/// C_HV = sup over measurement bases of S(rho_B) - sum p_i S(rho_B^i).
DeficitReport henderson_vedral(const DensityMatrix& rho, Direction dir,
                               const OptimizerConfig& config);

/// Delta_cl^-> = sup [dS(A) + dS(B|A)]; never exceeds C_HV.
double oneway_classical_deficit(const DensityMatrix& rho, Direction dir,
                                const OptimizerConfig& config);

/// C_zero = sup over product bases of I_M of the doubly-dephased state.
double zeroway_classical(const DensityMatrix& rho, const OptimizerConfig& config);

/// Fixed-measurement quantum discord H({p_i}) + sum p_i S(rho_i) - S(rho).
double quantum_discord(const DensityMatrix& rho, const LocalBasis& measurement);

/// Minimum discord over projective measurements; equals the one-way deficit.
DeficitReport min_discord(const DensityMatrix& rho, const OptimizerConfig& config);

}  // namespace dlab::deficits
