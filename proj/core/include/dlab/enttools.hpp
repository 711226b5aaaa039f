#pragma once

#include "dlab/deficits.hpp"
#include "dlab/measure.hpp"
#include "dlab/states.hpp"

// Relative-entropy distances to structured state sets, the E_r <= Delta <=
// E_r^pc sandwich, the partial-transpose spectral lower bound, and the
// super-saturation scans. All E_r values produced here are upper bounds
// certified by an explicit separable decomposition.

namespace dlab::enttools {

using measure::LocalBasis;
using qmat::DensityMatrix;
using qmat::Matrix;
using qmat::Vector;

/// Mixture of pure product states: sigma = sum_k w_k |a_k b_k><a_k b_k|.
struct SeparableComponent {
  double weight = 0.0;
  Vector a, b;
};

struct SeparableAnsatz {
  std::vector<int> local_dims;  // {dA, dB}
  std::vector<SeparableComponent> components;
  Matrix assemble() const;
  void validate() const;
};

struct ErConfig {
  int components = 16;   // >= dA*dB suffices for separable decompositions
  int restarts = 12;
  int sweeps = 6;        // alternating weight/component passes per restart
  int nm_iterations = 120;
  double tolerance = 1e-6;  // restart agreement window
  int agree_needed = 3;     // consecutive agreeing restarts to declare converged
};

struct ErResult {
  double value = 0.0;   // upper bound on E_r
  bool converged = false;
  int restarts_used = 0;
  SeparableAnsatz closest;
};

/// Minimize S(rho|sigma) over explicit separable mixtures (dims 2x2 or 2x3)
/// by alternating exact-gradient weight updates with per-component
/// Nelder-Mead refinement of the product vectors.
ErResult relative_entropy_of_entanglement(const DensityMatrix& rho,
                                          const ErConfig& config = {});

/// Oracle closed form for Bell-diagonal states: 1 - H(p_max) when the
/// largest weight exceeds 1/2, else 0.
double er_bell_diagonal_closed_form(const states::BellWeights& w);

/// One-way implementable product basis: sender basis {|i>} with a receiver
/// basis per outcome.
struct IpbBasis {
  int sender_factor = 0;
  Matrix sender_basis;
  std::vector<Matrix> receiver_bases;
};

struct IpbBound {
  double value = 0.0;
  IpbBasis basis;
};

/// min over one-way IPBs (both directions) of H(rho,B) - S(rho). The
/// receiver's per-outcome bases are the conditional eigenbases, which
/// minimize H exactly for any fixed sender basis. Equals the deficit on 2x2.
IpbBound ipb_upper_bound(const DensityMatrix& rho,
                         const measure::OptimizerConfig& config);

/// H(rho,B) vs inf_sigma S(rho|sigma) + S(rho) over states diagonal in B;
/// the minimizer is the dephased state, so the two sides agree.
std::pair<double, double> basis_distance_identity_check(const DensityMatrix& rho,
                                                        const Matrix& global_basis);

struct MonotonicityCheck {
  double delta_Er = 0.0;  // E_r(rho) - E_r(dephased)
  double delta_S = 0.0;   // S(dephased) - S(rho)
  bool holds = false;     // delta_Er <= delta_S + 2e-4
};

/// E_r drops no more than entropy rises under local dephasing.
MonotonicityCheck dephasing_monotonicity_check(const DensityMatrix& rho,
                                               const LocalBasis& basis,
                                               const ErConfig& config = {});

/// -log2 lambda_max(|sigma^Gamma|) - S(rho) - S(rho|sigma).
double sdp_bound(const DensityMatrix& rho, const DensityMatrix& sigma);

struct SdpSearchResult {
  double value = 0.0;
  DensityMatrix sigma;
};

/// Maximize the bound over sigma by local refinement seeded at sigma = rho.
SdpSearchResult sdp_bound_search(const DensityMatrix& rho, int iterations = 1500);

struct ErasureBracket {
  double lower = 0.0;  // E_r
  double upper = 0.0;  // Delta
  bool er_converged = false;
};

/// [E_r, Delta] bracket on the thermodynamical cost of erasing entanglement.
ErasureBracket erasure_cost_bracket(const DensityMatrix& rho,
                                    const measure::OptimizerConfig& config,
                                    const ErConfig& er_config = {});

struct SupersaturationCheck {
  double lhs = 0.0;  // 2 E_r + S_AB
  double rhs = 0.0;  // 2 log2 d
  bool violated = false;
};

SupersaturationCheck supersaturation_check(const DensityMatrix& rho,
                                           const ErConfig& config = {});

/// E_R of a maximally correlated state: H({a_ii}) - S(rho_mc). (The source
/// expression carries the opposite sign on the first term; this form is the
/// one consistent with the Bell-diagonal limit and the numerical minimizer.)
double maximally_correlated_er(const Matrix& a);

}  // namespace dlab::enttools
