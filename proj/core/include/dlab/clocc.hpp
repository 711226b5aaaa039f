#pragma once

#include "dlab/enttools.hpp"
#include "dlab/measure.hpp"

#include <map>
#include <variant>

// Executable CLOCC protocols: local unitaries, local dephasings and sends of
// dephased subsystems, with an entropy-production ledger. Sends relabel
// ownership only; a send of a not-yet-dephased subsystem gets the mandatory
// dephasing auto-inserted and charged.

namespace dlab::clocc {

using qmat::DensityMatrix;
using qmat::Matrix;

struct LocalUnitaryStep {
  std::string party;
  std::vector<int> factors;
  Matrix unitary;  // on the joint space of `factors`
};

struct DephaseStep {
  std::string party;
  std::vector<int> factors;
  Matrix basis;  // orthonormal columns on the joint space of `factors`
};

struct SendStep {
  std::string from, to;
  std::vector<int> factors;
};

using CloccStep = std::variant<LocalUnitaryStep, DephaseStep, SendStep>;

struct CloccProtocol {
  std::map<std::string, std::vector<int>> parties;  // factor ownership
  std::vector<CloccStep> steps;
};

struct LedgerEntry {
  std::string description;
  double entropy_after = 0.0;
  double delta_S = 0.0;
  bool auto_inserted = false;
};

struct EntropyLedger {
  double initial_entropy = 0.0;
  std::vector<LedgerEntry> entries;
  std::map<std::string, std::vector<int>> final_ownership;
  std::map<std::string, double> final_local_entropies;
  /// N - sum over parties of S(final marginal), null parties contributing 0.
  double localized_information = 0.0;
  double total_delta() const;
};

std::pair<DensityMatrix, EntropyLedger> execute(const DensityMatrix& rho,
                                                const CloccProtocol& protocol);

/// f = E_r + S evaluated after every step (index 0 = initial state); f never
/// decreases under CLOCC. Supports two-party protocols whose stages are
/// 2x2/2x3-embeddable (a null side scores E_r = 0).
std::vector<double> verify_f_monotone(const DensityMatrix& rho,
                                      const CloccProtocol& protocol,
                                      const enttools::ErConfig& er_config = {});

/// Independent deficit oracle for dims [2,2]: enumerate dephase-and-send
/// protocols (A->B, B->A, and A-then-B product dephasings) over a basis grid
/// with local refinement, scoring each by its executed entropy production.
double brute_force_deficit(const DensityMatrix& rho,
                           const measure::OptimizerConfig& config);

}  // namespace dlab::clocc
