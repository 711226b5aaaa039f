#pragma once

#include "dlab/deficits.hpp"
#include "dlab/enttools.hpp"

#include <cstdint>
#include <iosfwd>

// Seeded Monte Carlo scans over random two-qubit states (and the isotropic
// family) with deterministic, thread-count-independent output.

namespace dlab::scan {

struct ScanRecord {
  std::string state_id;
  std::uint64_t seed = 0;
  double i_m = 0;
  double delta_zeroway = 0;
  double delta_oneway = 0;
  double delta_twoqubit = 0;
  double delta_c = 0;
  double e_r = 0;          // upper bound from the separable-ansatz minimizer
  bool e_r_converged = true;
  double runtime_ms = 0;
};

struct ScanConfig {
  long n = 1000;
  std::uint64_t seed = 42;
  std::vector<int> dims{2, 2};
  int threads = 1;
  bool with_er = true;
  // isotropic sweep mode replaces random sampling by a lambda grid
  bool family_iso = false;
  double lambda_start = 0.0, lambda_stop = 1.0, lambda_step = 0.05;
  measure::OptimizerConfig opt = scan_optimizer_defaults();
  enttools::ErConfig er = scan_er_defaults();

  static measure::OptimizerConfig scan_optimizer_defaults();
  static enttools::ErConfig scan_er_defaults();
};

/// Compute one record (also used by the acceptance suite).
ScanRecord scan_record(const qmat::DensityMatrix& rho, std::string state_id,
                       std::uint64_t seed, const ScanConfig& cfg);

std::vector<ScanRecord> run_scan(const ScanConfig& cfg);

/// Header + one row per record; 12 significant digits, byte-stable across
/// runs except for the trailing runtime_ms column.
void write_csv(std::ostream& os, const std::vector<ScanRecord>& records);

struct ScanSummary {
  long n = 0;
  double max_delta0_minus_im = 0;       // expected <= ~1e-6
  double frac_delta0_above_95_im = 0;   // paper's "almost equal" regime
};
ScanSummary summarize(const std::vector<ScanRecord>& records);

/// Fixed formatting used for every CSV number (12 significant digits).
std::string format_number(double v);

}  // namespace dlab::scan
