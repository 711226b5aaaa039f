#include "dlab/scan.hpp"

#include "dlab/states.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace dlab::scan {

using deficits::Direction;

measure::OptimizerConfig ScanConfig::scan_optimizer_defaults() {
  // lighter grid than the one-off default; refinement recovers the accuracy
  measure::OptimizerConfig cfg;
  cfg.grid_points_per_angle = 8;
  cfg.refine_iterations = 160;
  cfg.tolerance = 1e-9;
  cfg.restarts = 4;
  return cfg;
}

enttools::ErConfig ScanConfig::scan_er_defaults() {
  enttools::ErConfig cfg;
  cfg.restarts = 5;
  cfg.sweeps = 4;
  cfg.nm_iterations = 80;
  return cfg;
}

ScanRecord scan_record(const qmat::DensityMatrix& rho, std::string state_id,
                       std::uint64_t seed, const ScanConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  ScanRecord r;
  r.state_id = std::move(state_id);
  r.seed = seed;
  r.i_m = deficits::mutual_information(rho);
  r.delta_zeroway = deficits::zeroway_deficit(rho, cfg.opt).value;
  r.delta_oneway = deficits::oneway_deficit(rho, Direction::AtoB, cfg.opt).value;
  auto two = deficits::twoqubit_deficit(rho, cfg.opt);
  r.delta_twoqubit = two.value;
  r.delta_c = two.companions.at("I_l") - deficits::local_information(rho);
  if (cfg.with_er) {
    auto er = enttools::relative_entropy_of_entanglement(rho, cfg.er);
    r.e_r = er.value;
    r.e_r_converged = er.converged;
  }
  r.runtime_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

std::vector<ScanRecord> run_scan(const ScanConfig& cfg) {
  if (cfg.dims != std::vector<int>{2, 2})
    throw qmat::validation_error("run_scan: only dims 2x2 are supported");

  long n = cfg.n;
  std::vector<double> lambdas;
  if (cfg.family_iso) {
    for (double l = cfg.lambda_start; l <= cfg.lambda_stop + 1e-12;
         l += cfg.lambda_step)
      lambdas.push_back(std::min(l, 1.0));
    n = static_cast<long>(lambdas.size());
  }

  std::vector<ScanRecord> records(n);
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n) return;
      if (cfg.family_iso) {
        char id[64];
        std::snprintf(id, sizeof(id), "iso-%.4f", lambdas[i]);
        records[i] = scan_record(states::isotropic(lambdas[i], 2), id, cfg.seed, cfg);
      } else {
        char id[64];
        std::snprintf(id, sizeof(id), "hs2x2-%06ld", i);
        auto rho = states::random_state(cfg.dims,
                                        {cfg.seed, static_cast<std::uint64_t>(i)});
        records[i] = scan_record(rho, id, cfg.seed, cfg);
      }
    }
  };
  int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<ScanRecord>& records) {
  os << "state_id,seed,I_M,Delta_zeroway,Delta_oneway,Delta_twoqubit,Delta_c,"
        "E_r,E_r_flag,runtime_ms\n";
  for (const auto& r : records) {
    os << r.state_id << ',' << r.seed << ',' << format_number(r.i_m) << ','
       << format_number(r.delta_zeroway) << ',' << format_number(r.delta_oneway)
       << ',' << format_number(r.delta_twoqubit) << ',' << format_number(r.delta_c)
       << ',' << format_number(r.e_r) << ','
       << (r.e_r_converged ? "upper_bound" : "upper_bound_unconverged") << ','
       << format_number(r.runtime_ms) << '\n';
  }
}

ScanSummary summarize(const std::vector<ScanRecord>& records) {
  ScanSummary s;
  s.n = static_cast<long>(records.size());
  s.max_delta0_minus_im = -std::numeric_limits<double>::infinity();
  long near = 0;
  for (const auto& r : records) {
    s.max_delta0_minus_im = std::max(s.max_delta0_minus_im, r.delta_zeroway - r.i_m);
    if (r.delta_zeroway > 0.95 * r.i_m) ++near;
  }
  if (records.empty()) s.max_delta0_minus_im = 0;
  s.frac_delta0_above_95_im = records.empty() ? 0.0 : double(near) / double(s.n);
  return s;
}

}  // namespace dlab::scan
