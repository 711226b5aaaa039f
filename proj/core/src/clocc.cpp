#include "dlab/clocc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dlab::clocc {

using measure::LocalBasis;
using qmat::cxd;
using qmat::entropy_raw;
using qmat::validation_error;

double EntropyLedger::total_delta() const {
  return entries.empty() ? 0.0 : entries.back().entropy_after - initial_entropy;
}

namespace {

struct SubsetIndexer {
  // decomposes a global index into (subset index, rest index)
  std::vector<int> dims;
  std::vector<int> subset;
  std::vector<long> stride;
  int sub_dim = 1;

  SubsetIndexer(const std::vector<int>& dims_, const std::vector<int>& subset_)
      : dims(dims_), subset(subset_) {
    const int n = static_cast<int>(dims.size());
    stride.assign(n, 1);
    for (int f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];
    for (int f : subset) sub_dim *= dims[f];
  }

  int sub_of(long g) const {
    int s = 0;
    for (int f : subset) s = s * dims[f] + static_cast<int>((g / stride[f]) % dims[f]);
    return s;
  }
  long rest_of(long g) const {
    long r = g;
    for (int f : subset) r -= ((g / stride[f]) % dims[f]) * stride[f];
    return r;
  }
};

// Embed an operator acting on a (possibly non-contiguous) factor subset.
Matrix embed_subset_operator(const Matrix& op, const std::vector<int>& dims,
                             const std::vector<int>& subset) {
  SubsetIndexer ix(dims, subset);
  const long d = op.rows() == ix.sub_dim ? qmat::total_dim(dims) : -1;
  if (d < 0) throw validation_error("clocc: operator size does not match factors");
  Matrix full = Matrix::Zero(d, d);
  for (long i = 0; i < d; ++i) {
    int si = ix.sub_of(i);
    long ri = ix.rest_of(i);
    for (int sj = 0; sj < ix.sub_dim; ++sj) {
      cxd v = op(si, sj);
      if (v == cxd(0, 0)) continue;
      // rebuild global j with subset index sj and rest ri
      long j = ri;
      int tmp = sj;
      for (int u = static_cast<int>(ix.subset.size()) - 1; u >= 0; --u) {
        int f = ix.subset[u];
        j += static_cast<long>(tmp % dims[f]) * ix.stride[f];
        tmp /= dims[f];
      }
      full(i, j) = v;
    }
  }
  return full;
}

Matrix dephase_subset(const Matrix& rho, const std::vector<int>& dims,
                      const std::vector<int>& subset, const Matrix& basis) {
  SubsetIndexer ix(dims, subset);
  Matrix u = embed_subset_operator(basis, dims, subset);
  Matrix t = u.adjoint() * rho * u;
  const long d = rho.rows();
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      if (ix.sub_of(i) != ix.sub_of(j)) t(i, j) = 0;
  return u * t * u.adjoint();
}

double max_offdiagonal_in_subset(const Matrix& rho, const std::vector<int>& dims,
                                 const std::vector<int>& subset) {
  SubsetIndexer ix(dims, subset);
  double worst = 0;
  for (long i = 0; i < rho.rows(); ++i)
    for (long j = 0; j < rho.cols(); ++j)
      if (ix.sub_of(i) != ix.sub_of(j))
        worst = std::max(worst, std::abs(rho(i, j)));
  return worst;
}

void require_owns(const std::map<std::string, std::vector<int>>& owner,
                  const std::string& party, const std::vector<int>& factors) {
  auto it = owner.find(party);
  if (it == owner.end())
    throw validation_error("clocc: unknown party '" + party + "'");
  for (int f : factors)
    if (std::find(it->second.begin(), it->second.end(), f) == it->second.end()) {
      std::ostringstream os;
      os << "clocc: party '" << party << "' does not own factor " << f;
      throw validation_error(os.str());
    }
}

}  // namespace

std::pair<DensityMatrix, EntropyLedger> execute(const DensityMatrix& rho,
                                                const CloccProtocol& protocol) {
  const auto& dims = rho.dims();
  // ownership must partition the factors
  {
    std::vector<int> seen;
    for (const auto& [party, fs] : protocol.parties)
      seen.insert(seen.end(), fs.begin(), fs.end());
    std::sort(seen.begin(), seen.end());
    std::vector<int> want(dims.size());
    std::iota(want.begin(), want.end(), 0);
    if (seen != want)
      throw validation_error("clocc: ownership map must partition the factors");
  }

  Matrix state = rho.matrix();
  auto owner = protocol.parties;
  EntropyLedger ledger;
  ledger.initial_entropy = entropy_raw(state);
  double s_prev = ledger.initial_entropy;

  auto record = [&](std::string desc, bool auto_inserted) {
    double s_now = entropy_raw(state);
    ledger.entries.push_back({std::move(desc), s_now, s_now - s_prev, auto_inserted});
    s_prev = s_now;
  };

  for (const auto& step : protocol.steps) {
    if (const auto* u = std::get_if<LocalUnitaryStep>(&step)) {
      require_owns(owner, u->party, u->factors);
      if (!qmat::is_unitary(u->unitary))
        throw validation_error("clocc: unitary step matrix is not unitary");
      Matrix full = embed_subset_operator(u->unitary, dims, u->factors);
      state = full * state * full.adjoint();
      record("unitary @" + u->party, false);
    } else if (const auto* dp = std::get_if<DephaseStep>(&step)) {
      require_owns(owner, dp->party, dp->factors);
      if (!qmat::is_unitary(dp->basis))
        throw validation_error("clocc: dephasing basis is not orthonormal");
      state = dephase_subset(state, dims, dp->factors, dp->basis);
      record("dephase @" + dp->party, false);
    } else if (const auto* sd = std::get_if<SendStep>(&step)) {
      require_owns(owner, sd->from, sd->factors);
      if (owner.find(sd->to) == owner.end())
        throw validation_error("clocc: unknown receiving party '" + sd->to + "'");
      // sent factors must already be dephased (block-diagonal in their
      // computational basis); otherwise the channel dephases them and the
      // entropy is charged here
      if (max_offdiagonal_in_subset(state, dims, sd->factors) > 1e-9) {
        int sub_dim = 1;
        for (int f : sd->factors) sub_dim *= dims[f];
        state = dephase_subset(state, dims, sd->factors,
                               Matrix::Identity(sub_dim, sub_dim));
        record("auto dephase before send @" + sd->from, true);
      }
      auto& from_list = owner[sd->from];
      for (int f : sd->factors)
        from_list.erase(std::remove(from_list.begin(), from_list.end(), f),
                        from_list.end());
      auto& to_list = owner[sd->to];
      to_list.insert(to_list.end(), sd->factors.begin(), sd->factors.end());
      std::sort(to_list.begin(), to_list.end());
      record("send " + sd->from + "->" + sd->to, false);
    }
  }

  ledger.final_ownership = owner;
  double local_sum = 0;
  for (const auto& [party, fs] : owner) {
    double s = 0;
    if (!fs.empty()) s = entropy_raw(qmat::partial_trace_raw(state, dims, fs));
    ledger.final_local_entropies[party] = s;
    local_sum += s;
  }
  double n_bits = std::log2(double(qmat::total_dim(dims)));
  ledger.localized_information = n_bits - local_sum;

  state = 0.5 * (state + state.adjoint().eval());
  state /= state.trace().real();
  return {DensityMatrix(dims, state, rho.label()), ledger};
}

std::vector<double> verify_f_monotone(const DensityMatrix& rho,
                                      const CloccProtocol& protocol,
                                      const enttools::ErConfig& er_config) {
  if (protocol.parties.size() != 2)
    throw validation_error("verify_f_monotone: need exactly two parties");

  // replay the protocol step by step, scoring f = E_r + S at each stage
  auto stage_f = [&](const DensityMatrix& state,
                     const std::map<std::string, std::vector<int>>& owner) {
    double s = entropy_raw(state.matrix());
    std::vector<std::vector<int>> sides;
    for (const auto& [party, fs] : owner) sides.push_back(fs);
    if (sides[0].empty() || sides[1].empty()) return s;  // all local: E_r = 0
    // regroup factors as [side0..., side1...] and treat as bipartite
    std::vector<int> order = sides[0];
    order.insert(order.end(), sides[1].begin(), sides[1].end());
    int da = 1, db = 1;
    for (int f : sides[0]) da *= state.dims()[f];
    for (int f : sides[1]) db *= state.dims()[f];
    // permutation of the global index
    const auto& dims = state.dims();
    const int n = static_cast<int>(dims.size());
    std::vector<long> stride(n, 1);
    for (int f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];
    const long d = state.dim();
    std::vector<long> perm(d);
    for (long g = 0; g < d; ++g) {
      long out = 0;
      for (int f : order) out = out * dims[f] + (g / stride[f]) % dims[f];
      perm[g] = out;
    }
    Matrix re(d, d);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) re(perm[i], perm[j]) = state.matrix()(i, j);
    DensityMatrix regrouped({da, db}, re);
    return enttools::relative_entropy_of_entanglement(regrouped, er_config).value + s;
  };

  std::vector<double> f_trace;
  f_trace.push_back(stage_f(rho, protocol.parties));
  CloccProtocol partial{protocol.parties, {}};
  for (const auto& step : protocol.steps) {
    partial.steps.push_back(step);
    auto [state, ledger] = execute(rho, partial);
    f_trace.push_back(stage_f(state, ledger.final_ownership));
  }
  return f_trace;
}

double brute_force_deficit(const DensityMatrix& rho,
                           const measure::OptimizerConfig& config) {
  if (rho.dims() != std::vector<int>{2, 2})
    throw validation_error("brute_force_deficit: dims must be [2,2]");
  config.validate();
  const Matrix& m = rho.matrix();
  const double s0 = entropy_raw(m);
  const auto& dims = rho.dims();

  // entropy produced by "dephase factor f in (theta,phi), then send"
  auto one_round = [&](int f, double theta, double phi) {
    LocalBasis b = measure::BlochBasis{theta, phi}.to_local(f);
    return entropy_raw(measure::dephase_raw(m, dims, b)) - s0;
  };
  // two rounds: A dephases and sends, then B dephases his own factor
  auto two_round = [&](const std::vector<double>& x) {
    LocalBasis ba = measure::BlochBasis{x[0], x[1]}.to_local(0);
    LocalBasis bb = measure::BlochBasis{x[2], x[3]}.to_local(1);
    Matrix d1 = measure::dephase_raw(m, dims, ba);
    return entropy_raw(measure::dephase_raw(d1, dims, bb)) - s0;
  };

  double best = std::numeric_limits<double>::infinity();
  const int g = config.grid_points_per_angle;
  for (int f = 0; f < 2; ++f) {
    std::vector<std::pair<double, std::array<double, 2>>> cells;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        double th = g == 1 ? 0.0 : M_PI * i / (g - 1);
        double ph = 2.0 * M_PI * j / g;
        cells.push_back({one_round(f, th, ph), {th, ph}});
      }
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    best = std::min(best, cells.front().first);
    for (int r = 0; r < std::min<int>(config.restarts, cells.size()); ++r) {
      auto nm = measure::nelder_mead(
          [&](const std::vector<double>& x) { return one_round(f, x[0], x[1]); },
          {cells[r].second[0], cells[r].second[1]}, M_PI / g,
          config.refine_iterations, config.tolerance);
      best = std::min(best, nm.fx);
    }
  }
  // coarse grid for the 4-angle A-then-B family, then refine
  {
    const int g2 = std::max(4, g / 3);
    std::vector<std::pair<double, std::vector<double>>> cells;
    for (int i = 0; i < g2; ++i)
      for (int j = 0; j < g2; ++j)
        for (int k = 0; k < g2; ++k)
          for (int l = 0; l < g2; ++l) {
            std::vector<double> x = {M_PI * i / (g2 - 1), 2.0 * M_PI * j / g2,
                                     M_PI * k / (g2 - 1), 2.0 * M_PI * l / g2};
            cells.push_back({two_round(x), x});
          }
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    best = std::min(best, cells.front().first);
    for (int r = 0; r < std::min<int>(config.restarts, cells.size()); ++r) {
      auto nm = measure::nelder_mead(two_round, cells[r].second, M_PI / g2,
                                     config.refine_iterations, config.tolerance);
      best = std::min(best, nm.fx);
    }
  }
  return best;
}

}  // namespace dlab::clocc
