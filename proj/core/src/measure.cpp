#include "dlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dlab::measure {

using qmat::cxd;
using qmat::log2_safe;
using qmat::validation_error;

void LocalBasis::validate(int expected_dim) const {
  if (expected_dim >= 0 && vectors.rows() != expected_dim)
    throw validation_error("LocalBasis: dimension does not match factor");
  if (!qmat::is_unitary(vectors))
    throw validation_error("LocalBasis: columns are not orthonormal");
}

LocalBasis BlochBasis::to_local(int factor) const {
  Matrix v(2, 2);
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  cxd ph = std::polar(1.0, phi);
  v(0, 0) = c;
  v(1, 0) = ph * s;
  v(0, 1) = std::conj(ph) * s;
  v(1, 1) = -c;
  return LocalBasis{factor, v};
}

BlochBasis bloch_angles_of(const Matrix& qubit_basis) {
  if (qubit_basis.rows() != 2)
    throw validation_error("bloch_angles_of: not a qubit basis");
  cxd a = qubit_basis(0, 0), b = qubit_basis(1, 0);
  // strip the global phase so that a is real and nonnegative
  if (std::abs(a) > 1e-14) {
    cxd ph = std::conj(a) / std::abs(a);
    a *= ph;
    b *= ph;
  }
  BlochBasis out;
  out.theta = 2.0 * std::atan2(std::abs(b), a.real());
  out.phi = std::abs(b) > 1e-14 ? std::fmod(std::arg(b) + 2 * M_PI, 2 * M_PI) : 0.0;
  return out;
}

void OptimizerConfig::validate() const {
  if (grid_points_per_angle < 1 || refine_iterations < 1 || restarts < 1 ||
      tolerance <= 0)
    throw validation_error("OptimizerConfig: all fields must be positive");
}

namespace {

// 2x2 Hermitian entropy in closed form.
double entropy_2x2(const Matrix& m) {
  double tr = m(0, 0).real() + m(1, 1).real();
  double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
  double l1 = std::clamp(0.5 * (tr + disc), 0.0, 1.0);
  double l2 = std::clamp(0.5 * (tr - disc), 0.0, 1.0);
  return -log2_safe(l1) - log2_safe(l2);
}

double entropy_any(const Matrix& m) {
  if (m.rows() == 2) return entropy_2x2(m);
  return qmat::entropy_raw(m);
}

struct FactorLayout {
  int pre = 1, d = 1, post = 1;
};

FactorLayout layout_of(const std::vector<int>& dims, int factor) {
  FactorLayout l;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
    if (i < factor) l.pre *= dims[i];
    else if (i == factor) l.d = dims[i];
    else l.post *= dims[i];
  }
  return l;
}

}  // namespace

double ConditionalEnsemble::shannon() const {
  double h = 0;
  for (const auto& o : outcomes) h -= log2_safe(o.p);
  return h;
}

double ConditionalEnsemble::average_entropy() const {
  double s = 0;
  for (const auto& o : outcomes)
    if (!o.null_state) s += o.p * entropy_any(o.state);
  return s;
}

ConditionalEnsemble condition_raw(const Matrix& rho, const std::vector<int>& dims,
                                  const LocalBasis& basis) {
  const int f = basis.factor;
  if (f < 0 || f >= static_cast<int>(dims.size()))
    throw validation_error("condition: factor index out of range");
  const auto l = layout_of(dims, f);
  const int drest = l.pre * l.post;

  ConditionalEnsemble ens;
  ens.remaining_dims.reserve(dims.size() - 1);
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (i != f) ens.remaining_dims.push_back(dims[i]);

  // global index = (pre*d + a)*post + post_index
  auto gidx = [&](int rest, int a) {
    int pre_i = rest / l.post, post_i = rest % l.post;
    return (pre_i * l.d + a) * l.post + post_i;
  };

  for (int i = 0; i < l.d; ++i) {
    Matrix cond(drest, drest);
    for (int r = 0; r < drest; ++r)
      for (int s = 0; s < drest; ++s) {
        cxd sum = 0;
        for (int a = 0; a < l.d; ++a)
          for (int b = 0; b < l.d; ++b)
            sum += std::conj(basis.vectors(a, i)) * basis.vectors(b, i) *
                   rho(gidx(r, a), gidx(s, b));
        cond(r, s) = sum;
      }
    Outcome o;
    o.p = std::max(cond.trace().real(), 0.0);
    if (o.p <= 1e-12) {
      o.null_state = true;
      o.p = std::max(o.p, 0.0);
    } else {
      o.state = cond / o.p;
    }
    ens.outcomes.push_back(std::move(o));
  }
  return ens;
}

ConditionalEnsemble condition(const DensityMatrix& rho, const LocalBasis& basis) {
  basis.validate(rho.dims()[basis.factor]);
  return condition_raw(rho.matrix(), rho.dims(), basis);
}

Matrix dephase_raw(const Matrix& rho, const std::vector<int>& dims,
                   const LocalBasis& basis) {
  const int f = basis.factor;
  const auto l = layout_of(dims, f);
  Matrix u = qmat::kron(qmat::kron(Matrix::Identity(l.pre, l.pre), basis.vectors),
                        Matrix::Identity(l.post, l.post));
  Matrix t = u.adjoint() * rho * u;
  // zero blocks whose factor index differs
  const int d = static_cast<int>(rho.rows());
  for (int i = 0; i < d; ++i) {
    int fi = (i / l.post) % l.d;
    for (int j = 0; j < d; ++j) {
      int fj = (j / l.post) % l.d;
      if (fi != fj) t(i, j) = 0;
    }
  }
  return u * t * u.adjoint();
}

DensityMatrix dephase(const DensityMatrix& rho, const LocalBasis& basis) {
  if (basis.factor < 0 || basis.factor >= static_cast<int>(rho.dims().size()))
    throw validation_error("dephase: factor index out of range");
  basis.validate(rho.dims()[basis.factor]);
  Matrix m = dephase_raw(rho.matrix(), rho.dims(), basis);
  // renormalize away accumulated roundoff; dephasing is trace preserving
  m = 0.5 * (m + m.adjoint().eval());
  m /= m.trace().real();
  return DensityMatrix(rho.dims(), m, rho.label());
}

double post_dephasing_entropy(const DensityMatrix& rho, const LocalBasis& basis) {
  auto ens = condition(rho, basis);
  return ens.shannon() + ens.average_entropy();
}

int basis_angle_count(int d) {
  if (d == 2) return 2;
  if (d == 3 || d == 4) return 4 * (d - 1);
  throw validation_error("basis optimizer: unsupported factor dimension");
}

namespace {

// Left-multiply by a Givens rotation in plane (p,q): rows p,q mixed by
// [[cos, -e^{-i phi} sin], [e^{i phi} sin, cos]].
void apply_givens(Matrix& u, int p, int q, double theta, double phi) {
  double c = std::cos(theta), s = std::sin(theta);
  cxd ph = std::polar(1.0, phi);
  for (Eigen::Index col = 0; col < u.cols(); ++col) {
    cxd a = u(p, col), b = u(q, col);
    u(p, col) = c * a - std::conj(ph) * s * b;
    u(q, col) = ph * s * a + c * b;
  }
}

}  // namespace

Matrix basis_from_angles(int d, std::span<const double> angles) {
  if (d == 2) {
    if (angles.size() != 2)
      throw validation_error("basis_from_angles: qubit basis needs 2 angles");
    return BlochBasis{angles[0], angles[1]}.to_local(0).vectors;
  }
  const int rotations = 2 * (d - 1);
  if (static_cast<int>(angles.size()) != 2 * rotations)
    throw validation_error("basis_from_angles: wrong angle count");
  Matrix u = Matrix::Identity(d, d);
  int k = 0;
  for (int r = 0; r < rotations; ++r) {
    int p = r % (d - 1);
    apply_givens(u, p, p + 1, angles[k], angles[k + 1]);
    k += 2;
  }
  return u;
}

int vector_angle_count(int d) { return 2 * (d - 1); }

Vector vector_from_angles(int d, std::span<const double> angles) {
  if (static_cast<int>(angles.size()) != 2 * (d - 1))
    throw validation_error("vector_from_angles: wrong angle count");
  if (d == 2) {
    Vector v(2);
    v << std::cos(angles[0] / 2), std::polar(std::sin(angles[0] / 2), angles[1]);
    return v;
  }
  Matrix u = Matrix::Identity(d, d);
  for (int r = 0; r < d - 1; ++r)
    apply_givens(u, r, r + 1, angles[2 * r], angles[2 * r + 1]);
  return u.col(0);
}

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double initial_step, int max_iterations, double ftol) {
  const int n = static_cast<int>(x0.size());
  NelderMeadResult res;
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 1; i <= n; ++i) pts[i][i - 1] += initial_step;
  for (int i = 0; i <= n; ++i) fv[i] = f(pts[i]);
  res.evaluations = n + 1;

  auto order = [&]() {
    std::vector<int> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> p2;
    std::vector<double> f2;
    for (int i : idx) {
      p2.push_back(pts[i]);
      f2.push_back(fv[i]);
    }
    pts = std::move(p2);
    fv = std::move(f2);
  };

  for (int it = 0; it < max_iterations; ++it) {
    order();
    if (fv[n] - fv[0] < ftol) break;
    std::vector<double> c(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c[j] += pts[i][j] / n;
    auto blend = [&](double t) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) x[j] = c[j] + t * (pts[n][j] - c[j]);
      return x;
    };
    auto xr = blend(-1.0);
    double fr = f(xr);
    ++res.evaluations;
    if (fr < fv[0]) {
      auto xe = blend(-2.0);
      double fe = f(xe);
      ++res.evaluations;
      if (fe < fr) {
        pts[n] = xe;
        fv[n] = fe;
      } else {
        pts[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      pts[n] = xr;
      fv[n] = fr;
    } else {
      auto xc = blend(fr < fv[n] ? -0.5 : 0.5);
      double fc = f(xc);
      ++res.evaluations;
      if (fc < std::min(fr, fv[n])) {
        pts[n] = xc;
        fv[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int j = 0; j < n; ++j)
            pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          fv[i] = f(pts[i]);
        }
        res.evaluations += n;
      }
    }
  }
  order();
  res.x = pts[0];
  res.fx = fv[0];
  return res;
}

namespace {

struct AngleSpace {
  std::vector<int> factor_dims;   // dimension per optimized factor
  std::vector<int> block_sizes;   // angle count per factor
  int total_angles = 0;
};

AngleSpace angle_space(const std::vector<int>& dims, const std::vector<int>& factors) {
  AngleSpace sp;
  for (int f : factors) {
    int d = dims.at(f);
    sp.factor_dims.push_back(d);
    sp.block_sizes.push_back(basis_angle_count(d));
    sp.total_angles += sp.block_sizes.back();
  }
  return sp;
}

std::vector<LocalBasis> bases_from_point(const AngleSpace& sp,
                                         const std::vector<int>& factors,
                                         std::span<const double> x) {
  std::vector<LocalBasis> out;
  int off = 0;
  for (size_t i = 0; i < factors.size(); ++i) {
    out.push_back(LocalBasis{
        factors[i], basis_from_angles(sp.factor_dims[i],
                                      x.subspan(off, sp.block_sizes[i]))});
    off += sp.block_sizes[i];
  }
  return out;
}

// Grid values for one angle: thetas hit [0, pi] inclusive so exact
// computational bases are always scanned; phis cover [0, 2pi).
std::vector<double> angle_grid(int points, bool is_theta) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = is_theta ? (points == 1 ? 0.0 : M_PI * i / (points - 1))
                    : 2.0 * M_PI * i / points;
  return g;
}

// Angles alternate (theta, phi, theta, phi, ...) in every parametrization.
bool angle_is_theta(int index) { return index % 2 == 0; }

BasisOptimum optimize_over_angles(
    const AngleSpace& sp, const std::vector<int>& factors,
    const std::function<double(const std::vector<LocalBasis>&)>& objective,
    const OptimizerConfig& config, Goal goal,
    const std::vector<std::vector<double>>& extra_seeds, bool collect_optima,
    double optima_window) {
  config.validate();
  const int n = sp.total_angles;
  const double sign = goal == Goal::Minimize ? 1.0 : -1.0;
  long evals = 0;
  auto eval = [&](std::span<const double> x) {
    ++evals;
    return sign * objective(bases_from_point(sp, factors, x));
  };

  // --- stage 1: scan ---
  // Full cartesian grid when affordable, otherwise a deterministic
  // low-discrepancy sweep of the same budget.
  const long budget = static_cast<long>(
      std::pow(double(config.grid_points_per_angle), std::min(n, 4)));
  std::vector<std::pair<double, std::vector<double>>> cells;  // (value, angles)
  double best_grid = std::numeric_limits<double>::infinity();

  double cell_keep_cut = std::numeric_limits<double>::infinity();
  const size_t keep = std::max<size_t>(config.restarts, collect_optima ? 4096 : 0);

  auto consider = [&](const std::vector<double>& x) {
    double v = eval(x);
    best_grid = std::min(best_grid, v);
    if (cells.size() < keep || v < cell_keep_cut) {
      cells.emplace_back(v, x);
      if (cells.size() > 4 * keep + 64) {
        std::nth_element(cells.begin(), cells.begin() + keep, cells.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        cells.resize(keep);
        cell_keep_cut = std::max_element(cells.begin(), cells.end(),
                                         [](const auto& a, const auto& b) {
                                           return a.first < b.first;
                                         })
                            ->first;
      }
    }
  };

  double grid_cells = std::pow(double(config.grid_points_per_angle), n);
  if (grid_cells <= double(budget) + 0.5) {
    std::vector<std::vector<double>> grids;
    for (int i = 0; i < n; ++i)
      grids.push_back(angle_grid(config.grid_points_per_angle, angle_is_theta(i)));
    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    bool done = false;
    while (!done) {
      for (int i = 0; i < n; ++i) x[i] = grids[i][idx[i]];
      consider(x);
      int k = n - 1;
      while (k >= 0 && ++idx[k] == static_cast<int>(grids[k].size())) {
        idx[k] = 0;
        --k;
      }
      done = k < 0;
    }
  } else {
    // seeded quasi-random sweep, reproducible across runs
    rng::SplitMix64 gen(rng::RngSeed{0x5eedULL, static_cast<std::uint64_t>(n)});
    std::vector<double> x(n);
    for (long s = 0; s < budget; ++s) {
      for (int i = 0; i < n; ++i)
        x[i] = angle_is_theta(i) ? M_PI * gen.next_double()
                                 : 2.0 * M_PI * gen.next_double();
      consider(x);
    }
  }

  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // --- stage 2: Nelder-Mead refinement from the best cells + seeds ---
  std::vector<std::vector<double>> starts;
  for (int i = 0; i < config.restarts && i < static_cast<int>(cells.size()); ++i)
    starts.push_back(cells[i].second);
  for (const auto& s : extra_seeds)
    if (static_cast<int>(s.size()) == n) starts.push_back(s);

  double step = M_PI / std::max(2, config.grid_points_per_angle);
  BasisOptimum out;
  out.value = best_grid;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x = cells.empty() ? std::vector<double>(n, 0.0)
                                             : cells.front().second;
  for (const auto& s : starts) {
    auto wrapped = [&](const std::vector<double>& x) { return eval(x); };
    auto r = nelder_mead(wrapped, s, step, config.refine_iterations,
                         config.tolerance);
    evals += r.evaluations;
    if (r.fx < best) {
      best = r.fx;
      best_x = r.x;
    }
  }
  out.refined_below_grid = best < best_grid - 1e-15;
  out.value = sign * std::min(best, best_grid);
  out.angles = best_x;
  out.bases = bases_from_point(sp, factors, best_x);
  out.evaluations = evals;

  if (collect_optima) {
    // refine every near-best grid cell and keep the distinct argmaxima
    for (const auto& [v, x] : cells) {
      if (v > best + optima_window) break;
      auto wrapped = [&](const std::vector<double>& y) { return eval(y); };
      auto r = nelder_mead(wrapped, x, step / 2, config.refine_iterations,
                           config.tolerance);
      evals += r.evaluations;
      if (r.fx > best + 10 * config.tolerance) continue;
      bool dup = false;
      for (const auto& seen : out.optima_angles) {
        double d = 0;
        for (int i = 0; i < n; ++i) {
          double di = std::abs(seen[i] - r.x[i]);
          if (!angle_is_theta(i))
            di = std::min(di, std::abs(di - 2 * M_PI));  // phi wraps
          d = std::max(d, di);
        }
        if (d < 5e-2) {
          dup = true;
          break;
        }
      }
      if (!dup) out.optima_angles.push_back(r.x);
    }
    out.evaluations = evals;
  }
  return out;
}

}  // namespace

BasisOptimum optimize_single_basis(const DensityMatrix& rho, int factor,
                                   const SingleObjective& objective,
                                   const OptimizerConfig& config, Goal goal,
                                   bool collect_optima, double optima_window) {
  if (factor < 0 || factor >= static_cast<int>(rho.dims().size()))
    throw validation_error("optimize_single_basis: factor index out of range");
  auto sp = angle_space(rho.dims(), {factor});
  auto wrap = [&](const std::vector<LocalBasis>& bs) { return objective(bs[0]); };
  return optimize_over_angles(sp, {factor}, wrap, config, goal, {}, collect_optima,
                              optima_window);
}

BasisOptimum optimize_product_bases(
    const DensityMatrix& rho, const std::vector<int>& factors,
    const ProductObjective& objective, const OptimizerConfig& config, Goal goal,
    const std::vector<std::vector<double>>& extra_seed_angles) {
  for (int f : factors)
    if (f < 0 || f >= static_cast<int>(rho.dims().size()))
      throw validation_error("optimize_product_bases: factor index out of range");
  auto sp = angle_space(rho.dims(), factors);
  return optimize_over_angles(sp, factors, objective, config, goal,
                              extra_seed_angles, false, 1e-3);
}

}  // namespace dlab::measure
