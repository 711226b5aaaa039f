#include "dlab/enttools.hpp"

#include "dlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dlab::enttools {

using measure::nelder_mead;
using qmat::cxd;
using qmat::entropy_raw;
using qmat::kron;
using qmat::log2_safe;
using qmat::validation_error;

Matrix SeparableAnsatz::assemble() const {
  const int d = local_dims[0] * local_dims[1];
  Matrix sigma = Matrix::Zero(d, d);
  for (const auto& c : components) {
    Vector v = kron(Matrix(c.a), Matrix(c.b));
    sigma += c.weight * (v * v.adjoint());
  }
  return sigma;
}

void SeparableAnsatz::validate() const {
  double sum = 0;
  for (const auto& c : components) {
    if (c.weight < -1e-12) throw validation_error("SeparableAnsatz: negative weight");
    if (std::abs(c.a.norm() - 1.0) > 1e-9 || std::abs(c.b.norm() - 1.0) > 1e-9)
      throw validation_error("SeparableAnsatz: local vector not unit norm");
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw validation_error("SeparableAnsatz: weights do not sum to 1");
}

namespace {

// -tr rho log2 sigma; +inf when rho has weight outside sigma's support.
double cross_entropy(const Matrix& rho, const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const auto& lam = es.eigenvalues();
  const Matrix& u = es.eigenvectors();
  double out = 0;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    double w = std::max((u.col(k).adjoint() * rho * u.col(k))(0, 0).real(), 0.0);
    if (lam[k] < 1e-14) {
      if (w > 1e-11) return std::numeric_limits<double>::infinity();
      continue;
    }
    out -= w * std::log2(lam[k]);
  }
  return out;
}

// Angle parametrization of a product component: vector angles on A then B.
struct ComponentSpace {
  int da, db;
  int na, nb;  // angle counts
  int total() const { return na + nb; }
};

Vector product_vector(const ComponentSpace& sp, std::span<const double> x) {
  Vector a = measure::vector_from_angles(sp.da, x.subspan(0, sp.na));
  Vector b = measure::vector_from_angles(sp.db, x.subspan(sp.na, sp.nb));
  return kron(Matrix(a), Matrix(b));
}

// Inverse of vector_from_angles (global phase discarded).
std::vector<double> angles_of_vector(int d, Vector v) {
  // phase-fix: first nonzero component real and nonnegative
  for (int i = 0; i < d; ++i)
    if (std::abs(v[i]) > 1e-12) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      break;
    }
  if (d == 2)
    return {2.0 * std::atan2(std::abs(v[1]), v[0].real()),
            std::abs(v[1]) > 1e-14 ? std::arg(v[1]) : 0.0};
  // chain inverse: |v_r| = cos(t_r) * sin(t_{r-1}) * ... * sin(t_0), and the
  // phase of v_{r+1} accumulates the phi's
  std::vector<double> ang;
  double rem = 1.0, phase = 0.0;
  for (int r = 0; r + 1 < d; ++r) {
    double vr = std::abs(v[r]);
    double rest = std::sqrt(std::max(rem * rem - vr * vr, 0.0));
    ang.push_back(std::atan2(rest, vr));
    double ph = std::abs(v[r + 1]) > 1e-14 ? std::arg(v[r + 1]) - phase : 0.0;
    ang.push_back(ph);
    phase += ph;
    rem = rest;
  }
  return ang;
}

// Best product approximation of a bipartite vector via its Schmidt form.
Vector closest_product(const Vector& v, int da, int db, Vector* a_out = nullptr,
                       Vector* b_out = nullptr) {
  Eigen::Map<const Matrix> m(v.data(), db, da);  // column-major: (b, a)
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector b = svd.matrixU().col(0);
  Vector a = svd.matrixV().col(0).conjugate();
  if (a_out) *a_out = a;
  if (b_out) *b_out = b;
  return kron(Matrix(a), Matrix(b));
}

struct ErWork {
  const Matrix* rho = nullptr;
  ComponentSpace sp{2, 2, 2, 2};
  int K = 0;
  std::vector<std::vector<double>> angles;  // per component
  std::vector<Vector> vectors;              // cached product vectors
  Eigen::VectorXd w;

  Matrix sigma() const {
    Matrix s = Matrix::Zero(rho->rows(), rho->cols());
    for (int k = 0; k < K; ++k) s += w[k] * (vectors[k] * vectors[k].adjoint());
    return s;
  }
  double objective() const { return cross_entropy(*rho, sigma()); }
};

// Exponentiated-gradient descent on the weight simplex. The gradient of
// -tr rho log sigma in sigma is available in closed form through the
// divided differences of log at sigma's eigenvalues.
void optimize_weights(ErWork& work, int iterations) {
  const int d = static_cast<int>(work.rho->rows());
  for (int it = 0; it < iterations; ++it) {
    Matrix sigma = work.sigma();
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(1e-300);
    const Matrix& u = es.eigenvectors();
    Eigen::MatrixXd r(d, d);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        r(m, n) = std::abs(lam[m] - lam[n]) < 1e-12 * std::max(lam[m], lam[n])
                      ? 1.0 / lam[m]
                      : (std::log(lam[m]) - std::log(lam[n])) / (lam[m] - lam[n]);
    Matrix rho_u = u.adjoint() * (*work.rho) * u;
    Eigen::VectorXd g(work.K);
    for (int k = 0; k < work.K; ++k) {
      Matrix dv = u.adjoint() * work.vectors[k];  // d x 1
      double acc = 0;
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
          acc += r(m, n) * std::real(dv(m, 0) * std::conj(dv(n, 0)) * rho_u(n, m));
      g[k] = -acc / std::log(2.0);
    }
    double gmax = g.cwiseAbs().maxCoeff();
    if (gmax < 1e-13) break;
    Eigen::VectorXd wn = work.w.array() * (-0.5 * g.array() / gmax).exp();
    wn = wn.cwiseMax(1e-14);
    work.w = wn / wn.sum();
  }
}

void refine_components(ErWork& work, int nm_iterations) {
  Matrix full = work.sigma();
  for (int k = 0; k < work.K; ++k) {
    if (work.w[k] < 1e-10) continue;
    Matrix rest = full - work.w[k] * (work.vectors[k] * work.vectors[k].adjoint());
    auto f = [&](const std::vector<double>& x) {
      Vector v = product_vector(work.sp, x);
      return cross_entropy(*work.rho, rest + work.w[k] * (v * v.adjoint()));
    };
    auto r = nelder_mead(f, work.angles[k], 0.15, nm_iterations, 1e-12);
    if (r.fx <= f(work.angles[k])) {
      work.angles[k] = r.x;
      work.vectors[k] = product_vector(work.sp, r.x);
    }
    full = rest + work.w[k] * (work.vectors[k] * work.vectors[k].adjoint());
  }
}

void seed_eigen_products(ErWork& work, const Matrix& rho, std::uint64_t salt) {
  auto sp = qmat::spectrum(rho);
  rng::SplitMix64 gen(rng::RngSeed{0xE16E5ULL, salt});
  const int d = static_cast<int>(rho.rows());
  for (int k = 0; k < work.K; ++k) {
    Vector a, b;
    closest_product(sp.eigenvectors.col(k % d), work.sp.da, work.sp.db, &a, &b);
    auto ang_a = angles_of_vector(work.sp.da, a);
    auto ang_b = angles_of_vector(work.sp.db, b);
    std::vector<double> x;
    x.insert(x.end(), ang_a.begin(), ang_a.end());
    x.insert(x.end(), ang_b.begin(), ang_b.end());
    double jitter = 0.15 * (k / d);
    for (auto& t : x) t += jitter * (gen.next_double() - 0.5);
    work.angles[k] = x;
    work.vectors[k] = product_vector(work.sp, x);
    work.w[k] = std::max(sp.eigenvalues[k % d], 0.02);
  }
  work.w /= work.w.sum();
}

// Alternating least-squares fit of sigma to rho in Frobenius norm; lands on
// rho itself when rho is separable, which is the exact E_r = 0 minimizer.
void frobenius_fit(ErWork& work, const Matrix& rho, int sweeps) {
  for (int s = 0; s < sweeps; ++s) {
    Matrix full = work.sigma();
    for (int k = 0; k < work.K; ++k) {
      Matrix resid =
          rho - (full - work.w[k] * (work.vectors[k] * work.vectors[k].adjoint()));
      auto spr = qmat::spectrum(0.5 * (resid + resid.adjoint().eval()));
      if (spr.eigenvalues[0] <= 1e-12) continue;
      Vector a, b;
      closest_product(spr.eigenvectors.col(0), work.sp.da, work.sp.db, &a, &b);
      Vector v = kron(Matrix(a), Matrix(b));
      double wk = std::clamp((v.adjoint() * resid * v)(0, 0).real(), 1e-6, 1.0);
      auto ang_a = angles_of_vector(work.sp.da, a);
      auto ang_b = angles_of_vector(work.sp.db, b);
      std::vector<double> x;
      x.insert(x.end(), ang_a.begin(), ang_a.end());
      x.insert(x.end(), ang_b.begin(), ang_b.end());
      work.angles[k] = x;
      work.vectors[k] = product_vector(work.sp, x);
      work.w[k] = wk;
      full = work.sigma();
    }
    work.w /= work.w.sum();
  }
}

}  // namespace

ErResult relative_entropy_of_entanglement(const DensityMatrix& rho,
                                          const ErConfig& config) {
  if (rho.dims().size() != 2)
    throw validation_error("relative_entropy_of_entanglement: need two factors");
  const int da = rho.dims()[0], db = rho.dims()[1];
  if (!((da == 2 && db == 2) || (da == 2 && db == 3) || (da == 3 && db == 2)))
    throw validation_error(
        "relative_entropy_of_entanglement: supported dims are 2x2 and 2x3");

  const Matrix& m = rho.matrix();
  const double s_rho = entropy_raw(m);
  ComponentSpace sp{da, db, measure::vector_angle_count(da),
                    measure::vector_angle_count(db)};

  ErResult out;
  out.value = std::numeric_limits<double>::infinity();
  double best_cross = std::numeric_limits<double>::infinity();
  ErWork best_work;
  std::vector<double> restart_values;

  for (int rs = 0; rs < config.restarts; ++rs) {
    ErWork work{&m, sp, config.components,
                std::vector<std::vector<double>>(config.components),
                std::vector<Vector>(config.components),
                Eigen::VectorXd::Constant(config.components, 1.0 / config.components)};
    if (rs == 0 || rs == 1) {
      seed_eigen_products(work, m, rs);
      if (rs == 1) frobenius_fit(work, m, 3);
    } else {
      rng::SplitMix64 gen(rng::RngSeed{0x5E9A12AB17ULL, static_cast<std::uint64_t>(rs)});
      for (int k = 0; k < config.components; ++k) {
        std::vector<double> x(sp.total());
        for (int i = 0; i < sp.total(); ++i)
          x[i] = (i % 2 == 0 ? M_PI : 2 * M_PI) * gen.next_double();
        work.angles[k] = x;
        work.vectors[k] = product_vector(sp, x);
      }
    }

    optimize_weights(work, 60);
    double prev = work.objective();
    for (int sweep = 0; sweep < config.sweeps; ++sweep) {
      refine_components(work, config.nm_iterations);
      optimize_weights(work, 40);
      double now = work.objective();
      if (prev - now < 1e-9) {
        prev = now;
        break;
      }
      prev = now;
    }
    restart_values.push_back(prev - s_rho);
    if (prev < best_cross) {
      best_cross = prev;
      best_work = work;
    }
    out.restarts_used = rs + 1;
    // converged when the last `agree_needed` restart results bunch up at the
    // incumbent minimum
    if (rs + 1 >= config.agree_needed) {
      bool agree = true;
      double incumbent = best_cross - s_rho;
      for (int j = 0; j < config.agree_needed; ++j)
        agree = agree &&
                std::abs(restart_values[restart_values.size() - 1 - j] - incumbent) <
                    config.tolerance;
      if (agree) {
        out.converged = true;
        break;
      }
    }
  }

  // polish the incumbent
  for (int extra = 0; extra < 4; ++extra) {
    double before = best_work.objective();
    refine_components(best_work, 2 * config.nm_iterations);
    optimize_weights(best_work, 80);
    if (before - best_work.objective() < 1e-10) break;
  }
  best_cross = best_work.objective();

  out.value = std::max(best_cross - s_rho, 0.0);
  out.closest.local_dims = {da, db};
  for (int k = 0; k < config.components; ++k) {
    SeparableComponent c;
    c.weight = best_work.w[k];
    c.a = measure::vector_from_angles(
        da, std::span<const double>(best_work.angles[k]).subspan(0, sp.na));
    c.b = measure::vector_from_angles(
        db, std::span<const double>(best_work.angles[k]).subspan(sp.na, sp.nb));
    out.closest.components.push_back(std::move(c));
  }
  return out;
}

double er_bell_diagonal_closed_form(const states::BellWeights& w) {
  w.validate();
  double pmax = *std::max_element(w.p.begin(), w.p.end());
  if (pmax <= 0.5) return 0.0;
  return 1.0 - qmat::binary_entropy(pmax);
}

IpbBound ipb_upper_bound(const DensityMatrix& rho,
                         const measure::OptimizerConfig& config) {
  if (rho.dims().size() != 2)
    throw validation_error("ipb_upper_bound: need two factors");
  const Matrix& m = rho.matrix();
  const auto& dims = rho.dims();
  double s = entropy_raw(m);

  double best = std::numeric_limits<double>::infinity();
  measure::BasisOptimum best_opt;
  int best_factor = 0;
  for (int f = 0; f < 2; ++f) {
    if (dims[f] > 4) continue;
    auto objective = [&](const LocalBasis& b) {
      auto ens = measure::condition_raw(m, dims, b);
      // receiver dephasing in each conditional eigenbasis: H(rho, B) =
      // H({p_i}) + sum_i p_i S(rho_B^i)
      return ens.shannon() + ens.average_entropy();
    };
    auto opt = measure::optimize_single_basis(rho, f, objective, config);
    if (opt.value < best) {
      best = opt.value;
      best_opt = opt;
      best_factor = f;
    }
  }
  IpbBound out;
  out.value = best - s;
  out.basis.sender_factor = best_factor;
  out.basis.sender_basis = best_opt.bases[0].vectors;
  auto ens = measure::condition_raw(m, dims, best_opt.bases[0]);
  for (const auto& o : ens.outcomes) {
    if (o.null_state) {
      out.basis.receiver_bases.push_back(
          Matrix::Identity(dims[1 - best_factor], dims[1 - best_factor]));
    } else {
      out.basis.receiver_bases.push_back(qmat::spectrum(o.state).eigenvectors);
    }
  }
  return out;
}

std::pair<double, double> basis_distance_identity_check(const DensityMatrix& rho,
                                                        const Matrix& global_basis) {
  double lhs = qmat::shannon_in_basis(rho, global_basis);
  Matrix dephased = qmat::dephase_in_global_basis(rho.matrix(), global_basis);
  double rhs = qmat::relative_entropy_raw(rho.matrix(), dephased) +
               entropy_raw(rho.matrix());
  return {lhs, rhs};
}

MonotonicityCheck dephasing_monotonicity_check(const DensityMatrix& rho,
                                               const LocalBasis& basis,
                                               const ErConfig& config) {
  DensityMatrix dephased = measure::dephase(rho, basis);
  MonotonicityCheck out;
  out.delta_Er = relative_entropy_of_entanglement(rho, config).value -
                 relative_entropy_of_entanglement(dephased, config).value;
  out.delta_S = entropy_raw(dephased.matrix()) - entropy_raw(rho.matrix());
  out.holds = out.delta_Er <= out.delta_S + 2e-4;
  return out;
}

double sdp_bound(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw validation_error("sdp_bound: dimension mismatch");
  Matrix gamma = qmat::partial_transpose(sigma, 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gamma, Eigen::EigenvaluesOnly);
  double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  return -std::log2(lmax) - entropy_raw(rho.matrix()) -
         qmat::relative_entropy(rho, sigma);
}

SdpSearchResult sdp_bound_search(const DensityMatrix& rho, int iterations) {
  const int d = rho.dim();
  const Matrix& m = rho.matrix();
  const auto& dims = rho.dims();
  double s_rho = entropy_raw(m);

  // sigma = LL^dag / tr, with L lower triangular (d^2 real parameters)
  auto unpack = [&](const std::vector<double>& x) {
    Matrix l = Matrix::Zero(d, d);
    int idx = 0;
    for (int i = 0; i < d; ++i) {
      l(i, i) = x[idx++];
      for (int j = 0; j < i; ++j) {
        l(i, j) = cxd(x[idx], x[idx + 1]);
        idx += 2;
      }
    }
    Matrix sig = l * l.adjoint();
    double tr = sig.trace().real();
    if (tr < 1e-14) return Matrix(Matrix::Identity(d, d) / d);
    return Matrix(sig / tr);
  };
  auto objective = [&](const std::vector<double>& x) {
    Matrix sig = unpack(x);
    Matrix gamma = qmat::partial_transpose_raw(sig, dims, 1);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gamma, Eigen::EigenvaluesOnly);
    double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    double rel = qmat::relative_entropy_raw(m, sig);
    if (!std::isfinite(rel)) return 1e6;
    return std::log2(lmax) + s_rho + rel;  // negated bound
  };

  // seed at sigma = rho (softened to keep the Cholesky well defined)
  Matrix soft = 0.999 * m + 0.001 * Matrix::Identity(d, d) / d;
  Eigen::LLT<Matrix> llt(soft);
  Matrix l = llt.matrixL();
  std::vector<double> x0;
  for (int i = 0; i < d; ++i) {
    x0.push_back(l(i, i).real());
    for (int j = 0; j < i; ++j) {
      x0.push_back(l(i, j).real());
      x0.push_back(l(i, j).imag());
    }
  }
  double seed_value = -objective(x0);
  auto r = nelder_mead(objective, x0, 0.05, iterations, 1e-11);
  SdpSearchResult out{std::max(-r.fx, seed_value),
                      DensityMatrix(dims, unpack(-r.fx >= seed_value ? r.x : x0))};
  return out;
}

ErasureBracket erasure_cost_bracket(const DensityMatrix& rho,
                                    const measure::OptimizerConfig& config,
                                    const ErConfig& er_config) {
  ErasureBracket out;
  auto er = relative_entropy_of_entanglement(rho, er_config);
  out.lower = er.value;
  out.er_converged = er.converged;
  if (rho.dims().size() == 2 && rho.dims()[0] == 2 && rho.dims()[1] == 2) {
    out.upper = deficits::twoqubit_deficit(rho, config).value;
  } else {
    out.upper = ipb_upper_bound(rho, config).value;  // still >= Delta >= Delta_sep
  }
  return out;
}

SupersaturationCheck supersaturation_check(const DensityMatrix& rho,
                                           const ErConfig& config) {
  if (rho.dims().size() != 2 || rho.dims()[0] != rho.dims()[1])
    throw validation_error("supersaturation_check: need d x d bipartite state");
  SupersaturationCheck out;
  out.lhs = 2.0 * relative_entropy_of_entanglement(rho, config).value +
            entropy_raw(rho.matrix());
  out.rhs = 2.0 * std::log2(double(rho.dims()[0]));
  out.violated = out.lhs > out.rhs + 2e-4;
  return out;
}

double maximally_correlated_er(const Matrix& a) {
  if (a.rows() != a.cols()) throw validation_error("maximally_correlated_er: a not square");
  double h_diag = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    h_diag -= log2_safe(std::max(a(i, i).real(), 0.0));
  return h_diag - entropy_raw(a);
}

}  // namespace dlab::enttools
