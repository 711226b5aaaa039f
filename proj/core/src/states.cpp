#include "dlab/states.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace dlab::rng {

double SplitMix64::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = next_double_open();
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  cached_ = r * std::sin(2.0 * M_PI * u2);
  has_cached_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

}  // namespace dlab::rng

namespace dlab::states {

using qmat::cxd;
using qmat::kron;
using qmat::validation_error;

void BellWeights::validate() const {
  double sum = 0;
  for (double x : p) {
    if (x < -1e-12) throw validation_error("BellWeights: negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw validation_error("BellWeights: weights do not sum to 1");
}

void AcinParams::validate() const {
  double n = std::norm(a) + b * b + c * c + d * d + e * e;
  if (std::abs(n - 1.0) > 1e-12)
    throw validation_error("AcinParams: coefficients not normalized");
}

namespace {

Vector ket4(cxd a, cxd b, cxd c, cxd d) {
  Vector v(4);
  v << a, b, c, d;
  return v;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

PureState bell_phi_plus() {
  return PureState({2, 2}, ket4(kInvSqrt2, 0, 0, kInvSqrt2), "phi+");
}
PureState bell_phi_minus() {
  return PureState({2, 2}, ket4(kInvSqrt2, 0, 0, -kInvSqrt2), "phi-");
}
PureState bell_psi_plus() {
  return PureState({2, 2}, ket4(0, kInvSqrt2, kInvSqrt2, 0), "psi+");
}
PureState bell_psi_minus() {
  return PureState({2, 2}, ket4(0, kInvSqrt2, -kInvSqrt2, 0), "psi-");
}

DensityMatrix bell_mixture(const BellWeights& w) {
  w.validate();
  const PureState bells[4] = {bell_phi_plus(), bell_phi_minus(), bell_psi_plus(),
                              bell_psi_minus()};
  Matrix m = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    m += w.p[i] * (bells[i].amplitudes() * bells[i].amplitudes().adjoint());
  return DensityMatrix({2, 2}, m, "bell_mixture");
}

DensityMatrix mfs_state() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.25;
  m(3, 3) = 0.25;
  const auto psim = bell_psi_minus().amplitudes();
  m += 0.5 * (psim * psim.adjoint());
  return DensityMatrix({2, 2}, m, "mfs");
}

DensityMatrix isotropic(double lambda, int d) {
  if (d < 2) throw validation_error("isotropic: d must be >= 2");
  double lo = -1.0 / (d * d - 1);
  if (lambda < lo - 1e-12 || lambda > 1.0 + 1e-12)
    throw validation_error("isotropic: lambda outside positivity range");
  Vector phi = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) phi[i * d + i] = 1.0 / std::sqrt(double(d));
  Matrix m = lambda * (phi * phi.adjoint()) +
             (1.0 - lambda) / (d * d) * Matrix::Identity(d * d, d * d);
  return DensityMatrix({d, d}, m, "isotropic");
}

PureState ghz(int n_parties, int local_dim) {
  if (n_parties < 2 || local_dim < 2)
    throw validation_error("ghz: need n_parties >= 2 and local_dim >= 2");
  long dim = 1;
  for (int i = 0; i < n_parties; ++i) dim *= local_dim;
  Vector v = Vector::Zero(dim);
  for (int i = 0; i < local_dim; ++i) {
    long idx = 0;
    for (int p = 0; p < n_parties; ++p) idx = idx * local_dim + i;
    v[idx] = 1.0 / std::sqrt(double(local_dim));
  }
  return PureState(std::vector<int>(n_parties, local_dim), v, "ghz");
}

PureState w_state() {
  Vector v = Vector::Zero(8);
  v[0b100] = v[0b010] = v[0b001] = 1.0 / std::sqrt(3.0);
  return PureState({2, 2, 2}, v, "w");
}

PureState aharonov(int n) {
  if (n < 2) throw validation_error("aharonov: n must be >= 2");
  long dim = 1;
  for (int i = 0; i < n; ++i) dim *= n;
  Vector v = Vector::Zero(dim);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double norm = 1.0;
  for (int i = 2; i <= n; ++i) norm *= i;
  norm = 1.0 / std::sqrt(norm);
  // enumerate permutations with their signs
  std::vector<int> p = perm;
  auto index_of = [&](const std::vector<int>& a) {
    long idx = 0;
    for (int x : a) idx = idx * n + x;
    return idx;
  };
  // Heap-style iteration is overkill; use std::next_permutation with
  // explicit parity tracking via inversion count.
  std::sort(p.begin(), p.end());
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inv;
    v[index_of(p)] = (inv % 2 == 0 ? norm : -norm);
  } while (std::next_permutation(p.begin(), p.end()));
  return PureState(std::vector<int>(n, n), v, "aharonov");
}

PureState acin_state(const AcinParams& q) {
  q.validate();
  Vector v = Vector::Zero(8);
  v[0b000] = q.a;
  v[0b010] = q.b;
  v[0b100] = q.c;
  v[0b001] = q.d;
  v[0b111] = q.e;
  return PureState({2, 2, 2}, v, "acin");
}

DensityMatrix bb84_mixture(const std::array<double, 4>& q) {
  double sum = 0;
  for (double x : q) {
    if (x < -1e-12) throw validation_error("bb84_mixture: negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw validation_error("bb84_mixture: weights do not sum to 1");
  Vector plus(2), minus(2), zero(2), one(2);
  zero << 1, 0;
  one << 0, 1;
  plus << kInvSqrt2, kInvSqrt2;
  minus << kInvSqrt2, -kInvSqrt2;
  Vector kets[4] = {kron(zero, zero), kron(zero, one), kron(one, plus), kron(one, minus)};
  Matrix m = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) m += q[i] * (kets[i] * kets[i].adjoint());
  return DensityMatrix({2, 2}, m, "bb84");
}

Matrix sausage_basis() {
  auto k3 = [](int i) {
    Vector v = Vector::Zero(3);
    v[i] = 1;
    return v;
  };
  auto pm = [&](int i, int j, double sign) {
    return Vector(kInvSqrt2 * (k3(i) + sign * k3(j)));
  };
  Matrix b(9, 9);
  int col = 0;
  auto put = [&](const Vector& a, const Vector& c) { b.col(col++) = kron(a, c); };
  put(pm(0, 1, +1), k3(2));   // |0+1>|2>
  put(pm(0, 1, -1), k3(2));   // |0-1>|2>
  put(k3(0), pm(0, 1, +1));   // |0>|0+1>
  put(k3(0), pm(0, 1, -1));   // |0>|0-1>
  put(pm(1, 2, +1), k3(0));   // |1+2>|0>
  put(pm(1, 2, -1), k3(0));   // |1-2>|0>
  put(k3(1), k3(1));          // |1>|1>
  put(k3(2), k3(2));          // |2>|2>
  put(k3(2), k3(1));          // |2>|1>
  return b;
}

DensityMatrix sausage_mixture(const std::array<double, 9>& q) {
  double sum = 0;
  for (double x : q) {
    if (x < -1e-12) throw validation_error("sausage_mixture: negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw validation_error("sausage_mixture: weights do not sum to 1");
  Matrix b = sausage_basis();
  Matrix m = Matrix::Zero(9, 9);
  for (int i = 0; i < 9; ++i) m += q[i] * (b.col(i) * b.col(i).adjoint());
  return DensityMatrix({3, 3}, m, "sausage");
}

DensityMatrix classically_correlated(const Eigen::MatrixXd& p, const Matrix& basisA,
                                     const Matrix& basisB) {
  const int da = static_cast<int>(p.rows());
  const int db = static_cast<int>(p.cols());
  Matrix A = basisA.size() ? basisA : Matrix(Matrix::Identity(da, da));
  Matrix B = basisB.size() ? basisB : Matrix(Matrix::Identity(db, db));
  if (A.rows() != da || B.rows() != db)
    throw validation_error("classically_correlated: basis dimension mismatch");
  Matrix m = Matrix::Zero(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) {
      if (p(i, j) < -1e-12)
        throw validation_error("classically_correlated: negative probability");
      Vector v = kron(Vector(A.col(i)), Vector(B.col(j)));
      m += p(i, j) * (v * v.adjoint());
    }
  return DensityMatrix({da, db}, m, "classically_correlated");
}

DensityMatrix cc_pair() {
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0, 0, 0.5;
  return classically_correlated(p);
}

DensityMatrix random_state(const std::vector<int>& dims, rng::RngSeed seed) {
  const int d = qmat::total_dim(dims);
  rng::SplitMix64 gen(seed);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      g(i, j) = cxd(gen.next_normal(), gen.next_normal());
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(dims, m, "random_hs");
}

Matrix random_unitary(int d, rng::RngSeed seed) {
  rng::SplitMix64 gen(seed);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      g(i, j) = cxd(gen.next_normal(), gen.next_normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix phases so the result does not depend on QR sign conventions
  for (int i = 0; i < d; ++i) {
    cxd ph = r(i, i) / std::abs(r(i, i));
    q.col(i) *= ph;
  }
  return q;
}

DensityMatrix maximally_correlated(const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  if (a.rows() != a.cols()) throw validation_error("maximally_correlated: a not square");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw validation_error("maximally_correlated: a not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw validation_error("maximally_correlated: a not positive semidefinite");
  if (std::abs(a.trace().real() - 1.0) > 1e-10)
    throw validation_error("maximally_correlated: a not unit trace");
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m(i * d + i, j * d + j) = a(i, j);
  return DensityMatrix({d, d}, m, "maximally_correlated");
}

}  // namespace dlab::states
