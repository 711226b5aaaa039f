#include "dlab/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace dlab::qmat {

namespace {

void check_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << who << ": matrix is " << m.rows() << "x" << m.cols() << ", not square";
    throw validation_error(os.str());
  }
}

}  // namespace

double log2_safe(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double shannon(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= log2_safe(x);
  return h;
}

double binary_entropy(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12)
    throw validation_error("binary_entropy: probability outside [0,1]");
  p = std::clamp(p, 0.0, 1.0);
  return -log2_safe(p) - log2_safe(1.0 - p);
}

int total_dim(const std::vector<int>& dims) {
  int d = 1;
  for (int x : dims) d *= x;
  return d;
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  Matrix g = u.adjoint() * u;
  return (g - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < tol;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix::DensityMatrix(std::vector<int> dims, Matrix entries, std::string label)
    : dims_(std::move(dims)), mat_(std::move(entries)), label_(std::move(label)) {
  check_square(mat_, "DensityMatrix");
  if (dims_.empty()) throw validation_error("DensityMatrix: empty dims list");
  for (int d : dims_)
    if (d < 1) throw validation_error("DensityMatrix: nonpositive factor dimension");
  if (total_dim(dims_) != mat_.rows()) {
    std::ostringstream os;
    os << "DensityMatrix: side length " << mat_.rows()
       << " does not equal product of dims " << total_dim(dims_);
    throw validation_error(os.str());
  }
  double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermTol) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (max deviation " << herm << ")";
    throw validation_error(os.str());
  }
  double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol || std::abs(mat_.trace().imag()) > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " deviates from 1";
    throw validation_error(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  double emin = es.eigenvalues().minCoeff();
  if (emin < -kEigNegTol) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << emin;
    throw validation_error(os.str());
  }
}

double DensityMatrix::qubits() const { return std::log2(static_cast<double>(dim())); }

PureState::PureState(std::vector<int> dims, Vector amplitudes, std::string label)
    : dims_(std::move(dims)), amp_(std::move(amplitudes)), label_(std::move(label)) {
  if (dims_.empty()) throw validation_error("PureState: empty dims list");
  if (total_dim(dims_) != amp_.size())
    throw validation_error("PureState: length does not equal product of dims");
  if (std::abs(amp_.norm() - 1.0) > 1e-10)
    throw validation_error("PureState: norm deviates from 1");
}

DensityMatrix PureState::projector() const {
  return DensityMatrix(dims_, amp_ * amp_.adjoint(), label_);
}

Spectrum spectrum(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  const auto& ev = es.eigenvalues();
  const auto& V = es.eigenvectors();
  Spectrum s;
  s.eigenvalues.resize(ev.size());
  s.eigenvectors.resize(V.rows(), V.cols());
  // Eigen sorts ascending; we report descending.
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    s.eigenvalues[i] = ev[ev.size() - 1 - i];
    s.eigenvectors.col(i) = V.col(ev.size() - 1 - i);
  }
  return s;
}

double entropy_of_eigenvalues(std::span<const double> ev) {
  double h = 0.0;
  for (double lam : ev) {
    if (lam < -kEigNegTol) {
      std::ostringstream os;
      os << "entropy: eigenvalue " << lam << " below -1e-10";
      throw validation_error(os.str());
    }
    h -= log2_safe(std::clamp(lam, 0.0, 1.0));
  }
  return h;
}

double entropy_raw(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  return entropy_of_eigenvalues(
      std::span<const double>(es.eigenvalues().data(), es.eigenvalues().size()));
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_raw(rho.matrix()); }

double information(const DensityMatrix& rho) {
  return rho.qubits() - von_neumann_entropy(rho);
}

Matrix partial_trace_raw(const Matrix& rho, const std::vector<int>& dims,
                         const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<int> traced;
  for (int f = 0; f < n; ++f)
    if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);

  // Strides of each factor in the flattened row-major (leftmost = slowest) index.
  std::vector<long> stride(n, 1);
  for (int f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  int dk = 1;
  for (int f : keep) dk *= dims[f];
  int dt = 1;
  for (int f : traced) dt *= dims[f];

  auto offset_of = [&](const std::vector<int>& factors, int combined) {
    long off = 0;
    for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
      int f = factors[i];
      off += static_cast<long>(combined % dims[f]) * stride[f];
      combined /= dims[f];
    }
    return off;
  };

  Matrix out = Matrix::Zero(dk, dt == 0 ? dk : dk);
  for (int i = 0; i < dk; ++i) {
    long oi = offset_of(keep, i);
    for (int j = 0; j < dk; ++j) {
      long oj = offset_of(keep, j);
      cxd sum = 0.0;
      for (int t = 0; t < dt; ++t) {
        long ot = offset_of(traced, t);
        sum += rho(oi + ot, oj + ot);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  if (keep.empty())
    throw validation_error("partial_trace: empty keep set (use trace instead)");
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw validation_error("partial_trace: duplicate factor index");
  for (int f : sorted)
    if (f < 0 || f >= static_cast<int>(rho.dims().size()))
      throw validation_error("partial_trace: factor index out of range");
  std::vector<int> new_dims;
  for (int f : sorted) new_dims.push_back(rho.dims()[f]);
  return DensityMatrix(new_dims, partial_trace_raw(rho.matrix(), rho.dims(), sorted),
                       rho.label());
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(dims, kron(a.matrix(), b.matrix()));
}

double relative_entropy_raw(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows())
    throw validation_error("relative_entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const auto& lam = es.eigenvalues();
  const Matrix& U = es.eigenvectors();
  double cross = 0.0;  // -tr rho log2 sigma, computed in sigma's eigenbasis
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    double w = std::max((U.col(k).adjoint() * rho * U.col(k))(0, 0).real(), 0.0);
    if (lam[k] < 1e-12) {
      if (w > 1e-9) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross -= w * std::log2(lam[k]);
  }
  return cross - entropy_raw(rho);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return relative_entropy_raw(rho.matrix(), sigma.matrix());
}

double shannon_in_basis(const DensityMatrix& rho, const Matrix& basis) {
  if (basis.rows() != rho.dim() || basis.cols() != rho.dim() || !is_unitary(basis))
    throw validation_error("shannon_in_basis: basis does not span the full space");
  double h = 0.0;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    double p = (basis.col(i).adjoint() * rho.matrix() * basis.col(i))(0, 0).real();
    h -= log2_safe(std::max(p, 0.0));
  }
  return h;
}

Matrix dephase_in_global_basis(const Matrix& rho, const Matrix& basis) {
  Matrix d = (basis.adjoint() * rho * basis).diagonal().asDiagonal();
  return basis * d * basis.adjoint();
}

Matrix partial_transpose_raw(const Matrix& rho, const std::vector<int>& dims,
                             int factor) {
  const int n = static_cast<int>(dims.size());
  if (factor < 0 || factor >= n)
    throw validation_error("partial_transpose: factor index out of range");
  std::vector<long> stride(n, 1);
  for (int f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];
  const int d = static_cast<int>(rho.rows());
  const int df = dims[factor];
  Matrix out(d, d);
  for (int i = 0; i < d; ++i) {
    int fi = static_cast<int>((i / stride[factor]) % df);
    long base_i = i - fi * stride[factor];
    for (int j = 0; j < d; ++j) {
      int fj = static_cast<int>((j / stride[factor]) % df);
      long base_j = j - fj * stride[factor];
      // swap the factor's row/column indices
      out(base_i + fj * stride[factor], base_j + fi * stride[factor]) = rho(i, j);
    }
  }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, int factor) {
  return partial_transpose_raw(rho.matrix(), rho.dims(), factor);
}

}  // namespace dlab::qmat
