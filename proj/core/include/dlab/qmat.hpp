#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

// Dense complex Hermitian linear algebra and the entropy functionals the
// rest of the library consumes. All entropies are base-2 (bits).

namespace dlab::qmat {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigNegTol = 1e-10;

/// Thrown when a would-be state violates one of its invariants. The message
/// names the violated invariant.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double log2_safe(double p);          // p*log2(p) convention: 0*log(0) = 0
double shannon(std::span<const double> p);
double binary_entropy(double p);     // errors if p outside [0,1] by > 1e-12

/// Trace-one positive-semidefinite complex matrix with an explicit tensor
/// factor dimension list. Validates Hermiticity, trace and positivity on
/// construction; immutable afterwards.
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> dims, Matrix entries, std::string label = "");

  const std::vector<int>& dims() const { return dims_; }
  const Matrix& matrix() const { return mat_; }
  const std::string& label() const { return label_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  /// log2 of the total dimension ("number of qubits", fractional for qudits).
  double qubits() const;

 private:
  std::vector<int> dims_;
  Matrix mat_;
  std::string label_;
};

/// Unit vector on a listed tensor-factor structure.
class PureState {
 public:
  PureState(std::vector<int> dims, Vector amplitudes, std::string label = "");

  const std::vector<int>& dims() const { return dims_; }
  const Vector& amplitudes() const { return amp_; }
  const std::string& label() const { return label_; }
  int dim() const { return static_cast<int>(amp_.size()); }
  DensityMatrix projector() const;

 private:
  std::vector<int> dims_;
  Vector amp_;
  std::string label_;
};

/// Eigenvalues sorted descending with matching eigenvector columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;
};

Spectrum spectrum(const Matrix& hermitian);

// --- raw kernels (no DensityMatrix validation; hot paths use these) ---

/// Entropy of a Hermitian PSD matrix from its eigenvalues, in bits.
double entropy_raw(const Matrix& rho);
double entropy_of_eigenvalues(std::span<const double> ev);

Matrix partial_trace_raw(const Matrix& rho, const std::vector<int>& dims,
                         const std::vector<int>& keep);

// --- spec operations ---

double von_neumann_entropy(const DensityMatrix& rho);

/// I(rho) = log2(d) - S(rho). Dimension dependent: embedding the same state
/// in a larger space changes the value.
double information(const DensityMatrix& rho);

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// S(rho|sigma) = tr rho log rho - tr rho log sigma, in bits. Returns
/// +infinity when support(rho) is not contained in support(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
double relative_entropy_raw(const Matrix& rho, const Matrix& sigma);

/// Shannon entropy of the diagonal of rho in a full-space orthonormal basis
/// (columns of `basis`).
double shannon_in_basis(const DensityMatrix& rho, const Matrix& basis);

/// Pinch rho to its diagonal in the given full-space basis.
Matrix dephase_in_global_basis(const Matrix& rho, const Matrix& basis);

/// Transpose the chosen factor's indices. Output is Hermitian and trace-one
/// but in general not positive, so it is returned as a bare matrix.
Matrix partial_transpose(const DensityMatrix& rho, int factor);
Matrix partial_transpose_raw(const Matrix& rho, const std::vector<int>& dims,
                             int factor);

// --- helpers shared across modules ---

int total_dim(const std::vector<int>& dims);
bool is_unitary(const Matrix& u, double tol = 1e-10);
double trace_distance(const Matrix& a, const Matrix& b);

/// Kronecker product of bare matrices.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace dlab::qmat
