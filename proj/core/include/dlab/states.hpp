#pragma once

#include "dlab/qmat.hpp"
#include "dlab/rng.hpp"

#include <array>

// Constructors for every named state used throughout, plus seeded
// Hilbert-Schmidt random-state sampling.

namespace dlab::states {

using qmat::DensityMatrix;
using qmat::Matrix;
using qmat::PureState;
using qmat::Vector;

/// Mixing weights for the four Bell projectors, in (phi+, phi-, psi+, psi-)
/// order. That ordering is fixed project-wide.
struct BellWeights {
  std::array<double, 4> p;
  void validate() const;  // each >= 0, sum 1 within 1e-12
};

/// Coefficients of the three-qubit canonical form
/// a|000> + b|010> + c|100> + d|001> + e|111>; only `a` may be complex.
struct AcinParams {
  qmat::cxd a;
  double b = 0, c = 0, d = 0, e = 0;
  void validate() const;  // |a|^2+b^2+c^2+d^2+e^2 = 1 within 1e-12
};

// Bell pairs on dims [2,2].
PureState bell_phi_plus();
PureState bell_phi_minus();
PureState bell_psi_plus();
PureState bell_psi_minus();
inline PureState singlet() { return bell_psi_minus(); }

DensityMatrix bell_mixture(const BellWeights& w);

/// 1/4|00><00| + 1/4|11><11| + 1/2|psi-><psi-|: separable, locally
/// distinguishable eigenbasis, nonzero deficit.
DensityMatrix mfs_state();

/// lambda*|phi_max><phi_max| + (1-lambda)*I/d^2 on dims [d,d].
DensityMatrix isotropic(double lambda, int d);

/// n-party GHZ with local dimension `local_dim`:
/// (|00..0> + |11..1> + ... )/sqrt(local_dim).
PureState ghz(int n_parties, int local_dim);

/// (|100> + |010> + |001>)/sqrt(3).
PureState w_state();

/// Totally antisymmetric state of n n-dimensional parties (Levi-Civita
/// amplitudes, normalized by 1/sqrt(n!)).
PureState aharonov(int n);

PureState acin_state(const AcinParams& p);

/// Mixture of |0>|0>, |0>|1>, |1>|+>, |1>|-> projectors with weights q.
DensityMatrix bb84_mixture(const std::array<double, 4>& q);

/// Diagonal mixture in the 3x3 product basis built from the "sausage"
/// vectors; separable by construction, nondegenerate for distinct q.
DensityMatrix sausage_mixture(const std::array<double, 9>& q);

/// The nine sausage basis product vectors (columns, dims [3,3]).
Matrix sausage_basis();

/// sum_ij p_ij |i><i| (x) |j><j| in the given local bases (identity bases if
/// the matrices are empty).
DensityMatrix classically_correlated(const Eigen::MatrixXd& p,
                                     const Matrix& basisA = Matrix(),
                                     const Matrix& basisB = Matrix());

/// (|00><00| + |11><11|)/2.
DensityMatrix cc_pair();

/// Hilbert-Schmidt random state: rho = GG^dag / tr(GG^dag) with G a square
/// complex Ginibre matrix. Bit-exact reproducible per (seed, stream).
DensityMatrix random_state(const std::vector<int>& dims, rng::RngSeed seed);

/// Haar-ish random unitary (QR of a Ginibre matrix), deterministic per seed.
Matrix random_unitary(int d, rng::RngSeed seed);

/// rho_mc = sum_ij a_ij |ii><jj| embedded in dims [d,d]; `a` must be PSD
/// with unit trace.
DensityMatrix maximally_correlated(const Matrix& a);

}  // namespace dlab::states
