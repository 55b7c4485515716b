// Dense complex linear algebra for small Hermitian problems: validated
// operator types, degeneracy-grouped spectral decompositions, and the
// spectral matrix exponential. Everything here is value-semantic and
// immutable after construction.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

namespace qwork {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest entry magnitude, max_ij |a_ij|. Zero for empty matrices.
double max_norm(const Matrix& a);

double frobenius_norm(const Matrix& a);

/// ||A - A^dagger||_max.
double hermiticity_defect(const Matrix& a);

bool all_finite(const Matrix& a);

/// Checked product; throws std::invalid_argument on inner-dimension mismatch.
Matrix multiply(const Matrix& a, const Matrix& b);

Matrix adjoint(const Matrix& a);

/// Trace of a square matrix; throws on non-square input.
Complex trace(const Matrix& a);

// Relative tolerance scale for accepting a matrix as Hermitian:
// defect <= kHermitianTol * (1 + ||A||_max).
inline constexpr double kHermitianTol = 1e-12;

// Default acceptance bound for ||U^dagger U - I||_max.
inline constexpr double kUnitaryTol = 1e-9;

/// A square complex matrix validated to be Hermitian at construction.
/// Entries are energies in units where hbar = 1 unless stated otherwise.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix a, double tol_scale = kHermitianTol);

  const Matrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Matrix mat_;
};

/// A square complex matrix validated to be unitary at construction.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(Matrix u, double tol = kUnitaryTol);

  const Matrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

  /// ||U^dagger U - I||_max measured on the stored matrix.
  double defect() const { return defect_; }

  static UnitaryOperator identity(Eigen::Index dim);

 private:
  Matrix mat_;
  double defect_ = 0.0;
};

/// Eigen-decomposition of a Hermitian operator with eigenvalues merged into
/// degenerate groups. Group g spans columns [offset(g), offset(g)+mult(g))
/// of basis(); the basis is fixed deterministically (Gram-Schmidt over the
/// group projector's columns in index order), so downstream per-eigenstate
/// quantities do not depend on eigensolver internals.
class SpectralDecomposition {
 public:
  SpectralDecomposition(std::vector<double> eigenvalues,
                        std::vector<int> multiplicities, Matrix basis);

  Eigen::Index dim() const { return basis_.rows(); }
  int groups() const { return static_cast<int>(eigenvalues_.size()); }

  /// Grouped eigenvalues, strictly increasing.
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<int>& multiplicities() const { return multiplicities_; }

  /// Orthonormal eigenbasis, columns ordered by group.
  const Matrix& basis() const { return basis_; }
  int offset(int group) const { return offsets_[group]; }

  /// Hermitian idempotent onto group g (built on demand).
  Matrix projector(int group) const;

  /// Eigenvalue attached to basis column k.
  double state_eigenvalue(int k) const;
  int group_of_state(int k) const;

  /// Sum_n eps_n Pi_n.
  Matrix reconstruct() const;

 private:
  std::vector<double> eigenvalues_;
  std::vector<int> multiplicities_;
  std::vector<int> offsets_;  // size groups()+1, offsets_.back() == dim
  Matrix basis_;
};

/// Decompose A, merging eigenvalues closer than group_tol into one subspace.
/// Default group_tol is 1e-9 * (eps_max - eps_min + 1); floating-point
/// eigensolvers split exact degeneracies, and the projector formulas need
/// whole subspaces. Postcondition: reconstruct() = A within 1e-10 * ||A||.
SpectralDecomposition eig_hermitian(
    const HermitianOperator& a,
    std::optional<double> group_tol = std::nullopt);

/// Sum_n exp(scale * eps_n) Pi_n. The largest Re(scale * eps_n) is factored
/// out before summing, so real scales up to |scale| * ||A|| <= 700 do not
/// overflow. Purely imaginary scales give a unitary result.
Matrix expm_hermitian(const SpectralDecomposition& spec, Complex scale);
Matrix expm_hermitian(const HermitianOperator& a, Complex scale);

}  // namespace qwork
