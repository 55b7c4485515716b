// Density matrices, Gibbs states, entropies, and projective dephasing.

#pragma once

#include <optional>
#include <vector>

#include "qwork/linalg.hpp"

namespace qwork {

inline constexpr double kDensityTol = 1e-10;

/// Positive semidefinite, unit-trace, Hermitian matrix. Validation allows
/// eigenvalues down to -1e-10 and trace deviations up to 1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho, double tol = kDensityTol);

  /// Projector onto a normalized pure state.
  static DensityMatrix pure(const Vector& psi);

  const Matrix& mat() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  Matrix rho_;
};

/// Canonical ensemble exp(-beta H)/Z together with the quantities repeatedly
/// needed downstream. occupations holds one probability per eigenstate
/// (group members share theirs); log_z is kept so that ratios of partition
/// functions can be formed without overflow.
struct ThermalEnsemble {
  double beta;
  SpectralDecomposition spectrum;
  double z;
  double log_z;
  std::vector<double> occupations;  // size spectrum.dim()
  DensityMatrix rho;
};

ThermalEnsemble gibbs(const HermitianOperator& h, double beta);

/// Variant reusing a decomposition already at hand; the eigenvalues feeding
/// Z and the occupations are then bitwise those of the caller's spectrum.
ThermalEnsemble gibbs(const SpectralDecomposition& spec, double beta);

/// F = -ln(Z)/beta.
double free_energy(double z, double beta);
double free_energy_from_log(double log_z, double beta);

/// von Neumann entropy -tr(rho ln rho), clamped to [0, ln dim].
double vn_entropy(const DensityMatrix& rho);

/// Projective measurement of the observable described by spec, outcome
/// discarded: rho -> sum_g P_g rho P_g. Leaves the diagonal blocks of rho in
/// the measurement eigenbasis and zeroes the rest; commutes with functions
/// of the measured observable, so tr(rho H) is preserved.
DensityMatrix dephase(const DensityMatrix& rho,
                      const SpectralDecomposition& spec);

/// Entropy gained by dephasing, H(rho^M) - H(rho). Nonnegative up to
/// numerical error.
double measurement_entropy_change(const DensityMatrix& rho,
                                  const SpectralDecomposition& spec);

/// Quantum relative entropy S(a || b) = tr(a ln a) - tr(a ln b). Eigenvalues
/// of b below 1e-14 count as zero; if a puts more than 1e-12 weight on that
/// null space the result is +infinity.
double relative_entropy(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qwork
