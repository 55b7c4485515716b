#include "qwork/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qwork {

namespace {

constexpr double kNullEigenvalue = 1e-14;
constexpr double kNullWeightTol = 1e-12;

}  // namespace

DensityMatrix::DensityMatrix(Matrix rho, double tol) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols())
    throw std::invalid_argument("density matrix must be square");
  if (!all_finite(rho_))
    throw std::invalid_argument("density matrix has non-finite entries");
  const double herm = hermiticity_defect(rho_);
  if (herm > tol * (1.0 + max_norm(rho_)))
    throw std::invalid_argument("density matrix is not Hermitian, defect " +
                                std::to_string(herm));
  rho_ = 0.5 * (rho_ + Matrix(rho_.adjoint()));  // symmetrize roundoff away
  const double tr_dev = std::abs(trace(rho_) - Complex(1.0, 0.0));
  if (tr_dev > tol)
    throw std::invalid_argument("density matrix trace deviates by " +
                                std::to_string(tr_dev));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_,
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("density matrix eigensolve failed");
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol)
    throw std::invalid_argument("density matrix has eigenvalue " +
                                std::to_string(min_eig));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double n = psi.norm();
  if (!(std::abs(n - 1.0) <= 1e-10))
    throw std::invalid_argument("pure state must be normalized");
  return DensityMatrix(psi * psi.adjoint());
}

ThermalEnsemble gibbs(const HermitianOperator& h, double beta) {
  return gibbs(eig_hermitian(h), beta);
}

ThermalEnsemble gibbs(const SpectralDecomposition& spec, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("inverse temperature must be positive");
  const Eigen::Index dim = spec.dim();
  // Shift by the ground-state energy first: exp(-beta(e - e_min)) <= 1, so
  // the sum is overflow-free and log Z comes out exactly.
  const double e_min = spec.eigenvalues().front();
  double shifted_sum = 0.0;
  std::vector<double> weights(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    weights[std::size_t(k)] =
        std::exp(-beta * (spec.state_eigenvalue(k) - e_min));
    shifted_sum += weights[std::size_t(k)];
  }
  const double log_z = -beta * e_min + std::log(shifted_sum);
  std::vector<double> occupations(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k)
    occupations[std::size_t(k)] = weights[std::size_t(k)] / shifted_sum;
  Matrix rho = spec.basis() *
               Eigen::Map<const Eigen::VectorXd>(occupations.data(), dim)
                   .asDiagonal() *
               spec.basis().adjoint();
  return ThermalEnsemble{beta,
                         spec,
                         std::exp(log_z),
                         log_z,
                         std::move(occupations),
                         DensityMatrix(std::move(rho))};
}

double free_energy(double z, double beta) {
  if (!(z > 0.0)) throw std::invalid_argument("partition function must be positive");
  return free_energy_from_log(std::log(z), beta);
}

double free_energy_from_log(double log_z, double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("inverse temperature must be positive");
  return -log_z / beta;
}

double vn_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.mat(),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("entropy eigensolve failed");
  double s = 0.0;
  for (Eigen::Index k = 0; k < rho.dim(); ++k) {
    const double mu = solver.eigenvalues()[k];
    if (mu > 0.0) s -= mu * std::log(mu);
  }
  return std::clamp(s, 0.0, std::log(double(rho.dim())));
}

DensityMatrix dephase(const DensityMatrix& rho,
                      const SpectralDecomposition& spec) {
  if (rho.dim() != spec.dim())
    throw std::invalid_argument("dephasing basis dimension mismatch");
  Matrix block = spec.basis().adjoint() * rho.mat() * spec.basis();
  // Zero every matrix element connecting distinct eigenvalue groups.
  for (int g = 0; g < spec.groups(); ++g) {
    for (int h = 0; h < spec.groups(); ++h) {
      if (g == h) continue;
      block.block(spec.offset(g), spec.offset(h), spec.multiplicities()[g],
                  spec.multiplicities()[h])
          .setZero();
    }
  }
  return DensityMatrix(spec.basis() * block * spec.basis().adjoint());
}

double measurement_entropy_change(const DensityMatrix& rho,
                                  const SpectralDecomposition& spec) {
  return vn_entropy(dephase(rho, spec)) - vn_entropy(rho);
}

double relative_entropy(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("relative entropy dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> ea(a.mat(), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> eb(b.mat());
  if (ea.info() != Eigen::Success || eb.info() != Eigen::Success)
    throw std::runtime_error("relative entropy eigensolve failed");
  double tr_a_ln_a = 0.0;
  for (Eigen::Index k = 0; k < a.dim(); ++k) {
    const double mu = ea.eigenvalues()[k];
    if (mu > 0.0) tr_a_ln_a += mu * std::log(mu);
  }
  // q_j = <w_j| a |w_j> in b's eigenbasis; weight on b's null space decides
  // between a finite value and +infinity.
  const Matrix aw = a.mat() * eb.eigenvectors();
  double tr_a_ln_b = 0.0;
  double null_weight = 0.0;
  for (Eigen::Index j = 0; j < b.dim(); ++j) {
    const double q = eb.eigenvectors().col(j).dot(aw.col(j)).real();
    const double nu = eb.eigenvalues()[j];
    if (nu <= kNullEigenvalue) {
      null_weight += std::max(q, 0.0);
    } else {
      tr_a_ln_b += q * std::log(nu);
    }
  }
  if (null_weight > kNullWeightTol)
    return std::numeric_limits<double>::infinity();
  return tr_a_ln_a - tr_a_ln_b;
}

}  // namespace qwork
