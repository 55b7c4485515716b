#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qwork/hamiltonian.hpp"
#include "qwork/thermo.hpp"

using namespace qwork;

namespace {

Matrix random_hermitian_local(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = Complex(gauss(rng), gauss(rng));
  return 0.5 * (a + Matrix(a.adjoint()));
}

DensityMatrix random_density_local(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
  Matrix rho = g * g.adjoint();
  rho /= trace(rho).real();
  return DensityMatrix(rho);
}

}  // namespace

TEST_CASE("density matrix validation") {
  Matrix ok = Matrix::Zero(2, 2);
  ok(0, 0) = 0.25;
  ok(1, 1) = 0.75;
  CHECK_NOTHROW(DensityMatrix{ok});

  Matrix bad_trace = 2.0 * ok;
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, std::invalid_argument);

  Matrix indefinite = Matrix::Zero(2, 2);
  indefinite(0, 0) = 1.1;
  indefinite(1, 1) = -0.1;
  CHECK_THROWS_AS(DensityMatrix{indefinite}, std::invalid_argument);

  Matrix skew = ok;
  skew(0, 1) = Complex(0.1, 0.0);  // missing conjugate partner
  CHECK_THROWS_AS(DensityMatrix{skew}, std::invalid_argument);

  Vector psi(2);
  psi << Complex(0.6, 0.0), Complex(0.0, 0.8);
  DensityMatrix pure = DensityMatrix::pure(psi);
  CHECK(std::abs(pure.mat()(0, 0).real() - 0.36) < 1e-15);
  CHECK(std::abs(pure.mat()(1, 1).real() - 0.64) < 1e-15);
}

TEST_CASE("two-level Gibbs weights match the logistic form") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 1.0;
  const double beta = 1.0;
  ThermalEnsemble ens = gibbs(HermitianOperator(h), beta);
  const double z = 1.0 + std::exp(-1.0);
  CHECK(ens.z == doctest::Approx(z).epsilon(1e-14));
  CHECK(ens.log_z == doctest::Approx(std::log(z)).epsilon(1e-14));
  CHECK(ens.occupations[0] == doctest::Approx(1.0 / z).epsilon(1e-14));
  CHECK(ens.occupations[1] ==
        doctest::Approx(std::exp(-1.0) / z).epsilon(1e-14));
  CHECK(std::abs(ens.rho.mat()(0, 1)) < 1e-15);
  CHECK(free_energy(ens.z, beta) ==
        doctest::Approx(-std::log(z)).epsilon(1e-14));
  CHECK(free_energy_from_log(ens.log_z, beta) ==
        doctest::Approx(-std::log(z)).epsilon(1e-14));
}

TEST_CASE("Gibbs construction survives large spectral offsets") {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 700.0;
  h(1, 1) = 701.0;
  ThermalEnsemble ens = gibbs(HermitianOperator(h), 1.0);
  // Populations depend only on gaps; the naive exp(-beta*700) underflows.
  const double z = 1.0 + std::exp(-1.0);
  CHECK(ens.occupations[0] == doctest::Approx(1.0 / z).epsilon(1e-14));
  CHECK(ens.log_z == doctest::Approx(-700.0 + std::log(z)).epsilon(1e-13));
}

TEST_CASE("truncated ladder partition function approaches the closed form") {
  // [DERIVED] sum_{n>=0} exp(-(n+1/2)) = 0.95951737566747186 at beta=1.
  HamiltonianModel model =
      HamiltonianModel::parametric_oscillator(1.0, 100, 1.0, 1.0);
  ThermalEnsemble ens = gibbs(model.evaluate(1.0), 1.0);
  CHECK(std::abs(ens.z - 0.95951737566747186) < 1e-6);
}

TEST_CASE("gibbs rejects nonpositive temperature parameters") {
  Matrix h = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(gibbs(HermitianOperator(h), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gibbs(HermitianOperator(h), -2.0), std::invalid_argument);
  CHECK_THROWS_AS(free_energy(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(free_energy(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("von Neumann entropy reference values") {
  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK(vn_entropy(DensityMatrix(pure)) == doctest::Approx(0.0).epsilon(1e-12));

  Matrix mixed = 0.5 * Matrix::Identity(2, 2);
  CHECK(vn_entropy(DensityMatrix(mixed)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-13));

  // [DERIVED] -(0.25 ln 0.25 + 0.75 ln 0.75) = 0.56233514461880835.
  Matrix skewed = Matrix::Zero(2, 2);
  skewed(0, 0) = 0.25;
  skewed(1, 1) = 0.75;
  CHECK(std::abs(vn_entropy(DensityMatrix(skewed)) - 0.56233514461880835) <
        1e-13);
}

TEST_CASE("dephasing zeroes cross-sector coherences and is idempotent") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 1.0;
  SpectralDecomposition spec = eig_hermitian(HermitianOperator(h));

  Vector psi(2);
  psi << Complex(std::sqrt(0.3), 0.0), Complex(0.0, std::sqrt(0.7));
  DensityMatrix rho = DensityMatrix::pure(psi);
  DensityMatrix deph = dephase(rho, spec);
  CHECK(std::abs(deph.mat()(0, 1)) < 1e-15);
  CHECK(deph.mat()(0, 0).real() == doctest::Approx(0.3).epsilon(1e-13));
  DensityMatrix twice = dephase(deph, spec);
  CHECK(max_norm(twice.mat() - deph.mat()) < 1e-14);
}

TEST_CASE("dephasing keeps coherence inside a degenerate sector") {
  Matrix h = Matrix::Zero(3, 3);
  h(2, 2) = 2.0;  // levels 0,1 share an eigenvalue
  SpectralDecomposition spec = eig_hermitian(HermitianOperator(h));
  REQUIRE(spec.groups() == 2);

  Vector psi(3);
  psi << Complex(std::sqrt(0.5), 0.0), Complex(std::sqrt(0.3), 0.0),
      Complex(std::sqrt(0.2), 0.0);
  DensityMatrix rho = DensityMatrix::pure(psi);
  DensityMatrix deph = dephase(rho, spec);
  CHECK(std::abs(deph.mat()(0, 1)) > 0.1);  // intra-sector block survives
  CHECK(std::abs(deph.mat()(0, 2)) < 1e-14);
  CHECK(std::abs(deph.mat()(1, 2)) < 1e-14);
}

TEST_CASE("dephasing preserves the measured observable's mean") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dims(2, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = dims(rng);
    HermitianOperator h(random_hermitian_local(rng, dim));
    SpectralDecomposition spec = eig_hermitian(h);
    DensityMatrix rho = random_density_local(rng, dim);
    DensityMatrix deph = dephase(rho, spec);
    const double before = trace(h.mat() * rho.mat()).real();
    const double after = trace(h.mat() * deph.mat()).real();
    CHECK(std::abs(before - after) < 1e-12);
  }
}

TEST_CASE("measurement can only raise entropy") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dims(2, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = dims(rng);
    SpectralDecomposition spec =
        eig_hermitian(HermitianOperator(random_hermitian_local(rng, dim)));
    DensityMatrix rho = random_density_local(rng, dim);
    CHECK(measurement_entropy_change(rho, spec) >= -1e-10);
  }
}

TEST_CASE("measurement entropy change vanishes for commuting states") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 1.0;
  SpectralDecomposition spec = eig_hermitian(HermitianOperator(h));
  ThermalEnsemble ens = gibbs(spec, 0.9);
  CHECK(std::abs(measurement_entropy_change(ens.rho, spec)) < 1e-12);
}

TEST_CASE("relative entropy reference values") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  Matrix half = 0.5 * Matrix::Identity(2, 2);
  DensityMatrix pure(a), mixed(half);

  CHECK(std::abs(relative_entropy(mixed, mixed)) < 1e-12);
  // [DERIVED] S(|0><0| || I/2) = ln 2 = 0.69314718055994531.
  CHECK(std::abs(relative_entropy(pure, mixed) - 0.69314718055994531) < 1e-12);
  // Support of the second argument misses half the first: divergent.
  CHECK(std::isinf(relative_entropy(mixed, pure)));
}

TEST_CASE("relative entropy is nonnegative and detects Gibbs states") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> dims(2, 6);
  std::uniform_real_distribution<double> betas(0.2, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = dims(rng);
    HermitianOperator h(random_hermitian_local(rng, dim));
    ThermalEnsemble ens = gibbs(h, betas(rng));
    DensityMatrix rho = random_density_local(rng, dim);
    const double s = relative_entropy(rho, ens.rho);
    CHECK(s >= -1e-10);
    // Klein identity: S(rho||gibbs) = beta(F(rho) - F_eq) in nats.
    const double f_rho = trace(h.mat() * rho.mat()).real() -
                         vn_entropy(rho) / ens.beta;
    const double f_eq = free_energy_from_log(ens.log_z, ens.beta);
    // Re-diagonalizing the Gibbs state recovers its smallest eigenvalue only
    // to absolute roundoff, and rho puts O(1) weight there, so the log side
    // carries an error of order eps / min_occ on cold draws.
    const double min_occ =
        *std::min_element(ens.occupations.begin(), ens.occupations.end());
    const double tol = 1e-10 * (1.0 + s) + 1e-13 / min_occ;
    CHECK(std::abs(s - ens.beta * (f_rho - f_eq)) < tol);
  }
}
