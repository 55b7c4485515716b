#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qwork/propagation.hpp"

using namespace qwork;

namespace {

HamiltonianModel constant_model(const Matrix& h) {
  return HamiltonianModel::custom({{0.0, h}});
}

}  // namespace

TEST_CASE("constant Hamiltonian accumulates the exact phase") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 1.0;
  PropagatorResult r = propagate(constant_model(h),
                                 DriveSchedule::constant(0.0, M_PI), 64, 1.0);
  // exp(-i pi diag(0,1)) = diag(1, -1) regardless of step count.
  Matrix want = Matrix::Identity(2, 2);
  want(1, 1) = -1.0;
  CHECK(max_norm(r.u.mat() - want) < 1e-12);
  CHECK(r.defect_ok);
  CHECK(r.steps == 64);
  CHECK(r.hbar == 1.0);
}

TEST_CASE("hbar rescales the accumulated phase") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 1.0;
  PropagatorResult r = propagate(constant_model(h),
                                 DriveSchedule::constant(0.0, M_PI), 16, 0.5);
  // Phase doubles when hbar halves: exp(-i 2pi) = identity.
  CHECK(max_norm(r.u.mat() - Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("sudden schedules reduce to a single exponential") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(3, 3), b(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      a(r, c) = Complex(gauss(rng), gauss(rng));
      b(r, c) = Complex(gauss(rng), gauss(rng));
    }
  Matrix h0 = 0.5 * (a + Matrix(a.adjoint()));
  Matrix h1 = 0.5 * (b + Matrix(b.adjoint()));
  HamiltonianModel model = HamiltonianModel::custom({{0.0, h0}, {1.0, h1}});
  const double tau = 0.8;
  PropagatorResult r = propagate(
      model, DriveSchedule::sudden(0.0, 1.0, tau), 37, 1.0);
  const Matrix direct =
      expm_hermitian(HermitianOperator(h1), Complex(0.0, -tau));
  CHECK(max_norm(r.u.mat() - direct) < 1e-11);
  CHECK(max_norm(r.u.mat() - oracles::series_expm(h1, Complex(0.0, -tau))) <
        1e-10);
}

TEST_CASE("midpoint rule converges at second order") {
  HamiltonianModel model = HamiltonianModel::two_level(1.0);
  DriveSchedule ramp = DriveSchedule::linear(0.0, 2.0, 1.0);
  const Matrix ref = propagate(model, ramp, 8192, 1.0).u.mat();
  const double e256 = max_norm(propagate(model, ramp, 256, 1.0).u.mat() - ref);
  const double e512 = max_norm(propagate(model, ramp, 512, 1.0).u.mat() - ref);
  CHECK(e512 < e256);
  CHECK(e256 / e512 > 3.0);   // Richardson ratio for a second-order rule
  CHECK(e256 / e512 < 5.5);
}

TEST_CASE("auto stepping reports convergence") {
  HamiltonianModel model = HamiltonianModel::two_level(1.0);
  DriveSchedule ramp = DriveSchedule::smoothstep(0.0, 2.0, 1.0);
  PropagatorResult r = propagate_auto(model, ramp, 1.0, 1e-8, 64, 8);
  CHECK(r.converged);
  CHECK(r.steps > 64);
  CHECK(r.defect_ok);
  const Matrix ref = propagate(model, ramp, 16384, 1.0).u.mat();
  CHECK(max_norm(r.u.mat() - ref) < 1e-6);
}

TEST_CASE("propagator stays unitary over many steps") {
  HamiltonianModel model = HamiltonianModel::two_level(0.7);
  DriveSchedule ramp = DriveSchedule::smoothstep(-1.0, 1.5, 2.0);
  PropagatorResult r = propagate(model, ramp, 5000, 1.0);
  CHECK(r.unitarity_defect <= 1e-12);
  CHECK(r.defect_ok);
}

TEST_CASE("state evolution preserves norm and trace") {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 1) = Complex(0.0, -0.5);
  h(1, 0) = Complex(0.0, 0.5);
  PropagatorResult r = propagate(constant_model(h),
                                 DriveSchedule::constant(0.0, 1.3), 200, 1.0);
  Vector psi(2);
  psi << Complex(1.0, 0.0), Complex(0.0, 0.0);
  const Vector evolved = evolve_state(psi, r.u);
  CHECK(evolved.norm() == doctest::Approx(1.0).epsilon(1e-12));

  DensityMatrix rho = DensityMatrix::pure(psi);
  const DensityMatrix rho_out = evolve_state(rho, r.u);
  CHECK(std::abs(trace(rho_out.mat()).real() - 1.0) < 1e-12);

  Vector wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(evolve_state(wrong, r.u), std::invalid_argument);
}

TEST_CASE("invalid stepping parameters are rejected") {
  HamiltonianModel model = HamiltonianModel::two_level(1.0);
  DriveSchedule ramp = DriveSchedule::linear(0.0, 1.0, 1.0);
  CHECK_THROWS_AS(propagate(model, ramp, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(propagate(model, ramp, 10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(propagate(model, ramp, 10, -1.0), std::invalid_argument);
}
