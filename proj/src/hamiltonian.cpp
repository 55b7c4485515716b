#include "qwork/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qwork {

namespace {

double smoothstep01(double s) { return s * s * (3.0 - 2.0 * s); }

// Truncated lowering operator a on n levels: a|k> = sqrt(k)|k-1>.
Matrix lowering(int n) {
  Matrix a = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

}  // namespace

DriveSchedule::DriveSchedule(ScheduleShape shape, double lambda0,
                             double lambda1, double tau)
    : shape_(shape), lambda0_(lambda0), lambda1_(lambda1), tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("schedule duration must be positive");
  if (!std::isfinite(lambda0) || !std::isfinite(lambda1))
    throw std::invalid_argument("schedule endpoints must be finite");
}

DriveSchedule DriveSchedule::constant(double lambda, double tau) {
  return DriveSchedule(ScheduleShape::Constant, lambda, lambda, tau);
}

DriveSchedule DriveSchedule::linear(double lambda0, double lambda1,
                                    double tau) {
  return DriveSchedule(ScheduleShape::Linear, lambda0, lambda1, tau);
}

DriveSchedule DriveSchedule::smoothstep(double lambda0, double lambda1,
                                        double tau) {
  return DriveSchedule(ScheduleShape::Smoothstep, lambda0, lambda1, tau);
}

DriveSchedule DriveSchedule::sudden(double lambda0, double lambda1,
                                    double tau) {
  return DriveSchedule(ScheduleShape::Sudden, lambda0, lambda1, tau);
}

DriveSchedule DriveSchedule::tabulated(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2)
    throw std::invalid_argument("tabulated schedule needs at least two knots");
  if (knots.front().first != 0.0)
    throw std::invalid_argument("tabulated schedule must start at t = 0");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i].first < knots[i + 1].first))
      throw std::invalid_argument(
          "tabulated schedule times must be strictly increasing");
  }
  for (const auto& [t, v] : knots) {
    if (!std::isfinite(t) || !std::isfinite(v))
      throw std::invalid_argument("tabulated schedule entries must be finite");
  }
  DriveSchedule s(ScheduleShape::Tabulated, knots.front().second,
                  knots.back().second, knots.back().first);
  s.knots_ = std::move(knots);
  return s;
}

double DriveSchedule::value(double t) const {
  const double slack = 1e-12 * (1.0 + tau_);
  if (t < -slack || t > tau_ + slack)
    throw std::out_of_range("schedule evaluated outside [0, tau]");
  t = std::clamp(t, 0.0, tau_);
  // Endpoints are hit exactly for every shape; interpolation forms would
  // otherwise miss lambda_tau by rounding.
  if (t == 0.0) return lambda0_;
  if (t == tau_) return lambda1_;
  switch (shape_) {
    case ScheduleShape::Constant:
      return lambda0_;
    case ScheduleShape::Linear:
      return lambda0_ + (lambda1_ - lambda0_) * (t / tau_);
    case ScheduleShape::Smoothstep:
      return lambda0_ + (lambda1_ - lambda0_) * smoothstep01(t / tau_);
    case ScheduleShape::Sudden:
      return t > 0.0 ? lambda1_ : lambda0_;
    case ScheduleShape::Tabulated: {
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), t,
          [](double lhs, const std::pair<double, double>& k) {
            return lhs < k.first;
          });
      if (it == knots_.begin()) return knots_.front().second;
      if (it == knots_.end()) return knots_.back().second;
      const auto& [t1, v1] = *it;
      const auto& [t0, v0] = *(it - 1);
      const double s = (t - t0) / (t1 - t0);
      return v0 + (v1 - v0) * s;
    }
  }
  throw std::logic_error("unreachable schedule shape");
}

DriveSchedule DriveSchedule::with_duration(double tau) const {
  if (shape_ != ScheduleShape::Tabulated)
    return DriveSchedule(shape_, lambda0_, lambda1_, tau);
  if (!(tau > 0.0))
    throw std::invalid_argument("schedule duration must be positive");
  std::vector<std::pair<double, double>> scaled = knots_;
  const double ratio = tau / tau_;
  for (auto& [t, v] : scaled) t *= ratio;
  scaled.back().first = tau;  // closes rounding on the last knot
  return tabulated(std::move(scaled));
}

FockOperators fock_operators(int n_trunc, double mass, double hbar,
                             double omega_ref) {
  if (n_trunc < 2) throw std::invalid_argument("need at least two Fock levels");
  if (!(mass > 0.0) || !(hbar > 0.0) || !(omega_ref > 0.0))
    throw std::invalid_argument("mass, hbar, omega_ref must be positive");
  const Matrix a = lowering(n_trunc);
  const Matrix ad = a.adjoint();
  FockOperators ops;
  ops.x = std::sqrt(hbar / (2.0 * mass * omega_ref)) * (a + ad);
  ops.p = Complex(0.0, 1.0) * std::sqrt(hbar * mass * omega_ref / 2.0) *
          (ad - a);
  return ops;
}

HamiltonianModel::HamiltonianModel(Kind kind, Eigen::Index dim)
    : kind_(std::move(kind)), dim_(dim) {}

HamiltonianModel HamiltonianModel::two_level(double delta, DriveAxis axis) {
  if (!std::isfinite(delta))
    throw std::invalid_argument("two-level gap must be finite");
  return HamiltonianModel(TwoLevel{delta, axis}, 2);
}

HamiltonianModel HamiltonianModel::parametric_oscillator(double mass,
                                                         int n_trunc,
                                                         double hbar,
                                                         double omega_ref) {
  if (n_trunc < 2) throw std::invalid_argument("need at least two Fock levels");
  if (!(mass > 0.0) || !(hbar > 0.0) || !(omega_ref > 0.0))
    throw std::invalid_argument("mass, hbar, omega_ref must be positive");
  // Squares are formed on a two-level-padded ladder and then cut back, so
  // every kept matrix element of x^2 and p^2 is the exact Fock-basis value
  // rather than the square of the truncated operator.
  const int padded = n_trunc + 2;
  const Matrix a = lowering(padded);
  const Matrix ad = a.adjoint();
  const Matrix plus = (a + ad) * (a + ad);    // x^2 up to hbar/2 m omega
  const Matrix minus = -(ad - a) * (ad - a);  // p^2 up to hbar m omega / 2
  ParametricOscillator po;
  po.mass = mass;
  po.hbar = hbar;
  po.omega_ref = omega_ref;
  po.kinetic =
      (hbar * omega_ref / 4.0) * minus.topLeftCorner(n_trunc, n_trunc);
  po.potential =
      (hbar / (4.0 * omega_ref)) * plus.topLeftCorner(n_trunc, n_trunc);
  return HamiltonianModel(std::move(po), n_trunc);
}

HamiltonianModel HamiltonianModel::custom(
    std::vector<std::pair<double, Matrix>> table) {
  if (table.empty())
    throw std::invalid_argument("custom model needs at least one knot");
  std::sort(table.begin(), table.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  Custom c;
  const Eigen::Index dim = table.front().second.rows();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i > 0 && !(table[i - 1].first < table[i].first))
      throw std::invalid_argument("custom model knots must be distinct");
    if (table[i].second.rows() != dim || table[i].second.cols() != dim)
      throw std::invalid_argument("custom model knots must share a dimension");
    HermitianOperator checked(table[i].second);  // validates hermiticity
    c.lambdas.push_back(table[i].first);
    c.matrices.push_back(checked.mat());
  }
  return HamiltonianModel(std::move(c), dim);
}

HermitianOperator HamiltonianModel::evaluate(double lambda) const {
  if (!std::isfinite(lambda))
    throw std::invalid_argument("control parameter must be finite");
  if (const auto* tl = std::get_if<TwoLevel>(&kind_)) {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = -0.5 * lambda;
    h(1, 1) = 0.5 * lambda;
    if (tl->axis == DriveAxis::X) {
      h(0, 1) += 0.5 * tl->delta;
      h(1, 0) += 0.5 * tl->delta;
    } else {
      h(0, 1) += Complex(0.0, -0.5 * tl->delta);
      h(1, 0) += Complex(0.0, 0.5 * tl->delta);
    }
    return HermitianOperator(std::move(h));
  }
  if (const auto* po = std::get_if<ParametricOscillator>(&kind_)) {
    if (!(lambda > 0.0))
      throw std::invalid_argument("oscillator frequency must be positive");
    return HermitianOperator(po->kinetic + (lambda * lambda) * po->potential);
  }
  const auto& c = std::get<Custom>(kind_);
  const double span = c.lambdas.back() - c.lambdas.front();
  const double slack = 1e-12 * (1.0 + std::abs(span));
  if (lambda < c.lambdas.front() - slack || lambda > c.lambdas.back() + slack)
    throw std::out_of_range("control parameter outside the tabulated range");
  lambda = std::clamp(lambda, c.lambdas.front(), c.lambdas.back());
  auto it = std::upper_bound(c.lambdas.begin(), c.lambdas.end(), lambda);
  if (it == c.lambdas.begin()) return HermitianOperator(c.matrices.front());
  if (it == c.lambdas.end()) return HermitianOperator(c.matrices.back());
  const std::size_t hi = std::size_t(it - c.lambdas.begin());
  const std::size_t lo = hi - 1;
  const double s = (lambda - c.lambdas[lo]) / (c.lambdas[hi] - c.lambdas[lo]);
  return HermitianOperator((1.0 - s) * c.matrices[lo] + s * c.matrices[hi]);
}

}  // namespace qwork
