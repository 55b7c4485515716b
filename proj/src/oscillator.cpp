#include "qwork/oscillator.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qwork {

namespace {

constexpr double kQstarSlack = 1e-9;

void validate_spec(const OscillatorSpec& spec) {
  if (!(spec.omega0 > 0.0) || !(spec.omega_tau > 0.0))
    throw std::invalid_argument("oscillator frequencies must be positive");
  if (!(spec.beta > 0.0) || !(spec.hbar > 0.0) || !(spec.mass > 0.0))
    throw std::invalid_argument("beta, hbar, mass must be positive");
  if (spec.schedule.lambda_start() != spec.omega0 ||
      spec.schedule.lambda_end() != spec.omega_tau)
    throw std::invalid_argument(
        "schedule endpoints must match omega0 and omega_tau");
}

// Q* >= 1 analytically; integration may undershoot by a hair.
double validate_qstar(double q) {
  if (!(q >= 1.0 - kQstarSlack))
    throw std::invalid_argument("adiabaticity measure must be >= 1");
  return std::max(q, 1.0);
}

// ln sinh(x) for x > 0 without overflow.
double log_sinh(double x) {
  return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

double coth(double x) { return 1.0 / std::tanh(x); }

// State (X, X', Y, Y') of the two fundamental solutions of u'' = -w(t)^2 u.
using OdeState = std::array<double, 4>;

OdeState derivative(const OdeState& s, double w2) {
  return {s[1], -w2 * s[0], s[3], -w2 * s[2]};
}

struct OdeRun {
  OdeState final_state;
  double wronskian_drift;
};

OdeRun integrate(const DriveSchedule& schedule, int steps) {
  const double tau = schedule.duration();
  const double dt = tau / steps;
  // X(0) = 0, X'(0) = 1, Y(0) = 1, Y'(0) = 0; Wronskian X Y' - X' Y = -1.
  OdeState s{0.0, 1.0, 1.0, 0.0};
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    // Sudden schedules jump at t = 0+; the motion on (0, tau] sees the
    // post-jump frequency, so the first left sample takes the right limit.
    const double w_a =
        schedule.value(k == 0 ? std::nextafter(0.0, tau) : t);
    const double w_b = schedule.value(t + 0.5 * dt);
    const double w_c = schedule.value(std::min(t + dt, tau));
    const double w2_a = w_a * w_a;
    const double w2_b = w_b * w_b;
    const double w2_c = w_c * w_c;
    const OdeState k1 = derivative(s, w2_a);
    OdeState tmp;
    for (int i = 0; i < 4; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
    const OdeState k2 = derivative(tmp, w2_b);
    for (int i = 0; i < 4; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
    const OdeState k3 = derivative(tmp, w2_b);
    for (int i = 0; i < 4; ++i) tmp[i] = s[i] + dt * k3[i];
    const OdeState k4 = derivative(tmp, w2_c);
    for (int i = 0; i < 4; ++i)
      s[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  const double wronskian = s[0] * s[3] - s[1] * s[2];
  return OdeRun{s, std::abs(wronskian + 1.0)};
}

double qstar_of_state(const OdeState& s, double omega0, double omega_tau) {
  const double w0_2 = omega0 * omega0;
  const double wt_2 = omega_tau * omega_tau;
  return (w0_2 * (wt_2 * s[0] * s[0] + s[1] * s[1]) +
          (wt_2 * s[2] * s[2] + s[3] * s[3])) /
         (2.0 * omega0 * omega_tau);
}

}  // namespace

OscillatorSpec make_oscillator_spec(double omega0, double omega_tau,
                                    double beta, double hbar, double mass,
                                    ScheduleShape shape, double tau) {
  DriveSchedule schedule = [&] {
    switch (shape) {
      case ScheduleShape::Constant:
        if (omega0 != omega_tau)
          throw std::invalid_argument(
              "constant schedule needs equal frequencies");
        return DriveSchedule::constant(omega0, tau);
      case ScheduleShape::Linear:
        return DriveSchedule::linear(omega0, omega_tau, tau);
      case ScheduleShape::Smoothstep:
        return DriveSchedule::smoothstep(omega0, omega_tau, tau);
      case ScheduleShape::Sudden:
        return DriveSchedule::sudden(omega0, omega_tau, tau);
      case ScheduleShape::Tabulated:
        throw std::invalid_argument(
            "tabulated schedules are built explicitly, not from a shape tag");
    }
    throw std::logic_error("unreachable schedule shape");
  }();
  OscillatorSpec spec{omega0, omega_tau, beta, hbar, mass,
                      std::move(schedule)};
  validate_spec(spec);
  return spec;
}

AdiabaticityMeasure qstar_from_dynamics(const OscillatorSpec& spec,
                                        int start_steps, int max_doublings) {
  validate_spec(spec);
  if (start_steps < 100)
    throw std::invalid_argument("need at least 100 integration steps");
  int steps = start_steps;
  OdeRun run = integrate(spec.schedule, steps);
  double q = qstar_of_state(run.final_state, spec.omega0, spec.omega_tau);
  for (int round = 0; round < max_doublings; ++round) {
    const int fine_steps = steps * 2;
    const OdeRun fine = integrate(spec.schedule, fine_steps);
    const double q_fine =
        qstar_of_state(fine.final_state, spec.omega0, spec.omega_tau);
    const bool accepted = std::abs(q_fine - q) <= 1e-10 * std::max(1.0, std::abs(q_fine));
    steps = fine_steps;
    run = fine;
    q = q_fine;
    if (accepted)
      return AdiabaticityMeasure{q, true, steps, run.wronskian_drift};
  }
  return AdiabaticityMeasure{q, false, steps, run.wronskian_drift};
}

double avg_work(const OscillatorSpec& spec, double q_star) {
  validate_spec(spec);
  const double q = validate_qstar(q_star);
  return 0.5 * spec.hbar * (q * spec.omega_tau - spec.omega0) *
         coth(0.5 * spec.beta * spec.hbar * spec.omega0);
}

double delta_f(const OscillatorSpec& spec) {
  validate_spec(spec);
  return (log_sinh(0.5 * spec.beta * spec.hbar * spec.omega_tau) -
          log_sinh(0.5 * spec.beta * spec.hbar * spec.omega0)) /
         spec.beta;
}

double pseudo_partition(const OscillatorSpec& spec, double q_star) {
  validate_spec(spec);
  const double q = validate_qstar(q_star);
  return std::exp(-std::log(2.0) -
                  log_sinh(0.5 * spec.beta * q * spec.hbar * spec.omega_tau));
}

double rel_entropy_analytic(const OscillatorSpec& spec, double q_star) {
  validate_spec(spec);
  const double q = validate_qstar(q_star);
  const double a = 0.5 * spec.beta * q * spec.hbar * spec.omega_tau;
  const double b = 0.5 * spec.beta * spec.hbar * spec.omega_tau;
  return log_sinh(a) - log_sinh(b);
}

double mean_occupation(int n0, double q_star) {
  if (n0 < 0) throw std::invalid_argument("level index must be nonnegative");
  const double q = validate_qstar(q_star);
  return (n0 + 0.5) * q - 0.5;
}

std::vector<SweepRow> sweep_qstar(const OscillatorSpec& spec,
                                  const std::vector<double>& qstar_grid) {
  validate_spec(spec);
  std::vector<SweepRow> rows;
  rows.reserve(qstar_grid.size());
  const double beta_df = spec.beta * delta_f(spec);
  for (double q : qstar_grid) {
    const double beta_w = spec.beta * avg_work(spec, q);
    const double s = rel_entropy_analytic(spec, q);
    rows.push_back({q, beta_w, beta_df, beta_df + s});
  }
  return rows;
}

std::vector<SweepRow> sweep_tau(const OscillatorSpec& spec,
                                const std::vector<double>& tau_grid) {
  validate_spec(spec);
  std::vector<SweepRow> rows;
  rows.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    OscillatorSpec scaled = spec;
    scaled.schedule = spec.schedule.with_duration(tau);
    const AdiabaticityMeasure q = qstar_from_dynamics(scaled);
    const double beta_w = spec.beta * avg_work(spec, q.q_star);
    const double beta_df = spec.beta * delta_f(spec);
    const double s = rel_entropy_analytic(spec, q.q_star);
    rows.push_back({q.q_star, beta_w, beta_df, beta_df + s});
  }
  return rows;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    grid[std::size_t(i)] = lo + (hi - lo) * double(i) / double(n - 1);
  grid.back() = hi;
  return grid;
}

}  // namespace qwork
