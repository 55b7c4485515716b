// Closed-form thermodynamics of the driven harmonic oscillator with
// time-dependent frequency, parametrized by the adiabaticity measure Q*.

#pragma once

#include <vector>

#include "qwork/hamiltonian.hpp"

namespace qwork {

struct OscillatorSpec {
  double omega0;
  double omega_tau;
  double beta;
  double hbar;
  double mass;
  DriveSchedule schedule;  // drives omega(t); endpoints match omega0/omega_tau
};

OscillatorSpec make_oscillator_spec(double omega0, double omega_tau,
                                    double beta, double hbar, double mass,
                                    ScheduleShape shape, double tau);

/// Q* extracted from the classical equation of motion u'' = -omega(t)^2 u.
struct AdiabaticityMeasure {
  double q_star;
  bool converged;
  int steps_used;
  double wronskian_drift;  // |W(tau) - W(0)| of the two fundamental solutions
};

/// Fixed-step RK4 on the fundamental system, step count doubled until Q*
/// moves by less than 1e-10. Q* >= 1 up to integration error; exactly 1 for
/// a constant frequency and (omega0^2 + omega_tau^2)/(2 omega0 omega_tau)
/// in the sudden limit.
AdiabaticityMeasure qstar_from_dynamics(const OscillatorSpec& spec,
                                        int start_steps = 1024,
                                        int max_doublings = 12);

/// <W> = (hbar/2) (Q* omega_tau - omega0) coth(beta hbar omega0 / 2).
double avg_work(const OscillatorSpec& spec, double q_star);

/// dF = ln(sinh(beta hbar omega_tau/2) / sinh(beta hbar omega0/2)) / beta.
double delta_f(const OscillatorSpec& spec);

/// Z~ = 1 / (2 sinh(beta Q* hbar omega_tau / 2)).
double pseudo_partition(const OscillatorSpec& spec, double q_star);

/// S = ln(sinh(beta Q* hbar omega_tau/2) / sinh(beta hbar omega_tau/2)).
double rel_entropy_analytic(const OscillatorSpec& spec, double q_star);

/// Mean final-basis level reached from initial level n0:
/// (n0 + 1/2) Q* - 1/2.
double mean_occupation(int n0, double q_star);

/// One sweep sample; all columns are dimensionless.
struct SweepRow {
  double q_star;
  double beta_w;
  double beta_df;
  double beta_df_plus_s;
};

/// Rows over an explicit Q* grid, order preserved.
std::vector<SweepRow> sweep_qstar(const OscillatorSpec& spec,
                                  const std::vector<double>& qstar_grid);

/// Rows over protocol durations: each tau rescales the schedule, Q* comes
/// from the dynamics. Grid order is preserved (not Q*-sorted).
std::vector<SweepRow> sweep_tau(const OscillatorSpec& spec,
                                const std::vector<double>& tau_grid);

/// Evenly spaced grid with n points including both endpoints.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace qwork
