// Time-dependent Hamiltonian models H(lambda) and drive schedules lambda(t).

#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "qwork/linalg.hpp"

namespace qwork {

enum class ScheduleShape { Constant, Linear, Smoothstep, Sudden, Tabulated };

/// Control-parameter schedule on [0, tau]. lambda(0) and lambda(tau) hit the
/// stated endpoints exactly; "sudden" jumps to the final value for any t > 0.
class DriveSchedule {
 public:
  static DriveSchedule constant(double lambda, double tau);
  static DriveSchedule linear(double lambda0, double lambda1, double tau);
  static DriveSchedule smoothstep(double lambda0, double lambda1, double tau);
  static DriveSchedule sudden(double lambda0, double lambda1, double tau);
  /// Knots (t, lambda) with t strictly increasing from 0; tau is the last t.
  static DriveSchedule tabulated(std::vector<std::pair<double, double>> knots);

  /// lambda(t); throws outside [0, tau].
  double value(double t) const;

  double duration() const { return tau_; }
  double lambda_start() const { return lambda0_; }
  double lambda_end() const { return lambda1_; }
  ScheduleShape shape() const { return shape_; }

  /// Same shape and endpoints, rescaled to a new duration.
  DriveSchedule with_duration(double tau) const;

 private:
  DriveSchedule(ScheduleShape shape, double lambda0, double lambda1,
                double tau);

  ScheduleShape shape_;
  double lambda0_;
  double lambda1_;
  double tau_;
  std::vector<std::pair<double, double>> knots_;  // tabulated only
};

struct FockOperators {
  Matrix x;
  Matrix p;
};

/// Position and momentum in the n_trunc-level Fock basis of the omega_ref
/// oscillator, built from truncated ladder operators. [x, p] = i hbar I holds
/// exactly on the upper-left (n_trunc - 1) block; the last diagonal entry of
/// the commutator is the usual truncation artifact.
FockOperators fock_operators(int n_trunc, double mass, double hbar,
                             double omega_ref);

enum class DriveAxis { X, Y };

class HamiltonianModel {
 public:
  /// H(lambda) = (lambda/2) diag(-1, +1) + (delta/2) sigma_axis.
  static HamiltonianModel two_level(double delta, DriveAxis axis = DriveAxis::X);

  /// H(omega) = p^2/2m + m omega^2 x^2/2 in the fixed omega_ref Fock basis,
  /// lambda = omega. x^2 and p^2 carry the exact Fock matrix elements
  /// (squares are formed before truncating), so H(omega_ref) is exactly
  /// diagonal with eigenvalues hbar omega_ref (n + 1/2).
  static HamiltonianModel parametric_oscillator(double mass, int n_trunc,
                                                double hbar, double omega_ref);

  /// Linear interpolation between Hermitian knots in lambda; evaluation
  /// outside the tabulated range is rejected.
  static HamiltonianModel custom(
      std::vector<std::pair<double, Matrix>> table);

  HermitianOperator evaluate(double lambda) const;
  Eigen::Index dim() const { return dim_; }

 private:
  struct TwoLevel {
    double delta;
    DriveAxis axis;
  };
  struct ParametricOscillator {
    double mass;
    double hbar;
    double omega_ref;
    Matrix kinetic;    // p^2 / 2m
    Matrix potential;  // m x^2 / 2
  };
  struct Custom {
    std::vector<double> lambdas;  // strictly increasing
    std::vector<Matrix> matrices;
  };
  using Kind = std::variant<TwoLevel, ParametricOscillator, Custom>;

  HamiltonianModel(Kind kind, Eigen::Index dim);

  Kind kind_;
  Eigen::Index dim_;
};

}  // namespace qwork
