// Unitary time evolution generated by H(lambda(t)).

#pragma once

#include "qwork/hamiltonian.hpp"
#include "qwork/thermo.hpp"

namespace qwork {

inline constexpr int kDefaultSteps = 2000;

struct PropagatorResult {
  UnitaryOperator u;
  int steps;
  double unitarity_defect;
  double hbar;
  bool defect_ok;   // defect within the requested tolerance
  bool converged;   // always true for fixed-step runs
};

/// Time-ordered product of midpoint-rule factors exp(-i H(lambda(t_k +
/// dt/2)) dt / hbar). Each factor is exactly unitary (spectral exponential),
/// so the defect only tracks accumulated roundoff; defect_ok reports whether
/// it stayed within defect_tol.
PropagatorResult propagate(const HamiltonianModel& model,
                           const DriveSchedule& schedule, int steps,
                           double hbar, double defect_tol = kUnitaryTol);

/// Doubles the step count until two successive propagators agree to conv_tol
/// in max norm. Non-convergence within max_doublings is flagged, not thrown.
PropagatorResult propagate_auto(const HamiltonianModel& model,
                                const DriveSchedule& schedule, double hbar,
                                double conv_tol = 1e-8,
                                int start_steps = kDefaultSteps,
                                int max_doublings = 6);

Vector evolve_state(const Vector& psi, const UnitaryOperator& u);
DensityMatrix evolve_state(const DensityMatrix& rho, const UnitaryOperator& u);

}  // namespace qwork
