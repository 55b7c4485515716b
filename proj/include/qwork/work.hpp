// Work distributions for a driven protocol under the two-time-measurement
// scheme and under the measurement-free (single projection at t = 0)
// scheme, plus the fluctuation identities and bounds relating them.

#pragma once

#include <vector>

#include "qwork/linalg.hpp"
#include "qwork/thermo.hpp"

namespace qwork {

enum class WorkParadigm { TwoTime, MeasurementFree };

struct WorkAtom {
  double w;
  double prob;
};

/// Discrete work distribution. Atoms are sorted by work value; values within
/// 1e-12 * (1 + |w|) of each other are merged (probability-weighted mean),
/// zero-probability entries and two-time entries below squared basis
/// roundoff (1e-26) are dropped. Probabilities sum to 1 within 1e-12.
struct WorkDistribution {
  std::vector<WorkAtom> atoms;
  WorkParadigm paradigm;
};

/// Joint outcome table of the two-time scheme, indexed by (initial group,
/// final group) of the respective spectra. p(g0, g1) = occ(g0) * sum of
/// |<f| U |i>|^2 over the groups' members, hence entrywise nonnegative.
struct JointProbabilityTable {
  Eigen::MatrixXd p;                    // groups0 x groups1
  std::vector<double> initial_energies;
  std::vector<double> final_energies;
  std::vector<int> initial_mults;
  std::vector<int> final_mults;
};

std::vector<WorkAtom> merge_atoms(std::vector<WorkAtom> atoms);

/// Per-eigenstate occupation probabilities of the ensemble (group values
/// expanded to the ensemble's full dimension).
std::vector<double> state_occupations(const ThermalEnsemble& ens);

/// Diagonal elements <n| U^dag H_tau U |n> over the initial eigenbasis.
std::vector<double> evolved_diag_energies(const UnitaryOperator& u,
                                          const HermitianOperator& h_tau,
                                          const SpectralDecomposition& spec0);

JointProbabilityTable ttm_joint(const ThermalEnsemble& ens0,
                                const UnitaryOperator& u,
                                const SpectralDecomposition& spec_tau);

WorkDistribution ttm_distribution(const JointProbabilityTable& joint);

/// Measurement-free work values <n| U^dag H_tau U |n> - e_n, one per initial
/// eigenstate, unmerged.
std::vector<double> mf_work_values(const UnitaryOperator& u,
                                   const HermitianOperator& h_tau,
                                   const SpectralDecomposition& spec0);

WorkDistribution mf_distribution(const std::vector<double>& values,
                                 const std::vector<double>& probs);

double mean_work(const WorkDistribution& d);

/// ln <exp(-beta W)>, evaluated with a max-shift so large beta W never
/// overflows. exp_average is its exponential.
double log_exp_average(const WorkDistribution& d, double beta);
double exp_average(const WorkDistribution& d, double beta);

/// Best effective thermal description available without the final
/// measurement: weights exp(-beta e~_n)/Z~ over the evolved initial
/// eigenstates, where e~_n are the evolved diagonal energies.
struct PseudoGibbs {
  double z_tilde;
  double log_z_tilde;
  std::vector<double> weights;
  std::vector<double> diag_energies;
  DensityMatrix rho_tilde;
  double energy_tilde;  // sum of weights * diag_energies
};

PseudoGibbs pseudo_gibbs(const UnitaryOperator& u,
                         const HermitianOperator& h_tau,
                         const SpectralDecomposition& spec0, double beta);

/// A finished driving protocol: endpoint Hamiltonians, the total propagator,
/// and the bath temperature that prepared the initial state.
struct Protocol {
  HermitianOperator h0;
  HermitianOperator h_tau;
  UnitaryOperator u;
  double beta;
};

/// Everything the identities and reports need, computed once. The same
/// spectral decompositions feed both work paradigms and both partition
/// functions, so the fluctuation identities cancel to roundoff.
struct ProtocolAnalysis {
  double beta;
  SpectralDecomposition spec0;
  SpectralDecomposition spec_tau;
  ThermalEnsemble ens0;
  ThermalEnsemble ens_tau;
  DensityMatrix rho_final;  // U rho_0 U^dag
  JointProbabilityTable joint;
  WorkDistribution ttm;
  WorkDistribution mf;
  std::vector<double> mf_values;  // unmerged, indexed by initial eigenstate
  PseudoGibbs pg;
  double delta_f;       // (log Z_0 - log Z_tau) / beta
  double mean_ttm;
  double mean_mf;
  double delta_energy;  // tr(rho_final H_tau) - tr(rho_0 H_0)
};

ProtocolAnalysis analyze(const Protocol& protocol);

/// Both sides of the measurement-free fluctuation identity
/// <exp(-beta W)> = exp(-beta dF) exp(-S), with the relative entropy S
/// evaluated twice: in closed form ln(Z_tau / Z~_tau) and at matrix level
/// S(rho~ || gibbs(H_tau)).
struct ModifiedJarzynskiReport {
  double lhs;            // <exp(-beta W)> over the measurement-free atoms
  double delta_f;
  double s_rel;          // closed form
  double s_rel_matrix;
  double residual;       // |lhs - exp(-beta dF - s_rel)|
  double s_agreement;    // |s_rel_matrix - s_rel|
  bool support_violation;
};

ModifiedJarzynskiReport modified_jarzynski_report(
    const ProtocolAnalysis& analysis);

/// Dimensionless ledger of the maximum-work inequalities:
/// beta <W> >= beta dF + S >= beta dF, equivalently <W> >= dF~.
struct BoundsReport {
  double beta_mean_work;
  double beta_delta_f;
  double s_rel;
  double beta_delta_f_tilde;  // beta dF + S
  double slack19;             // beta <W> - beta dF - S
  double slack21;             // beta <W> - beta dF~, same number by design
};

BoundsReport bounds_report(const ProtocolAnalysis& analysis);

}  // namespace qwork
