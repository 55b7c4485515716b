#include "qwork/work.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qwork {

namespace {

constexpr double kAtomMergeTol = 1e-12;

// The distribution total inherits the propagator's unitarity defect, which
// is gated separately at 1e-9; the guard here only has to catch dropped or
// double-counted atoms, so it sits an order above that.
constexpr double kProbSumTol = 1e-8;

// Transition probabilities at the level of squared basis roundoff are
// eigensolver dust (they appear when U is diagonal in both eigenbases and
// the exact amplitude is zero), not physics. Anything this small shifts
// every downstream aggregate by less than double precision can resolve.
constexpr double kProbDust = 1e-26;

void check_total(const std::vector<WorkAtom>& atoms) {
  double total = 0.0;
  for (const auto& a : atoms) total += a.prob;
  if (std::abs(total - 1.0) > kProbSumTol)
    throw std::logic_error("work distribution probabilities lost mass");
}

}  // namespace

std::vector<WorkAtom> merge_atoms(std::vector<WorkAtom> atoms) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.w) || !std::isfinite(a.prob) || a.prob < 0.0)
      throw std::invalid_argument("work atoms must be finite with prob >= 0");
  }
  std::erase_if(atoms, [](const WorkAtom& a) { return a.prob == 0.0; });
  std::sort(atoms.begin(), atoms.end(),
            [](const WorkAtom& l, const WorkAtom& r) { return l.w < r.w; });
  std::vector<WorkAtom> merged;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double anchor = atoms[i].w;
    const double tol = kAtomMergeTol * (1.0 + std::abs(anchor));
    double mass = 0.0;
    double first_moment = 0.0;
    std::size_t j = i;
    while (j < atoms.size() && atoms[j].w - anchor <= tol) {
      mass += atoms[j].prob;
      first_moment += atoms[j].prob * atoms[j].w;
      ++j;
    }
    merged.push_back({mass > 0.0 ? first_moment / mass : anchor, mass});
    i = j;
  }
  return merged;
}

std::vector<double> state_occupations(const ThermalEnsemble& ens) {
  return ens.occupations;
}

std::vector<double> evolved_diag_energies(const UnitaryOperator& u,
                                          const HermitianOperator& h_tau,
                                          const SpectralDecomposition& spec0) {
  if (u.mat().rows() != spec0.dim() || h_tau.dim() != spec0.dim())
    throw std::invalid_argument("evolved energies dimension mismatch");
  const Matrix evolved = u.mat() * spec0.basis();  // columns U|n>
  const Matrix h_evolved = h_tau.mat() * evolved;
  std::vector<double> energies(static_cast<std::size_t>(spec0.dim()));
  for (Eigen::Index k = 0; k < spec0.dim(); ++k)
    energies[std::size_t(k)] = evolved.col(k).dot(h_evolved.col(k)).real();
  return energies;
}

JointProbabilityTable ttm_joint(const ThermalEnsemble& ens0,
                                const UnitaryOperator& u,
                                const SpectralDecomposition& spec_tau) {
  const SpectralDecomposition& spec0 = ens0.spectrum;
  if (u.mat().rows() != spec0.dim() || spec_tau.dim() != spec0.dim())
    throw std::invalid_argument("joint table dimension mismatch");
  // Transition amplitudes between the two eigenbases; |m_fi|^2 summed over
  // group members gives tr(P_f U P_i U^dag) without forming projectors.
  const Matrix m = spec_tau.basis().adjoint() * u.mat() * spec0.basis();
  JointProbabilityTable table;
  const int g0 = spec0.groups();
  const int g1 = spec_tau.groups();
  table.p = Eigen::MatrixXd::Zero(g0, g1);
  table.initial_energies = spec0.eigenvalues();
  table.final_energies = spec_tau.eigenvalues();
  table.initial_mults = spec0.multiplicities();
  table.final_mults = spec_tau.multiplicities();
  for (int a = 0; a < g0; ++a) {
    // Within a group the Gibbs occupation is constant, so the group's
    // probability is occ(first member) * sum over member transitions.
    const double occ = ens0.occupations[std::size_t(spec0.offset(a))];
    for (int b = 0; b < g1; ++b) {
      const double overlap = m.block(spec_tau.offset(b), spec0.offset(a),
                                     table.final_mults[std::size_t(b)],
                                     table.initial_mults[std::size_t(a)])
                                 .squaredNorm();
      table.p(a, b) = occ * overlap;
    }
  }
  return table;
}

WorkDistribution ttm_distribution(const JointProbabilityTable& joint) {
  std::vector<WorkAtom> atoms;
  atoms.reserve(std::size_t(joint.p.size()));
  for (Eigen::Index a = 0; a < joint.p.rows(); ++a) {
    for (Eigen::Index b = 0; b < joint.p.cols(); ++b) {
      if (joint.p(a, b) < kProbDust) continue;
      atoms.push_back({joint.final_energies[std::size_t(b)] -
                           joint.initial_energies[std::size_t(a)],
                       joint.p(a, b)});
    }
  }
  WorkDistribution d{merge_atoms(std::move(atoms)), WorkParadigm::TwoTime};
  check_total(d.atoms);
  return d;
}

std::vector<double> mf_work_values(const UnitaryOperator& u,
                                   const HermitianOperator& h_tau,
                                   const SpectralDecomposition& spec0) {
  std::vector<double> values = evolved_diag_energies(u, h_tau, spec0);
  for (Eigen::Index k = 0; k < spec0.dim(); ++k)
    values[std::size_t(k)] -= spec0.state_eigenvalue(k);
  return values;
}

WorkDistribution mf_distribution(const std::vector<double>& values,
                                 const std::vector<double>& probs) {
  if (values.size() != probs.size())
    throw std::invalid_argument("work values and probabilities differ in size");
  std::vector<WorkAtom> atoms(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    atoms[k] = {values[k], probs[k]};
  WorkDistribution d{merge_atoms(std::move(atoms)),
                     WorkParadigm::MeasurementFree};
  check_total(d.atoms);
  return d;
}

double mean_work(const WorkDistribution& d) {
  double mean = 0.0;
  for (const auto& a : d.atoms) mean += a.prob * a.w;
  return mean;
}

double log_exp_average(const WorkDistribution& d, double beta) {
  if (d.atoms.empty())
    throw std::invalid_argument("empty work distribution");
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& a : d.atoms) shift = std::max(shift, -beta * a.w);
  double sum = 0.0;
  for (const auto& a : d.atoms) sum += a.prob * std::exp(-beta * a.w - shift);
  return shift + std::log(sum);
}

double exp_average(const WorkDistribution& d, double beta) {
  return std::exp(log_exp_average(d, beta));
}

PseudoGibbs pseudo_gibbs(const UnitaryOperator& u,
                         const HermitianOperator& h_tau,
                         const SpectralDecomposition& spec0, double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("inverse temperature must be positive");
  std::vector<double> energies = evolved_diag_energies(u, h_tau, spec0);
  const double e_min = *std::min_element(energies.begin(), energies.end());
  double shifted_sum = 0.0;
  std::vector<double> weights(energies.size());
  for (std::size_t k = 0; k < energies.size(); ++k) {
    weights[k] = std::exp(-beta * (energies[k] - e_min));
    shifted_sum += weights[k];
  }
  const double log_z = -beta * e_min + std::log(shifted_sum);
  double energy_tilde = 0.0;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    weights[k] /= shifted_sum;
    energy_tilde += weights[k] * energies[k];
  }
  // rho~ is diagonal with these weights in the evolved initial eigenbasis.
  const Matrix evolved = u.mat() * spec0.basis();
  Matrix rho =
      evolved *
      Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                        Eigen::Index(weights.size()))
          .asDiagonal() *
      evolved.adjoint();
  return PseudoGibbs{std::exp(log_z),     log_z,
                     std::move(weights),  std::move(energies),
                     DensityMatrix(std::move(rho)), energy_tilde};
}

ProtocolAnalysis analyze(const Protocol& protocol) {
  if (protocol.h0.dim() != protocol.h_tau.dim() ||
      protocol.u.mat().rows() != protocol.h0.dim())
    throw std::invalid_argument("protocol dimension mismatch");
  SpectralDecomposition spec0 = eig_hermitian(protocol.h0);
  SpectralDecomposition spec_tau = eig_hermitian(protocol.h_tau);
  ThermalEnsemble ens0 = gibbs(spec0, protocol.beta);
  ThermalEnsemble ens_tau = gibbs(spec_tau, protocol.beta);
  DensityMatrix rho_final = DensityMatrix(
      protocol.u.mat() * ens0.rho.mat() * protocol.u.mat().adjoint());

  JointProbabilityTable joint = ttm_joint(ens0, protocol.u, spec_tau);
  WorkDistribution ttm = ttm_distribution(joint);
  std::vector<double> mf_values =
      mf_work_values(protocol.u, protocol.h_tau, spec0);
  WorkDistribution mf = mf_distribution(mf_values, ens0.occupations);
  PseudoGibbs pg =
      pseudo_gibbs(protocol.u, protocol.h_tau, spec0, protocol.beta);

  const double delta_f = (ens0.log_z - ens_tau.log_z) / protocol.beta;
  const double e0 = trace(ens0.rho.mat() * protocol.h0.mat()).real();
  const double e1 = trace(rho_final.mat() * protocol.h_tau.mat()).real();
  const double mean_ttm = mean_work(ttm);
  const double mean_mf = mean_work(mf);

  return ProtocolAnalysis{protocol.beta,
                          std::move(spec0),
                          std::move(spec_tau),
                          std::move(ens0),
                          std::move(ens_tau),
                          std::move(rho_final),
                          std::move(joint),
                          std::move(ttm),
                          std::move(mf),
                          std::move(mf_values),
                          std::move(pg),
                          delta_f,
                          mean_ttm,
                          mean_mf,
                          e1 - e0};
}

ModifiedJarzynskiReport modified_jarzynski_report(
    const ProtocolAnalysis& analysis) {
  ModifiedJarzynskiReport report;
  report.lhs = exp_average(analysis.mf, analysis.beta);
  report.delta_f = analysis.delta_f;
  // Closed form of S(rho~ || gibbs(H_tau)): both states are diagonal in
  // bases related by the same unitary once the logarithm is traced through,
  // leaving ln Z_tau - ln Z~_tau.
  report.s_rel = analysis.ens_tau.log_z - analysis.pg.log_z_tilde;
  report.s_rel_matrix =
      relative_entropy(analysis.pg.rho_tilde, analysis.ens_tau.rho);
  const double log_rhs =
      (analysis.ens_tau.log_z - analysis.ens0.log_z) - report.s_rel;
  report.residual = std::abs(report.lhs - std::exp(log_rhs));
  report.support_violation = std::isinf(report.s_rel_matrix);
  report.s_agreement = report.support_violation
                           ? std::numeric_limits<double>::infinity()
                           : std::abs(report.s_rel_matrix - report.s_rel);
  return report;
}

BoundsReport bounds_report(const ProtocolAnalysis& analysis) {
  BoundsReport report;
  report.beta_mean_work = analysis.beta * analysis.mean_mf;
  report.beta_delta_f = analysis.beta * analysis.delta_f;
  report.s_rel = analysis.ens_tau.log_z - analysis.pg.log_z_tilde;
  report.beta_delta_f_tilde = report.beta_delta_f + report.s_rel;
  report.slack19 =
      report.beta_mean_work - report.beta_delta_f - report.s_rel;
  report.slack21 = report.beta_mean_work - report.beta_delta_f_tilde;
  return report;
}

}  // namespace qwork
