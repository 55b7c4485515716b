// Randomized self-checks: seeded protocol generation, worst-case residuals
// of the fluctuation identities over a batch, and the numeric-vs-analytic
// oscillator cross-check.

#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "qwork/oscillator.hpp"
#include "qwork/work.hpp"

namespace qwork {

/// GUE-style random Hermitian matrix, entries O(scale).
HermitianOperator random_hermitian(std::mt19937_64& rng, int dim,
                                   double scale = 1.0);

/// Random full-rank state via a normalized Gram matrix G G^dag / tr.
DensityMatrix random_density(std::mt19937_64& rng, int dim);

struct RandomBatchOptions {
  int instances = 200;
  int dim_min = 2;
  int dim_max = 8;
  double beta_min = 0.1;
  double beta_max = 5.0;
  int steps = 200;  // propagation steps per protocol
};

/// Random driven protocol: H(lambda) interpolating two random Hermitians,
/// a random schedule shape, duration in [0.1, 1], beta in the given range.
Protocol random_protocol(std::mt19937_64& rng,
                         const RandomBatchOptions& opts);

/// Worst-case residuals of the identities over a batch of protocols. The
/// two Jarzynski residuals are relative (average times the exact partition
/// ratio, compared to 1); modified_identity is the absolute two-sided gap
/// with the right side built from the matrix-level relative entropy.
struct IdentityResiduals {
  int instances = 0;
  double ttm_jarzynski = 0.0;    // |<e^-bW> Z0/Ztau - 1|
  double mf_jarzynski = 0.0;     // |<e^-bW>_mf Z0/Z~ - 1|
  double first_law = 0.0;        // pairwise gap of the three mean-energy routes
  double modified_identity = 0.0;
  double s_closed_form = 0.0;    // |S_matrix - ln(Ztau/Z~)|
  double min_slack = std::numeric_limits<double>::infinity();
};

IdentityResiduals evaluate_random_batch(std::uint64_t seed,
                                        const RandomBatchOptions& opts);

/// Residuals of a single protocol, merged into a running worst case.
void accumulate_residuals(const ProtocolAnalysis& analysis,
                          IdentityResiduals& worst);

/// The do-nothing protocol (H fixed, U = 1); every residual is roundoff.
IdentityResiduals evaluate_identity_protocol(double beta = 1.3, int dim = 5,
                                             std::uint64_t seed = 7);

/// Truncated Fock-space pipeline against the closed forms. The numeric side
/// builds H(omega(t)) on n_trunc levels and propagates; the analytic side
/// uses Q* from the classical dynamics.
struct OscillatorCrosscheck {
  double q_star;
  double mean_work_numeric;
  double mean_work_analytic;
  double rel_dev_mean_work;
  double max_occupation_dev;  // over initial levels 0..10, vs (n0+1/2)Q*-1/2
  double z_tilde_numeric;
  double z_tilde_analytic;
  double rel_dev_z_tilde;
  double unitarity_defect;
  double tail_occupancy;  // initial Gibbs weight on the top 10% of levels
};

OscillatorCrosscheck oscillator_crosscheck(const OscillatorSpec& spec,
                                           int n_trunc, int steps);

}  // namespace qwork
