#include "qwork/commands.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qwork/propagation.hpp"
#include "qwork/serialize.hpp"
#include "qwork/verification.hpp"

namespace qwork {

namespace {

constexpr const char* kBasisConvention =
    "ascending eigenvalues; degenerate subspaces fixed by lexicographic "
    "Gram-Schmidt over projector columns";

DriveSchedule build_schedule(const ConfigMap& cfg) {
  const std::string shape = cfg.get_string("schedule.shape", "linear");
  if (shape == "tabulated")
    return DriveSchedule::tabulated(cfg.require_pairs("schedule.points"));
  const double tau = cfg.get_double("schedule.tau", 1.0);
  const double lambda0 = cfg.get_double("schedule.lambda_start", 0.0);
  const double lambda1 = cfg.get_double("schedule.lambda_end", 1.0);
  if (shape == "constant") {
    if (cfg.has("schedule.lambda_end") && lambda1 != lambda0)
      throw ConfigError(cfg.name() +
                        ": constant schedule cannot change lambda");
    return DriveSchedule::constant(lambda0, tau);
  }
  if (shape == "linear") return DriveSchedule::linear(lambda0, lambda1, tau);
  if (shape == "smoothstep")
    return DriveSchedule::smoothstep(lambda0, lambda1, tau);
  if (shape == "sudden") return DriveSchedule::sudden(lambda0, lambda1, tau);
  throw ConfigError(cfg.name() + ": unknown schedule shape '" + shape + "'");
}

HamiltonianModel build_model(const ConfigMap& cfg,
                             const DriveSchedule& schedule, double hbar) {
  const std::string kind = cfg.get_string("model.kind", "two_level");
  if (kind == "two_level") {
    const double delta = cfg.get_double("model.delta", 1.0);
    const std::string axis = cfg.get_string("model.axis", "x");
    if (axis != "x" && axis != "y")
      throw ConfigError(cfg.name() + ": model.axis must be 'x' or 'y'");
    return HamiltonianModel::two_level(
        delta, axis == "x" ? DriveAxis::X : DriveAxis::Y);
  }
  if (kind == "parametric_oscillator") {
    const double mass = cfg.get_double("model.mass", 1.0);
    const int n_trunc = cfg.get_int("model.n_trunc", 120);
    const double omega_ref =
        cfg.get_double("model.omega_ref", schedule.lambda_start());
    return HamiltonianModel::parametric_oscillator(mass, n_trunc, hbar,
                                                   omega_ref);
  }
  if (kind == "custom") {
    const int dim = cfg.require_int("model.dim");
    if (dim < 1) throw ConfigError(cfg.name() + ": model.dim must be >= 1");
    const std::vector<double> knots = cfg.require_doubles("model.knots");
    std::vector<std::pair<double, Matrix>> table;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const std::string key = "model.h_" + std::to_string(i);
      const std::vector<double> raw = cfg.require_doubles(key);
      if (raw.size() != std::size_t(2 * dim * dim))
        throw ConfigError(cfg.name() + ": field '" + key + "' needs " +
                          std::to_string(2 * dim * dim) +
                          " numbers (row-major re/im pairs)");
      Matrix h(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
          const std::size_t base = 2 * std::size_t(r * dim + c);
          h(r, c) = Complex(raw[base], raw[base + 1]);
        }
      table.emplace_back(knots[i], std::move(h));
    }
    return HamiltonianModel::custom(std::move(table));
  }
  throw ConfigError(cfg.name() + ": unknown model kind '" + kind + "'");
}

struct ProtocolRun {
  ProtocolAnalysis analysis;
  PropagatorResult prop;
};

ProtocolRun run_protocol(const ConfigMap& cfg) {
  const double beta = cfg.get_double("run.beta", 1.0);
  const double hbar = cfg.get_double("run.hbar", 1.0);
  const int steps = cfg.get_int("run.steps", kDefaultSteps);
  cfg.get_u64("run.seed", 1);  // accepted for uniformity, unused here
  DriveSchedule schedule = build_schedule(cfg);
  HamiltonianModel model = build_model(cfg, schedule, hbar);
  cfg.check_section_consumed("model");
  cfg.check_section_consumed("schedule");
  cfg.check_section_consumed("run");
  PropagatorResult prop = propagate(model, schedule, steps, hbar);
  Protocol protocol{model.evaluate(schedule.lambda_start()),
                    model.evaluate(schedule.lambda_end()), prop.u, beta};
  return ProtocolRun{analyze(protocol), std::move(prop)};
}

OscillatorSpec oscillator_spec_from(const ConfigMap& cfg) {
  const double omega0 = cfg.get_double("oscillator.omega0", 1.0);
  const double omega_tau = cfg.get_double("oscillator.omega_tau", 2.0);
  const double mass = cfg.get_double("oscillator.mass", 1.0);
  const double tau = cfg.get_double("oscillator.tau", 1.0);
  const std::string shape = cfg.get_string("oscillator.shape", "smoothstep");
  const double beta = cfg.get_double("run.beta", 1.0);
  const double hbar = cfg.get_double("run.hbar", 1.0);
  ScheduleShape tag;
  if (shape == "constant") tag = ScheduleShape::Constant;
  else if (shape == "linear") tag = ScheduleShape::Linear;
  else if (shape == "smoothstep") tag = ScheduleShape::Smoothstep;
  else if (shape == "sudden") tag = ScheduleShape::Sudden;
  else
    throw ConfigError(cfg.name() + ": unknown oscillator shape '" + shape +
                      "'");
  return make_oscillator_spec(omega0, omega_tau, beta, hbar, mass, tag, tau);
}

JsonValue check_entry(const std::string& name, double value, double tol,
                      bool pass) {
  JsonValue j = JsonValue::object();
  j.add("name", JsonValue::text(name));
  j.add("worst_residual", JsonValue::number(value));
  j.add("tolerance", JsonValue::number(tol));
  j.add("pass", JsonValue::boolean(pass));
  return j;
}

int identity_report(const IdentityResiduals& res, const std::string& mode,
                    std::uint64_t seed, double residual_tol, double s_tol,
                    double slack_floor, const CommandOptions& opts) {
  const bool pass = res.ttm_jarzynski <= residual_tol &&
                    res.first_law <= residual_tol &&
                    res.mf_jarzynski <= residual_tol &&
                    res.modified_identity <= residual_tol &&
                    res.s_closed_form <= s_tol &&
                    res.min_slack >= slack_floor;
  JsonValue report = JsonValue::object();
  report.add("mode", JsonValue::text(mode));
  report.add("seed", JsonValue::integer(std::int64_t(seed)));
  report.add("instances", JsonValue::integer(res.instances));
  JsonValue identities = JsonValue::array();
  identities.push(check_entry("ttm_jarzynski_identity", res.ttm_jarzynski,
                              residual_tol,
                              res.ttm_jarzynski <= residual_tol));
  identities.push(check_entry("first_law_mean_work", res.first_law,
                              residual_tol, res.first_law <= residual_tol));
  identities.push(check_entry("mf_exponentiated_identity", res.mf_jarzynski,
                              residual_tol,
                              res.mf_jarzynski <= residual_tol));
  identities.push(check_entry("modified_jarzynski_identity",
                              res.modified_identity, residual_tol,
                              res.modified_identity <= residual_tol));
  identities.push(check_entry("relative_entropy_closed_form",
                              res.s_closed_form, s_tol,
                              res.s_closed_form <= s_tol));
  JsonValue slack = JsonValue::object();
  slack.add("name", JsonValue::text("maximum_work_bound"));
  slack.add("min_slack", JsonValue::number(res.min_slack));
  slack.add("tolerance", JsonValue::number(slack_floor));
  slack.add("pass", JsonValue::boolean(res.min_slack >= slack_floor));
  identities.push(std::move(slack));
  report.add("identities", std::move(identities));
  report.add("pass", JsonValue::boolean(pass));
  write_text_file(opts.out_dir, "verify_report.json", report.dump());
  return pass ? 0 : 1;
}

}  // namespace

int cmd_ttm(const ConfigMap& cfg, const CommandOptions& opts) {
  ProtocolRun run = run_protocol(cfg);
  const ProtocolAnalysis& a = run.analysis;
  const double residual = std::abs(std::expm1(
      log_exp_average(a.ttm, a.beta) + a.ens0.log_z - a.ens_tau.log_z));
  write_text_file(opts.out_dir, "ttm_distribution.csv",
                  work_distribution_csv(a.ttm));
  JsonValue summary = JsonValue::object();
  summary.add("mean_work", JsonValue::number(a.mean_ttm));
  summary.add("exp_avg", JsonValue::number(exp_average(a.ttm, a.beta)));
  summary.add("z0", JsonValue::number(a.ens0.z));
  summary.add("ztau", JsonValue::number(a.ens_tau.z));
  summary.add("delta_f", JsonValue::number(a.delta_f));
  summary.add("jarzynski_residual", JsonValue::number(residual));
  summary.add("unitarity_defect", JsonValue::number(run.prop.unitarity_defect));
  summary.add("basis_convention", JsonValue::text(kBasisConvention));
  write_text_file(opts.out_dir, "ttm_summary.json", summary.dump());
  return (residual <= 1e-10 && run.prop.defect_ok) ? 0 : 1;
}

int cmd_mf(const ConfigMap& cfg, const CommandOptions& opts) {
  ProtocolRun run = run_protocol(cfg);
  const ProtocolAnalysis& a = run.analysis;
  const ModifiedJarzynskiReport report = modified_jarzynski_report(a);
  const BoundsReport bounds = bounds_report(a);
  write_text_file(opts.out_dir, "mf_distribution.csv",
                  work_distribution_csv(a.mf));
  JsonValue summary = JsonValue::object();
  summary.add("mean_work", JsonValue::number(a.mean_mf));
  summary.add("exp_avg", JsonValue::number(report.lhs));
  summary.add("z_tilde", JsonValue::number(a.pg.z_tilde));
  summary.add("s_rel_matrix", JsonValue::number(report.s_rel_matrix));
  summary.add("s_rel_closed_form", JsonValue::number(report.s_rel));
  summary.add("residual_eq18", JsonValue::number(report.residual));
  summary.add("slack_eq19", JsonValue::number(bounds.slack19));
  summary.add("modified_jarzynski", json_of(report));
  summary.add("bounds", json_of(bounds));
  summary.add("unitarity_defect", JsonValue::number(run.prop.unitarity_defect));
  summary.add("basis_convention", JsonValue::text(kBasisConvention));
  write_text_file(opts.out_dir, "mf_summary.json", summary.dump());
  const bool ok = report.residual <= 1e-10 && report.s_agreement <= 1e-8 &&
                  bounds.slack19 >= -1e-9 && run.prop.defect_ok;
  return ok ? 0 : 1;
}

int cmd_oscillator(const ConfigMap& cfg, const CommandOptions& opts) {
  OscillatorSpec spec = oscillator_spec_from(cfg);
  const std::string sweep = cfg.get_string("oscillator.sweep", "qstar");
  const int points = cfg.get_int("oscillator.points", 41);
  std::vector<SweepRow> rows;
  if (sweep == "qstar") {
    const double lo = cfg.get_double("oscillator.qstar_min", 1.0);
    const double hi = cfg.get_double("oscillator.qstar_max", 3.0);
    rows = sweep_qstar(spec, linspace(lo, hi, points));
  } else if (sweep == "tau") {
    const double lo = cfg.get_double("oscillator.tau_min", 0.1);
    const double hi = cfg.get_double("oscillator.tau_max", 10.0);
    rows = sweep_tau(spec, linspace(lo, hi, points));
  } else {
    throw ConfigError(cfg.name() + ": oscillator.sweep must be 'qstar' or 'tau'");
  }
  cfg.check_section_consumed("oscillator");
  cfg.check_section_consumed("run");
  write_text_file(opts.out_dir, "sweep.csv", sweep_csv(rows));
  JsonValue doc = JsonValue::object();
  doc.add("omega0", JsonValue::number(spec.omega0));
  doc.add("omega_tau", JsonValue::number(spec.omega_tau));
  doc.add("beta", JsonValue::number(spec.beta));
  doc.add("hbar", JsonValue::number(spec.hbar));
  doc.add("sweep", JsonValue::text(sweep));
  JsonValue arr = JsonValue::array();
  for (const SweepRow& row : rows) {
    JsonValue j = JsonValue::object();
    j.add("qstar", JsonValue::number(row.q_star));
    j.add("beta_w", JsonValue::number(row.beta_w));
    j.add("beta_df", JsonValue::number(row.beta_df));
    j.add("beta_df_plus_s", JsonValue::number(row.beta_df_plus_s));
    arr.push(std::move(j));
  }
  doc.add("rows", std::move(arr));
  write_text_file(opts.out_dir, "sweep.json", doc.dump());
  // The chain beta<W> >= beta dF + S >= beta dF must hold on every row.
  bool ordered = true;
  for (const SweepRow& row : rows) {
    if (!(row.beta_w >= row.beta_df_plus_s - 1e-12) ||
        !(row.beta_df_plus_s >= row.beta_df - 1e-12))
      ordered = false;
  }
  return ordered ? 0 : 1;
}

int cmd_verify(const ConfigMap& cfg, const CommandOptions& opts) {
  const std::string mode = cfg.get_string("verify.mode", "random");
  const std::uint64_t seed =
      opts.seed.value_or(cfg.get_u64("run.seed", 1));
  cfg.get_double("run.beta", 1.0);  // touched so shared configs stay clean
  cfg.get_double("run.hbar", 1.0);
  if (mode == "random") {
    RandomBatchOptions batch;
    batch.instances = cfg.get_int("verify.instances", 200);
    batch.dim_min = cfg.get_int("verify.dim_min", 2);
    batch.dim_max = cfg.get_int("verify.dim_max", 8);
    batch.beta_min = cfg.get_double("verify.beta_min", 0.1);
    batch.beta_max = cfg.get_double("verify.beta_max", 5.0);
    batch.steps = cfg.get_int("verify.steps", 200);
    cfg.check_section_consumed("verify");
    cfg.check_section_consumed("run");
    if (batch.instances < 1)
      throw ConfigError(cfg.name() + ": verify.instances must be >= 1");
    if (batch.dim_min < 2 || batch.dim_max < batch.dim_min)
      throw ConfigError(cfg.name() + ": need 2 <= dim_min <= dim_max");
    if (!(batch.beta_min > 0.0) || !(batch.beta_max >= batch.beta_min))
      throw ConfigError(cfg.name() + ": need 0 < beta_min <= beta_max");
    if (batch.steps < 1)
      throw ConfigError(cfg.name() + ": verify.steps must be >= 1");
    const IdentityResiduals res = evaluate_random_batch(seed, batch);
    return identity_report(res, mode, seed, 1e-10, 1e-8, -1e-9, opts);
  }
  if (mode == "identity") {
    const double beta = cfg.get_double("run.beta", 1.0);
    const int dim = cfg.get_int("verify.dim", 5);
    cfg.check_section_consumed("verify");
    cfg.check_section_consumed("run");
    const IdentityResiduals res = evaluate_identity_protocol(beta, dim, seed);
    return identity_report(res, mode, seed, 1e-12, 1e-12, -1e-12, opts);
  }
  if (mode == "oscillator") {
    OscillatorSpec spec = oscillator_spec_from(cfg);
    const int n_trunc = cfg.get_int("oscillator.n_trunc", 120);
    const int steps = cfg.get_int("verify.steps", 1500);
    cfg.check_section_consumed("verify");
    cfg.check_section_consumed("oscillator");
    cfg.check_section_consumed("run");
    const OscillatorCrosscheck check =
        oscillator_crosscheck(spec, n_trunc, steps);
    JsonValue report = JsonValue::object();
    report.add("mode", JsonValue::text(mode));
    report.add("q_star", JsonValue::number(check.q_star));
    report.add("mean_work_numeric",
               JsonValue::number(check.mean_work_numeric));
    report.add("mean_work_analytic",
               JsonValue::number(check.mean_work_analytic));
    report.add("z_tilde_numeric", JsonValue::number(check.z_tilde_numeric));
    report.add("z_tilde_analytic", JsonValue::number(check.z_tilde_analytic));
    JsonValue checks = JsonValue::array();
    const bool work_ok = check.rel_dev_mean_work <= 1e-3;
    const bool occ_ok = check.max_occupation_dev <= 1e-3;
    const bool zt_ok = check.rel_dev_z_tilde <= 1e-4;
    const bool defect_ok = check.unitarity_defect <= 1e-9;
    const bool tail_ok = check.tail_occupancy < 1e-8;
    checks.push(check_entry("mean_work_rel_dev", check.rel_dev_mean_work,
                            1e-3, work_ok));
    checks.push(check_entry("mean_occupation_dev", check.max_occupation_dev,
                            1e-3, occ_ok));
    checks.push(check_entry("pseudo_partition_rel_dev",
                            check.rel_dev_z_tilde, 1e-4, zt_ok));
    checks.push(check_entry("unitarity_defect", check.unitarity_defect, 1e-9,
                            defect_ok));
    checks.push(check_entry("tail_occupancy", check.tail_occupancy, 1e-8,
                            tail_ok));
    report.add("checks", std::move(checks));
    const bool pass = work_ok && occ_ok && zt_ok && defect_ok && tail_ok;
    report.add("pass", JsonValue::boolean(pass));
    write_text_file(opts.out_dir, "verify_report.json", report.dump());
    return pass ? 0 : 1;
  }
  throw ConfigError(cfg.name() + ": unknown verify mode '" + mode + "'");
}

ConfigMap preset_config(const std::string& name) {
  if (name == "fig1") {
    return ConfigMap::parse_string(
        "[run]\n"
        "beta = 1.0\n"
        "hbar = 1.0\n"
        "[oscillator]\n"
        "omega0 = 1.0\n"
        "omega_tau = 2.0\n"
        "sweep = qstar\n"
        "qstar_min = 1.0\n"
        "qstar_max = 3.0\n"
        "points = 41\n"
        "shape = smoothstep\n"
        "tau = 1.0\n",
        "preset:fig1");
  }
  if (name == "fig2") {
    return ConfigMap::parse_string(
        "[run]\n"
        "beta = 1.0\n"
        "hbar = 1.0\n"
        "[oscillator]\n"
        "omega0 = 2.0\n"
        "omega_tau = 1.0\n"
        "sweep = qstar\n"
        "qstar_min = 1.0\n"
        "qstar_max = 3.0\n"
        "points = 41\n"
        "shape = smoothstep\n"
        "tau = 1.0\n",
        "preset:fig2");
  }
  throw ConfigError("unknown preset '" + name + "' (expected fig1 or fig2)");
}

}  // namespace qwork
