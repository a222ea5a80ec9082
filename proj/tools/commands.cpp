#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "otlab/errors.hpp"
#include "otlab/io.hpp"
#include "otlab/parallel.hpp"

namespace otlab::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

std::ostream& logof(const RunOptions& opt) { return opt.log ? *opt.log : std::cout; }

std::string joined(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

// Parses a cost description and enforces the axioms it will be used under.
RadialProfile checked_cost(const json& spec, const Grid& g, const char* label,
                           bool need_superlinear) {
  RadialProfile c = parse_cost(spec);
  const double r_max = c.r_max > 0.0 ? std::min(c.r_max, g.length()) : g.length();
  const CostAxiomReport rep = verify_cost_axioms(c, r_max);
  if (!rep.zero_at_zero)
    throw ConfigError(std::string(label) + ": profile must vanish at r = 0");
  if (!rep.strictly_convex)
    throw ConfigError(std::string(label) + ": profile must be strictly convex (margin " +
                      std::to_string(rep.convexity_margin) + ")");
  if (need_superlinear && !rep.superlinear)
    throw ConfigError(std::string(label) + ": profile must be superlinear");
  return c;
}

RadialProfile required_conjugable(RadialProfile c, const char* label) {
  if (!c.has_conjugate()) throw ConfigError(std::string(label) + ": profile has no conjugate");
  return c;
}

CostSystem make_system(const ExperimentConfig& cfg, const Grid& g) {
  CostSystem sys;
  sys.h = required_conjugable(checked_cost(cfg.block("cost"), g, "cost", true), "cost");
  sys.H = checked_cost(cfg.block("fisher_H"), g, "fisher_H", false);
  sys.L = cfg.has("young_L")
              ? required_conjugable(checked_cost(cfg.block("young_L"), g, "young_L", true),
                                    "young_L")
              : conjugate(sys.h);
  return sys;
}

double num_or(const json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string("field \"") + key + "\" must be numeric");
  return j[key].get<double>();
}

double num_req(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number())
    throw ConfigError(std::string(what) + ": missing numeric field \"" + key + "\"");
  return j[key].get<double>();
}

double default_z_max(const Potential& V, const RadialProfile& h) {
  return V.lip() + h.dkappa(V.grid.length());
}

GridMeasure initial_or_uniform(const ExperimentConfig& cfg, const char* key, const Grid& g,
                               const GridMeasure& eta) {
  if (cfg.has(key)) return initial_measure(cfg.raw.at(key), g, eta);
  return GridMeasure::from_values(g, std::vector<double>(g.n, 1.0));
}

// Some commands reference eta only through initial-measure kinds; when no
// potential is configured a uniform stand-in keeps those kinds usable.
GridMeasure eta_or_uniform(const ExperimentConfig& cfg, const Grid& g) {
  if (cfg.has("potential")) return gibbs_from_spec(cfg.block("potential"), g).eta;
  return GridMeasure::from_values(g, std::vector<double>(g.n, 1.0));
}

ordered_json criterion_json(const CriterionReport& r, bool passed) {
  return ordered_json{{"passed", passed},
                      {"worst_margin", r.worst_margin},
                      {"worst_z", r.worst_z},
                      {"constant", r.constant},
                      {"lsi_constant", r.lsi_constant},
                      {"n_z", r.z.size()}};
}

void write_margin_csv(const std::string& path, const CriterionReport& r) {
  std::vector<std::vector<double>> rows(r.z.size());
  for (std::size_t i = 0; i < r.z.size(); ++i)
    rows[i] = {r.z[i], r.lhs[i], r.rhs[i], r.margin[i]};
  write_csv(path, {"z", "lhs", "rhs", "margin"}, rows);
}

const char* cert_status(CertStatus s) {
  switch (s) {
    case CertStatus::certified: return "certified";
    case CertStatus::failed: return "failed";
    default: return "inconclusive";
  }
}

std::vector<TestDensity> parse_density_list(const json& arr, const char* what) {
  if (!arr.is_array() || arr.empty())
    throw ConfigError(std::string(what) + " must be a non-empty array of test densities");
  std::vector<TestDensity> out;
  out.reserve(arr.size());
  for (const auto& d : arr) out.push_back(parse_test_density(d));
  return out;
}

}  // namespace

int cmd_criterion(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Grid& g = cfg.grid;
  const GibbsPair gp = gibbs_from_spec(cfg.block("potential"), g);
  const RadialProfile h =
      required_conjugable(checked_cost(cfg.block("cost"), g, "cost", true), "cost");
  const Modulus sigma = parse_modulus(cfg.block("sigma"), ModulusKind::convexity);
  const Modulus omega = parse_modulus(cfg.block("omega"), ModulusKind::monotonicity);

  const double z_max = num_or(cfg.raw, "z_max", default_z_max(gp.V, h));
  const int n_z = int(num_or(cfg.raw, "n_z", 4096));
  std::vector<std::string> checks = cfg.checks;
  if (checks.empty()) checks = {"theorem"};

  ordered_json out;
  out["command"] = "criterion";
  out["z_max"] = z_max;
  bool all_pass = true;

  for (const std::string& check : checks) {
    if (check == "theorem") {
      const CostSystem sys = make_system(cfg, g);
      const CriterionReport rep = theorem_criterion(sys, sigma, omega, z_max, n_z);
      const bool ok = rep.worst_margin >= -1e-10 * opt.tol_scale;
      out["theorem"] = criterion_json(rep, ok);
      write_margin_csv(joined(opt.out_dir, "criterion_theorem.csv"), rep);
      logof(opt) << "[criterion] theorem: worst margin " << fmt_g17(rep.worst_margin)
                 << " at z = " << fmt_g17(rep.worst_z) << " -> " << verdict(ok) << "\n";
      all_pass = all_pass && ok;
    } else if (check == "simpler") {
      const CriterionReport rep = simpler_condition(h, sigma, omega, z_max, n_z);
      out["simpler"] = criterion_json(rep, rep.passed);
      write_margin_csv(joined(opt.out_dir, "criterion_simpler.csv"), rep);
      logof(opt) << "[criterion] simpler: C = " << fmt_g17(rep.constant)
                 << ", LSI constant = " << fmt_g17(rep.lsi_constant) << " -> "
                 << verdict(rep.passed) << "\n";
      all_pass = all_pass && rep.passed;
    } else if (check == "moduli") {
      const long long pairs = (long long)(num_or(cfg.raw, "pair_samples", 250000));
      const ModulusReport rs = verify_modulus(gp.V, sigma, pairs);
      const ModulusReport rw = verify_modulus(gp.V, omega, pairs);
      const bool ok = rs.valid && rw.valid;
      out["moduli"] = ordered_json{{"passed", ok},
                                   {"sigma_margin", rs.min_margin},
                                   {"sigma_valid", rs.valid},
                                   {"omega_margin", rw.min_margin},
                                   {"omega_valid", rw.valid},
                                   {"pairs_checked", rs.pairs_checked + rw.pairs_checked}};
      logof(opt) << "[criterion] moduli: sigma margin " << fmt_g17(rs.min_margin)
                 << ", omega margin " << fmt_g17(rw.min_margin) << " -> " << verdict(ok) << "\n";
      all_pass = all_pass && ok;
    } else {
      throw ConfigError("criterion: unknown check \"" + check + "\"");
    }
  }
  out["passed"] = all_pass;
  write_json(joined(opt.out_dir, "criterion_report.json"), out);
  return all_pass ? kExitPass : kExitFail;
}

int cmd_flow(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Grid& g = cfg.grid;
  const GibbsPair gp = gibbs_from_spec(cfg.block("potential"), g);
  const CostSystem sys = make_system(cfg, g);
  const Modulus sigma = parse_modulus(cfg.block("sigma"), ModulusKind::convexity);
  const Modulus omega = parse_modulus(cfg.block("omega"), ModulusKind::monotonicity);
  const GridMeasure rho0 = initial_or_uniform(cfg, "initial", g, gp.eta);

  FlowConfig fc;
  fc.n_steps = cfg.n_steps;
  fc.solver = cfg.solver;
  fc.solver.oracle_check = fc.solver.oracle_check || opt.oracle;

  const FlowTrace tr = run_flow(rho0, gp.V, sys, sigma, omega, fc);

  std::vector<std::vector<double>> rows;
  rows.reserve(tr.rows.size());
  for (const FlowRow& r : tr.rows)
    rows.push_back({double(r.k), r.F, r.I_H, r.I_L, r.I_G, r.R_ent, r.R_inf, r.delta, r.sup_dist,
                    r.step_cost, r.resid_ent, r.resid_fisher, r.residual});
  write_csv(joined(opt.out_dir, "flow_trace.csv"),
            {"k", "F", "I_H", "I_L", "I_G", "R_ent", "R_inf", "delta", "sup_dist", "step_cost",
             "resid_ent", "resid_fisher", "residual"},
            rows);

  std::vector<std::vector<double>> prof(g.n);
  for (int i = 0; i < g.n; ++i)
    prof[i] = {g.x[i], tr.rho_initial.density[i], tr.rho_final.density[i], gp.eta.density[i]};
  write_csv(joined(opt.out_dir, "flow_final.csv"), {"x", "rho0", "rho_final", "eta"}, prof);

  const CertificateReport cert = lsi_certificate(tr, opt.tol_scale);
  const double tol_d = 100.0 * tr.dx() * opt.tol_scale;
  double resid_floor = 0.0;
  int monotone_violations = 0;
  const double mono_slack = 1e-13 * (1.0 + std::abs(tr.rows[0].F)) * opt.tol_scale;
  for (std::size_t k = 1; k < tr.rows.size(); ++k) {
    resid_floor = std::min({resid_floor, tr.rows[k].resid_ent, tr.rows[k].resid_fisher});
    if (tr.rows[k].F > tr.rows[k - 1].F + mono_slack) ++monotone_violations;
  }
  const bool resid_ok = resid_floor >= -tol_d;
  bool passed = cert.certified && resid_ok;

  ordered_json summary;
  summary["command"] = "flow";
  summary["steps_run"] = tr.rows.size() - 1;
  summary["aborted_at_equilibrium"] = tr.aborted_at_equilibrium;
  summary["final_sup_dist"] = tr.rows.back().sup_dist;
  summary["final_F"] = tr.rows.back().F;
  summary["residual_floor"] = resid_floor;
  summary["residual_tol"] = tol_d;
  summary["residual_ok"] = resid_ok;
  summary["monotone_violations"] = monotone_violations;
  summary["certificate"] = ordered_json{{"status", cert_status(cert.status)},
                                        {"certified", cert.certified},
                                        {"F0", cert.F0},
                                        {"IG0", cert.IG0},
                                        {"Fn", cert.Fn},
                                        {"IGn", cert.IGn},
                                        {"sum_delta", cert.sum_delta},
                                        {"tol", cert.tol},
                                        {"telescope_ok", cert.telescope_ok},
                                        {"telescope_worst", cert.telescope_worst}};

  if (cfg.has("ppower")) {
    const json& pb = cfg.block("ppower");
    const PpowerFlowReport pr = ppower_flow_constants(
        tr, num_req(pb, "p", "ppower"), num_req(pb, "tau", "ppower"),
        num_req(pb, "alpha", "ppower"), num_req(pb, "beta", "ppower"), opt.tol_scale);
    summary["ppower"] = ordered_json{{"p", pr.p},
                                     {"q", pr.q},
                                     {"tau", pr.tau},
                                     {"theta", pr.theta},
                                     {"ent_worst", pr.ent_worst},
                                     {"geo_worst", pr.geo_worst},
                                     {"decay_worst", pr.decay_worst},
                                     {"summed_lhs", pr.summed_lhs},
                                     {"summed_rhs", pr.summed_rhs},
                                     {"summed_constant", pr.summed_constant},
                                     {"tol", pr.tol},
                                     {"per_step_ok", pr.per_step_ok},
                                     {"geometric_ok", pr.geometric_ok},
                                     {"summed_ok", pr.summed_ok}};
    passed = passed && pr.per_step_ok && pr.geometric_ok && pr.summed_ok;
    logof(opt) << "[flow] p-power rates: per-step " << verdict(pr.per_step_ok) << ", geometric "
               << verdict(pr.geometric_ok) << ", summed " << verdict(pr.summed_ok) << "\n";
  }

  summary["passed"] = passed;
  write_json(joined(opt.out_dir, "flow_summary.json"), summary);

  logof(opt) << "[flow] " << (tr.rows.size() - 1) << " steps, final sup|rho - eta| = "
             << fmt_g17(tr.rows.back().sup_dist) << "\n";
  logof(opt) << "[flow] certificate " << cert_status(cert.status) << " (F0 = " << fmt_g17(cert.F0)
             << ", IG0 = " << fmt_g17(cert.IG0) << "), residual floor " << fmt_g17(resid_floor)
             << " -> " << verdict(passed) << "\n";
  return passed ? kExitPass : kExitFail;
}

int cmd_step(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Grid& g = cfg.grid;
  const GibbsPair gp = gibbs_from_spec(cfg.block("potential"), g);
  const RadialProfile h =
      required_conjugable(checked_cost(cfg.block("cost"), g, "cost", true), "cost");
  const GridMeasure mu = initial_or_uniform(cfg, "initial", g, gp.eta);

  JkoConfig jc = cfg.solver;
  jc.oracle_check = jc.oracle_check || opt.oracle;
  const JkoStepResult res = jko_step(mu, gp.V, h, jc);

  std::vector<std::vector<double>> prof(g.n);
  for (int i = 0; i < g.n; ++i)
    prof[i] = {g.x[i], mu.density[i], res.rho_next.density[i], res.psi[i], res.psi_prime[i]};
  write_csv(joined(opt.out_dir, "step_profile.csv"), {"x", "mu", "rho_next", "psi", "psi_prime"},
            prof);

  ordered_json out;
  out["command"] = "step";
  out["residual"] = res.residual;
  out["objective"] = res.objective;
  out["free_energy_mu"] = free_energy(mu, gp.V);
  out["step_cost"] = res.step_cost;
  out["duality_gap"] = res.duality_gap;
  out["inner_iters"] = res.inner_iters;
  out["restarts"] = res.restarts;
  out["relaxation_used"] = res.relaxation_used;
  out["oracle_distance"] = res.oracle_distance;
  out["passed"] = true;
  write_json(joined(opt.out_dir, "step_report.json"), out);

  logof(opt) << "[step] residual " << fmt_g17(res.residual) << " after " << res.inner_iters
             << " iterations (" << res.restarts << " restarts)";
  if (res.oracle_distance >= 0.0)
    logof(opt) << ", oracle distance " << fmt_g17(res.oracle_distance);
  logof(opt) << " -> PASS\n";
  return kExitPass;
}

int cmd_transport(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Grid& g = cfg.grid;
  const GridMeasure eta = eta_or_uniform(cfg, g);
  const GridMeasure mu = initial_measure(cfg.block("initial"), g, eta);
  const GridMeasure nu = initial_measure(cfg.block("target"), g, eta);
  const RadialProfile h =
      required_conjugable(checked_cost(cfg.block("cost"), g, "cost", true), "cost");

  const TransportSolution sol = solve_transport(mu, nu, h, cfg.solver.gap_tol);

  // The optimality derivative determines the map; rebuilding it from the
  // tightened potential is an independent consistency check. The outermost
  // cells are excluded: the quantile map snaps to the domain edge on
  // truncated targets, a jump the difference stencil cannot resolve.
  const std::vector<double> dpsi = fd_gradient(g, sol.potentials.psi);
  double recon_err = 0.0;
  for (int i = 2; i < g.n - 2; ++i) {
    const double s = dpsi[i] >= 0.0 ? 1.0 : -1.0;
    const double rebuilt = g.x[i] - s * h.dconj(std::abs(dpsi[i]));
    recon_err = std::max(recon_err, std::abs(rebuilt - sol.map[i]));
  }
  const double recon_tol = 10.0 * g.dx * opt.tol_scale;
  const bool passed = recon_err <= recon_tol;

  std::vector<std::vector<double>> prof(g.n);
  for (int i = 0; i < g.n; ++i)
    prof[i] = {g.x[i], mu.density[i], nu.density[i], sol.map[i], sol.potentials.psi[i],
               sol.potentials.phi[i]};
  write_csv(joined(opt.out_dir, "transport_map.csv"), {"x", "mu", "nu", "T", "psi", "phi"}, prof);

  ordered_json out;
  out["command"] = "transport";
  out["cost"] = sol.cost;
  out["duality_gap"] = sol.potentials.duality_gap;
  out["gap_tol"] = sol.potentials.gap_tol;
  out["recon_error"] = recon_err;
  out["recon_tol"] = recon_tol;
  out["passed"] = passed;
  write_json(joined(opt.out_dir, "transport_report.json"), out);

  logof(opt) << "[transport] cost " << fmt_g17(sol.cost) << ", duality gap "
             << fmt_g17(sol.potentials.duality_gap) << ", map reconstruction error "
             << fmt_g17(recon_err) << " -> " << verdict(passed) << "\n";
  return passed ? kExitPass : kExitFail;
}

int cmd_five_gradients(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Grid& g = cfg.grid;
  const RadialProfile h = checked_cost(cfg.block("cost"), g, "cost", false);
  const RadialProfile H = checked_cost(cfg.block("fisher_H"), g, "fisher_H", false);

  std::vector<std::pair<GridMeasure, GridMeasure>> pairs;
  if (cfg.has("pairs")) {
    const json& pb = cfg.block("pairs");
    const int count = int(num_or(pb, "count", 50));
    const auto seed = std::uint64_t(num_or(pb, "seed", 1));
    const double amp = num_or(pb, "amplitude", 0.75);
    if (count < 1) throw ConfigError("pairs.count must be positive");
    pairs.reserve(count);
    for (int j = 0; j < count; ++j)
      pairs.emplace_back(random_smooth_measure(g, seed + 2 * std::uint64_t(j), amp),
                         random_smooth_measure(g, seed + 2 * std::uint64_t(j) + 1, amp));
  } else {
    const GridMeasure eta = eta_or_uniform(cfg, g);
    pairs.emplace_back(initial_measure(cfg.block("initial"), g, eta),
                       initial_measure(cfg.block("target"), g, eta));
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(pairs.size());
  double worst = std::numeric_limits<double>::infinity();
  int worst_index = 0;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const double v = five_gradients_value(pairs[j].first, pairs[j].second, H, h);
    if (v < worst) {
      worst = v;
      worst_index = int(j);
    }
    rows.push_back({double(j), v});
  }
  write_csv(joined(opt.out_dir, "five_gradients.csv"), {"pair", "value"}, rows);

  const double tol = 100.0 * g.dx * opt.tol_scale;
  const bool passed = worst >= -tol;
  ordered_json out;
  out["command"] = "five-gradients";
  out["pairs"] = pairs.size();
  out["min_value"] = worst;
  out["worst_pair"] = worst_index;
  out["tol"] = tol;
  out["passed"] = passed;
  write_json(joined(opt.out_dir, "five_gradients_report.json"), out);

  logof(opt) << "[five-gradients] " << pairs.size() << " pairs, min value " << fmt_g17(worst)
             << " (tol -" << fmt_g17(tol) << ") -> " << verdict(passed) << "\n";
  return passed ? kExitPass : kExitFail;
}

int cmd_lsi_gap(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Grid& g = cfg.grid;
  const GibbsPair gp = gibbs_from_spec(cfg.block("potential"), g);
  const RadialProfile G = checked_cost(cfg.block("weight_G"), g, "weight_G", false);
  const std::vector<TestDensity> densities = parse_density_list(cfg.block("densities"),
                                                                "densities");

  const double tol = 1e-3 * opt.tol_scale;
  double min_gap = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> rows;
  ordered_json gaps = ordered_json::array();
  for (std::size_t j = 0; j < densities.size(); ++j) {
    std::vector<double> gv(g.n);
    for (int i = 0; i < g.n; ++i) gv[i] = densities[j].g(g.x[i]);
    const double gap = lsi_gap(gv, gp.eta, G);
    min_gap = std::min(min_gap, gap);
    rows.push_back({double(j), gap});
    gaps.push_back(ordered_json{{"name", densities[j].name}, {"gap", gap}});
  }
  write_csv(joined(opt.out_dir, "lsi_gaps.csv"), {"density", "gap"}, rows);

  bool passed = min_gap >= -tol;
  ordered_json out;
  out["command"] = "lsi-gap";
  out["gaps"] = gaps;
  out["min_gap"] = min_gap;
  out["tol"] = tol;

  if (cfg.has("limit")) {
    const json& lb = cfg.block("limit");
    const double lambda = num_req(lb, "lambda", "limit");
    std::vector<double> taus;
    if (lb.contains("taus") && lb["taus"].is_array())
      for (const auto& t : lb["taus"]) taus.push_back(t.get<double>());
    else
      taus = {1.0, 0.1, 0.01, 0.001};
    const LsiLimitReport lim = classical_lsi_limit(lambda, taus, densities);
    ordered_json rows_j = ordered_json::array();
    for (const LsiLimitRow& r : lim.rows)
      rows_j.push_back(ordered_json{{"name", r.g_name},
                                    {"quad_gap", r.quad_gap},
                                    {"kinetic", r.kinetic},
                                    {"excess", r.excess}});
    out["limit"] = ordered_json{{"lambda", lim.Lambda},
                                {"minimal_A", lim.minimal_A},
                                {"minimal_A_verified", lim.minimal_A_verified},
                                {"taus", lim.taus},
                                {"monotone_ok", lim.monotone_ok},
                                {"converged_ok", lim.converged_ok},
                                {"rows", rows_j}};
    passed = passed && lim.minimal_A_verified && lim.monotone_ok && lim.converged_ok;
    logof(opt) << "[lsi-gap] classical limit: minimal A = " << fmt_g17(lim.minimal_A)
               << " verified " << verdict(lim.minimal_A_verified) << ", tail convergence "
               << verdict(lim.converged_ok) << "\n";
  }

  out["passed"] = passed;
  write_json(joined(opt.out_dir, "lsi_gap_report.json"), out);
  logof(opt) << "[lsi-gap] " << densities.size() << " densities, min gap " << fmt_g17(min_gap)
             << " (tol -" << fmt_g17(tol) << ") -> " << verdict(passed) << "\n";
  return passed ? kExitPass : kExitFail;
}

int cmd_theta_lsi(const ExperimentConfig& cfg, const RunOptions& opt) {
  const json& tb = cfg.block("theta");
  const Modulus theta = parse_modulus(tb, ModulusKind::convexity);
  const double t_max = num_or(tb, "t_max", 2.0);
  const double C = num_or(tb, "C", 0.0);
  const int n_t = int(num_or(cfg.raw, "n_t", 1025));
  const Modulus sigma = parse_modulus(cfg.block("sigma"), ModulusKind::convexity);
  const Modulus omega = parse_modulus(cfg.block("omega"), ModulusKind::monotonicity);

  const ThetaLsiReport rep = radial_theta_lsi(theta.value, t_max, sigma, omega, C, n_t);

  std::vector<std::vector<double>> rows(rep.t.size());
  for (std::size_t i = 0; i < rep.t.size(); ++i) rows[i] = {rep.t[i], rep.l[i]};
  write_csv(joined(opt.out_dir, "theta_l.csv"), {"t", "l"}, rows);

  const bool consistent = rep.conj_consistency <= 1e-6 * opt.tol_scale;
  const bool passed = rep.hypothesis_ok && consistent;
  ordered_json out;
  out["command"] = "theta-lsi";
  out["hypothesis_ok"] = rep.hypothesis_ok;
  out["hypothesis_worst"] = rep.hypothesis_worst;
  out["conj_consistency"] = rep.conj_consistency;
  out["consistent"] = consistent;
  out["lsi_constant"] = rep.lsi_constant;
  out["passed"] = passed;
  write_json(joined(opt.out_dir, "theta_lsi_report.json"), out);

  logof(opt) << "[theta-lsi] hypothesis " << verdict(rep.hypothesis_ok)
             << ", route consistency " << fmt_g17(rep.conj_consistency) << " -> "
             << verdict(passed) << "\n";
  return passed ? kExitPass : kExitFail;
}

int cmd_ppower(double p, const RunOptions& opt) {
  const double C = ppower_C(p);
  const double tp = ppower_tp(p);
  const double bound = std::pow(2.0, 2.0 - p) / p;
  const double mt = -tp;
  const double at_tp =
      (std::pow(std::abs(tp + 1.0), p) - std::pow(mt, p)) / p + std::pow(mt, p - 1.0);
  const bool passed = C >= bound - 1e-12 && std::abs(at_tp - C) <= 1e-10 * (1.0 + std::abs(C));

  ordered_json out;
  out["command"] = "ppower";
  out["p"] = p;
  out["C"] = C;
  out["t_p"] = tp;
  out["lower_bound"] = bound;
  out["objective_at_tp"] = at_tp;
  out["passed"] = passed;
  write_json(joined(opt.out_dir, "ppower_report.json"), out);

  logof(opt) << "[ppower] p = " << fmt_g17(p) << ": C = " << fmt_g17(C) << ", t_p = "
             << fmt_g17(tp) << ", bound 2^(2-p)/p = " << fmt_g17(bound) << " -> "
             << verdict(passed) << "\n";
  return passed ? kExitPass : kExitFail;
}

int guarded_run(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const SolverFailure& e) {
    if (e.kind == SolverFailure::Kind::oracle) {
      err << "verification failure: " << e.what() << "\n";
      return kExitFail;
    }
    err << "solver error: " << e.what() << "\n";
    return kExitError;
  } catch (const DualityGapError& e) {
    err << "verification failure: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int run_command(const std::string& verb, const RunOptions& opt,
                const std::vector<std::pair<std::string, std::string>>& overrides) {
  return guarded_run(
      [&]() -> int {
        ExperimentConfig cfg = load_config(opt.config_path);
        if (!overrides.empty()) {
          json j = cfg.raw;
          for (const auto& [key, value] : overrides) apply_override(j, key, value);
          cfg = config_from_json(std::move(j));
        }
        if (verb == "criterion") return cmd_criterion(cfg, opt);
        if (verb == "flow") return cmd_flow(cfg, opt);
        if (verb == "step") return cmd_step(cfg, opt);
        if (verb == "transport") return cmd_transport(cfg, opt);
        if (verb == "five-gradients") return cmd_five_gradients(cfg, opt);
        if (verb == "lsi-gap") return cmd_lsi_gap(cfg, opt);
        if (verb == "theta-lsi") return cmd_theta_lsi(cfg, opt);
        throw ConfigError("unknown subcommand \"" + verb + "\"");
      },
      opt.log ? *opt.log : std::cerr);
}

SweepAxis parse_sweep(const std::string& flag_value) {
  const auto eq = flag_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("sweep: expected KEY=v1,v2,..., got \"" + flag_value + "\"");
  SweepAxis axis;
  axis.key = flag_value.substr(0, eq);
  std::size_t start = eq + 1;
  while (start <= flag_value.size()) {
    const auto comma = flag_value.find(',', start);
    const std::string v = flag_value.substr(start, comma - start);
    if (v.empty()) throw ConfigError("sweep: empty value in \"" + flag_value + "\"");
    axis.values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (axis.values.empty()) throw ConfigError("sweep: no values in \"" + flag_value + "\"");
  return axis;
}

namespace {

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '=' ||
          c == '_'))
      c = '_';
  return out;
}

}  // namespace

int run_sweep(const std::string& verb, const RunOptions& opt, const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<std::pair<std::string, std::string>>> jobs{{}};
  for (const SweepAxis& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    next.reserve(jobs.size() * axis.values.size());
    for (const auto& partial : jobs)
      for (const std::string& v : axis.values) {
        auto combo = partial;
        combo.emplace_back(axis.key, v);
        next.push_back(std::move(combo));
      }
    jobs = std::move(next);
  }

  std::vector<std::string> dirs(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::string tag;
    for (const auto& [k, v] : jobs[i]) {
      if (!tag.empty()) tag += "__";
      tag += sanitize(k) + "=" + sanitize(v);
    }
    dirs[i] = joined(opt.out_dir, tag);
  }

  std::vector<int> codes(jobs.size(), kExitError);
  std::vector<std::string> logs(jobs.size());

  // Jobs share nothing and write to disjoint directories, so they run on a
  // small thread pool. Kernel-level parallelism is paused while more than one
  // job is in flight to avoid oversubscription.
  const bool concurrent = jobs.size() > 1;
  const bool par_before = par::enabled();
  if (concurrent) par::set_enabled(false);

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      std::ostringstream local;
      RunOptions jo = opt;
      jo.out_dir = dirs[i];
      jo.log = &local;
      codes[i] = run_command(verb, jo, jobs[i]);
      logs[i] = local.str();
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers = std::min<std::size_t>(jobs.size(), hw);
  if (concurrent) {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  } else {
    worker();
  }
  if (concurrent) par::set_enabled(par_before);

  int worst = kExitPass;
  ordered_json index = ordered_json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    ordered_json over;
    for (const auto& [k, v] : jobs[i]) over[k] = v;
    index.push_back(ordered_json{{"dir", dirs[i]}, {"overrides", over}, {"exit", codes[i]}});
    std::ostream& os = opt.log ? *opt.log : std::cout;
    os << "--- job " << i << " [" << dirs[i] << "] exit " << codes[i] << "\n" << logs[i];
    worst = std::max(worst, codes[i]);
  }
  write_json(joined(opt.out_dir, "sweep_index.json"), index);
  return worst;
}

}  // namespace otlab::cli
