#include "lapnum/checks.hpp"
#include "lapnum/config.hpp"
#include "lapnum/io.hpp"
#include "lapnum/states.hpp"
#include "lapnum/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace lapnum;

namespace {

struct Outcome {
  std::string verdict;  // PASS, FAIL, INFO, WITHHELD or REFUSED
  std::string reason;
  Json result = Json::object();
};

bool acceptable(const std::string& v) { return v == "PASS" || v == "INFO"; }

struct Context {
  Config cfg;
  fs::path dir;
  RadialGrid grid;
  PotentialModel pot;
  std::uint64_t seed = 1;
  int workers = 1;

  double num(const std::string& key, double fallback) const { return get_double(cfg, key, fallback); }
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const {
    return get_doubles(cfg, key, fallback);
  }
  double r_end() const { return grid.r.maxCoeff(); }
  WeightFn weight(const std::string& slot) const { return weight_from(cfg, slot, pot, r_end()); }
  void csv(const std::string& name, const Csv& c) const {
    if (get_bool(cfg, "output.csv", true)) c.write(dir / name);
  }
};

int sign_of(const Context& c) {
  const int s = get_int(c.cfg, "suite.sign", 1);
  if (s != 1 && s != -1) throw ConfigError(c.cfg.origin + ": field 'suite.sign' expects 1 or -1");
  return s;
}

std::vector<CVec> state_set(const Context& c) {
  const std::string kind = get_string(c.cfg, "suite.states.kind", "gaussian_set");
  const int count = get_int(c.cfg, "suite.states.count", 3);
  if (kind == "gaussian_set")
    return gaussian_set(c.grid, count, c.seed, c.num("suite.states.max_centre", 16.0));
  if (kind == "wave_packets")
    return wave_packets(c.grid, count, c.seed, c.list("suite.lambda", {1.0}).front(),
                        c.num("suite.states.max_centre", 24.0));
  if (kind == "gaussian")
    return {gaussian_state(c.grid, c.num("suite.states.centre", 0.0), c.num("suite.states.width", 2.0),
                           c.num("suite.states.momentum", 0.0))};
  throw ConfigError(c.cfg.origin + ": field 'suite.states.kind' expects gaussian_set, wave_packets or gaussian");
}

PlateauOptions plateau_options(const Context& c) {
  PlateauOptions o;
  o.plateau_factor = c.num("suite.plateau_factor", o.plateau_factor);
  o.contrast_factor = c.num("suite.contrast_factor", o.contrast_factor);
  o.signs.clear();
  for (double s : c.list("suite.signs", {1.0})) o.signs.push_back(s < 0 ? -1 : 1);
  o.sweep.audit = get_bool(c.cfg, "suite.audit", true);
  o.sweep.workers = c.workers;
  return o;
}

Csv stats_csv(const PlateauStats& s) {
  Csv csv({"eps", "max_ratio", "control_max"});
  for (std::size_t i = 0; i < s.eps.size(); ++i)
    csv.row({cell(s.eps[i]), cell(s.max_ratio[i]), cell(i < s.control_max.size() ? s.control_max[i] : 0.0)});
  return csv;
}

Csv trend_csv(const EnvelopeReport& r) {
  Csv csv({"window", "r_w0", "w0_integral", "v_lr_max"});
  const std::size_t n = std::max({r.tail_decay.windows.size(), r.integral.windows.size(), r.v_lr_vanishing.windows.size()});
  auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? cell(v[i]) : std::string(); };
  for (std::size_t i = 0; i < n; ++i)
    csv.row({cell(static_cast<int>(i + 1)), at(r.tail_decay.windows, i), at(r.integral.windows, i),
             at(r.v_lr_vanishing.windows, i)});
  return csv;
}

Outcome validate_potential(const Context& c) {
  const EnvelopeReport r = validate_conditions(c.pot, c.grid);
  Outcome o;
  o.result = to_json(r);
  c.csv("envelope.csv", trend_csv(r));
  // the verdict is agreement between the measured trends and what the family claims
  const bool c1 = (r.condition1 == Verdict::Pass) == c.pot.claims_condition1;
  const bool c2 = (r.condition2 == Verdict::Pass) == c.pot.claims_condition2;
  o.verdict = c1 && c2 ? "PASS" : "FAIL";
  o.reason = std::string("condition1 ") + to_string(r.condition1) + " (claimed " +
             (c.pot.claims_condition1 ? "yes" : "no") + "), condition2 " + to_string(r.condition2) + " (claimed " +
             (c.pot.claims_condition2 ? "yes" : "no") + ")";
  return o;
}

Outcome operators(const Context& c) {
  OperatorCheckOptions opt;
  opt.extent = c.num("suite.ladder.extent", opt.extent);
  const std::vector<double> nodes = c.list("suite.ladder.nodes", {8193, 16385, 32769});
  opt.nodes.assign(nodes.begin(), nodes.end());
  opt.required_order = c.num("suite.ladder.required_order", opt.required_order);
  const OperatorCheckReport r = operators_check(c.pot, c.grid.dim, opt);
  Csv csv({"nodes", "spacing", "decomposition_residual", "dl_residual", "order_decomposition", "order_dl"});
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const LadderRow& row = r.rows[i];
    csv.row({cell(static_cast<int>(row.nodes)), cell(row.spacing), cell(row.decomposition), cell(row.dl),
             i ? cell(r.order_decomposition[i - 1]) : "", i ? cell(r.order_dl[i - 1]) : ""});
  }
  c.csv("ladder.csv", csv);
  Outcome o;
  o.verdict = to_string(r.verdict);
  o.reason = r.reason;
  Json rows = Json::array();
  for (const LadderRow& row : r.rows)
    rows.push_back(Json{{"nodes", row.nodes}, {"spacing", row.spacing}, {"decomposition", row.decomposition},
                        {"dl", row.dl}});
  o.result = Json{{"rows", rows}, {"order_decomposition", r.order_decomposition}, {"order_dl", r.order_dl},
                  {"min_order", r.min_order}};
  return o;
}

Outcome solve_cmd(const Context& c) {
  const double lambda = c.list("suite.lambda", {1.0}).front(), eps = c.list("suite.eps", {0.5}).front();
  const CVec psi = gaussian_state(c.grid, c.num("suite.states.centre", 0.0), c.num("suite.states.width", 0.5),
                                  c.num("suite.states.momentum", 0.0));
  const SolveResult s = solve(assemble_H(c.grid, c.pot), {lambda, eps, sign_of(c)}, psi);
  Csv csv({"x", "re_u", "im_u"});
  for (Eigen::Index j = 0; j < c.grid.size(); ++j)
    csv.row({cell(c.grid.coord[j]), cell(s.u[j].real()), cell(s.u[j].imag())});
  c.csv("solution.csv", csv);
  Outcome o;
  o.result = Json{{"lambda", lambda}, {"eps", eps}, {"sign", sign_of(c)}, {"residual", s.residual},
                  {"boundary", to_string(s.bc)}, {"condition_estimate", s.condition_estimate},
                  {"besov_star_u", dyadic_profile(c.grid, s.u).besov_star}, {"message", s.message}};
  const double tol = c.num("suite.residual_tol", 1e-8);
  bool ok = !s.failed && s.residual <= tol;
  std::ostringstream os;
  os << "relative residual " << s.residual << " (limit " << tol << ")";
  if (c.pot.name == "free" && c.grid.dim == 1 && eps > 0.0) {
    const double ktol = c.num("suite.kernel_tol", 1e-3);
    const double err = free_kernel_error(c.grid, Complex(lambda, sign_of(c) * eps), psi, s.u,
                                         c.num("suite.kernel_window", 10.0));
    o.result["kernel_error"] = err;
    ok = ok && err <= ktol;
    os << "; closed-form kernel error " << err << " (limit " << ktol << ")";
  }
  if (s.failed) os << "; " << s.message;
  o.verdict = ok ? "PASS" : "FAIL";
  o.reason = os.str();
  return o;
}

Outcome eps_sweep_cmd(const Context& c) {
  const std::vector<CVec> psis = state_set(c);
  SweepOptions so;
  so.workers = c.workers;
  const SweepRecord r = eps_sweep(c.pot, c.grid, c.list("suite.lambda", {1.0}).front(), sign_of(c), psis.front(),
                                  c.list("suite.eps", {1.0, 0.1, 0.01}), so);
  c.csv("sweep.csv", sweep_csv({r}));
  Outcome o;
  o.result = to_json(r);
  double lo = INFINITY, hi = 0.0;
  for (const SweepRow& row : r.rows) {
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  std::ostringstream os;
  os << "ratio range [" << lo << ", " << hi << "] over " << r.rows.size() << " eps values";
  if (r.truncation_limited) os << "; truncation-limited";
  o.verdict = r.truncation_limited ? "WITHHELD" : "INFO";
  o.reason = os.str();
  return o;
}

Outcome sommerfeld_cmd(const Context& c) {
  UniquenessOptions uo;
  uo.compare_radius = c.num("suite.compare_radius", uo.compare_radius);
  uo.sweep_extent = c.num("suite.sweep_extent", 0.0);
  uo.workers = c.workers;
  const CVec psi = gaussian_state(c.grid, c.num("suite.states.centre", 0.0), c.num("suite.states.width", 2.0),
                                  c.num("suite.states.momentum", 0.0));
  const UniquenessReport r =
      uniqueness_compare(c.pot, c.grid, c.list("suite.lambda", {1.0}).front(), sign_of(c), psi,
                         c.list("suite.eps", {0.016, 0.008, 0.004, 0.002}), c.weight("h"), uo);
  Outcome o;
  o.result = to_json(r);
  const double tol = c.num("suite.tolerance", 1e-2);
  const bool ok = r.accepted && r.discrepancy <= tol && r.tail_radiation == TailClass::BStar0 &&
                  r.tail_u == TailClass::BStarOnly;
  std::ostringstream os;
  os << "interior B* discrepancy " << r.discrepancy << " (limit " << tol << ", " << r.comparison << ")"
     << "; tail h(A-a)u " << to_string(r.tail_radiation) << ", tail u " << to_string(r.tail_u);
  if (!r.refusal.empty()) os << "; " << r.refusal;
  o.verdict = ok ? "PASS" : "FAIL";
  o.reason = os.str();
  return o;
}

Outcome lap_cmd(const Context& c) {
  const LapSuiteReport r = lap_suite(c.pot, c.grid, c.list("suite.lambda", {1.0, 2.0}), state_set(c),
                                     c.list("suite.eps", {1, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001}), plateau_options(c));
  c.csv("sweeps.csv", sweep_csv(r.sweeps));
  c.csv("plateau.csv", stats_csv(r.stats));
  return {to_string(r.verdict), r.reason, to_json(r)};
}

Outcome radiation_cmd(const Context& c) {
  const WeightFn h = c.weight("h");
  const RadiationSuiteReport r =
      radiation_suite(c.pot, c.grid, c.list("suite.lambda", {1.0, 2.0}), state_set(c),
                      c.list("suite.eps", {1, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001}), h,
                      get_double(c.cfg, "weights.h.beta0", c.num("suite.beta0", 0.9)), plateau_options(c));
  c.csv("sweeps.csv", sweep_csv(r.sweeps));
  c.csv("plateau.csv", stats_csv(r.stats));
  c.csv("h.csv", weight_csv(h, c.r_end()));
  return {to_string(r.verdict), r.reason, to_json(r)};
}

Outcome smoothing_cmd(const Context& c) {
  SmoothingOptions so;
  so.plateau_factor = c.num("suite.plateau_factor", so.plateau_factor);
  so.max_iter = get_int(c.cfg, "suite.max_iter", so.max_iter);
  so.tol = c.num("suite.tol", so.tol);
  so.seed = c.seed;
  so.workers = c.workers;
  const SmoothingReport r = smoothing_suite(c.pot, c.grid, c.list("suite.lambda", {1.0}), c.weight("w"),
                                            c.weight("w2"), c.list("suite.eps", {0.3, 0.1, 0.03}), so);
  Csv csv({"lambda", "sign", "eps", "item", "norm"});
  for (const SmoothingRow& row : r.rows)
    for (const auto& [item, v] : row.norms) csv.row({cell(row.lambda), cell(row.sign), cell(row.eps), item, cell(v)});
  c.csv("smoothing.csv", csv);
  return {to_string(r.verdict), r.reason, to_json(r)};
}

Outcome hoelder_cmd(const Context& c) {
  HoelderOptions ho;
  ho.stability_factor = c.num("suite.stability_factor", ho.stability_factor);
  ho.target_slope = c.num("suite.target_slope", ho.target_slope);
  ho.slope_tol = c.num("suite.slope_tol", ho.slope_tol);
  ho.max_iter = get_int(c.cfg, "suite.max_iter", ho.max_iter);
  ho.tol = c.num("suite.tol", ho.tol);
  ho.extrapolate_domain = get_bool(c.cfg, "suite.extrapolate_domain", ho.extrapolate_domain);
  ho.inner_fraction = c.num("suite.inner_fraction", ho.inner_fraction);
  ho.seed = c.seed;
  ho.workers = c.workers;
  std::vector<double> deltas = c.list("suite.deltas", {});
  if (deltas.empty()) {
    const double lo = c.num("suite.delta_min", 1e-3), hi = c.num("suite.delta_max", 1.0);
    const int n = get_int(c.cfg, "suite.delta_count", 13);
    if (n < 2 || !(lo > 0.0 && hi > lo)) throw ConfigError(c.cfg.origin + ": suite.delta_* must give a positive range");
    for (int i = 0; i < n; ++i) deltas.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  }
  const HoelderReport r = hoelder_suite(c.pot, c.grid, c.list("suite.lambda", {1.0}).front(), c.weight("w"),
                                        c.weight("h"), c.num("suite.beta0", 0.5), deltas, ho);
  Csv csv({"delta", "difference", "difference_outer", "difference_inner", "fitted_c", "iterations"});
  for (const HoelderRow& row : r.rows)
    csv.row({cell(row.delta), cell(row.difference), cell(row.difference_outer), cell(row.difference_inner),
             cell(row.fitted_c), cell(row.iterations)});
  c.csv("hoelder.csv", csv);
  return {to_string(r.verdict), r.reason, to_json(r)};
}

Outcome rellich_cmd(const Context& c) {
  RellichOptions ro;
  ro.lambda_min = c.num("suite.lambda_min", ro.lambda_min);
  ro.lambda_max = c.num("suite.lambda_max", ro.lambda_max);
  ro.dlambda = c.num("suite.dlambda", ro.dlambda);
  ro.x_end = c.num("suite.x_end", ro.x_end);
  ro.x_start_fraction = c.num("suite.x_start_fraction", ro.x_start_fraction);
  ro.step = c.num("suite.step", ro.step);
  ro.flag_gamma = c.num("suite.flag_gamma", ro.flag_gamma);
  ro.bound_states = get_bool(c.cfg, "suite.bound_states", ro.bound_states);
  ro.bound_extent = c.num("suite.bound_extent", ro.bound_extent);
  ro.workers = c.workers;
  const RellichReport r = rellich_scan(c.pot, c.grid.dim, ro);
  Csv csv({"lambda", "gamma", "failed"});
  for (const RellichPoint& p : r.scan) csv.row({cell(p.lambda), cell(p.gamma), cell(p.failed ? 1 : 0)});
  c.csv("rellich.csv", csv);
  return {to_string(r.verdict), r.reason, to_json(r)};
}

Outcome commutator_cmd(const Context& c) {
  CommutatorOptions co;
  co.lemma = lemma_from_string(get_string(c.cfg, "suite.lemma", "key1"));
  co.lambda = c.list("suite.lambda", {1.0}).front();
  co.eps = c.list("suite.eps", {0.01}).front();
  co.sign = sign_of(c);
  co.K = c.num("suite.K", co.K);
  co.beta = c.num("suite.beta", co.beta);
  co.c_cap = c.num("suite.c_cap", co.c_cap);
  co.gating = get_bool(c.cfg, "suite.gating", co.gating);
  const CommutatorReport r = commutator_diagnostic(c.pot, c.grid, c.weight("f"), state_set(c), co);
  Csv csv({"state", "lhs", "positive", "fixed", "error", "c", "c_needed", "trivial", "excluded"});
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    const CommutatorState& s = r.states[i];
    csv.row({cell(static_cast<int>(i)), cell(s.lhs), cell(s.positive), cell(s.fixed), cell(s.error), cell(s.c),
             cell(s.c_needed), cell(s.trivial ? 1 : 0), cell(s.excluded ? 1 : 0)});
  }
  c.csv("commutator.csv", csv);
  std::ostringstream os;
  os << to_string(co.lemma) << ": c_min " << r.c_min << " at C = " << co.c_cap << ", smallest common C "
     << r.c_common;
  Outcome o{to_string(r.verdict), os.str(), to_json(r)};
  o.result["lemma"] = to_string(co.lemma);
  return o;
}

// Aggregates the newest run per command found under the output root.
Outcome report_cmd(const fs::path& root, const fs::path& self) {
  std::map<std::string, std::pair<std::string, Json>> latest;
  std::vector<fs::path> dirs;
  if (fs::exists(root))
    for (const auto& e : fs::directory_iterator(root))
      if (e.is_directory() && e.path() != self && fs::exists(e.path() / "verdicts.json")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& d : dirs) {
    std::ifstream in(d / "verdicts.json");
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("command") || j["command"] == "report") continue;
    latest[j["command"].get<std::string>() + "/" + j.value("potential", std::string())] = {d.filename().string(), j};
  }
  Outcome o;
  o.verdict = latest.empty() ? "FAIL" : "PASS";
  Json runs = Json::array();
  int bad = 0;
  for (const auto& [key, v] : latest) {
    const std::string verdict = v.second.value("verdict", std::string("FAIL"));
    if (!acceptable(verdict)) ++bad;
    runs.push_back(Json{{"run", v.first},
                        {"command", v.second.value("command", std::string())},
                        {"potential", v.second.value("potential", std::string())},
                        {"verdict", verdict},
                        {"reason", v.second.value("reason", std::string())}});
  }
  if (bad > 0) o.verdict = "FAIL";
  o.reason = std::to_string(latest.size()) + " suite run(s) aggregated, " + std::to_string(bad) + " not passing";
  if (latest.empty()) o.reason = "no runs found under " + root.string();
  o.result["runs"] = runs;
  return o;
}

const std::map<std::string, std::function<Outcome(const Context&)>>& commands() {
  static const std::map<std::string, std::function<Outcome(const Context&)>> table{
      {"validate-potential", validate_potential}, {"operators-check", operators},
      {"solve", solve_cmd},                       {"eps-sweep", eps_sweep_cmd},
      {"sommerfeld-compare", sommerfeld_cmd},     {"lap", lap_cmd},
      {"smoothing", smoothing_cmd},               {"radiation", radiation_cmd},
      {"hoelder", hoelder_cmd},                   {"rellich-scan", rellich_cmd},
      {"commutator-diag", commutator_cmd},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for resolvent estimates of Schroedinger operators"};
  std::string command, config_path, out_dir;
  std::vector<std::string> overrides;
  std::int64_t seed = -1;
  int workers = 0;
  std::vector<std::string> names{"report"};
  for (const auto& [name, fn] : commands()) names.push_back(name);
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "YAML configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override key=value (dotted key, repeatable)");
  app.add_option("--out", out_dir, "Output root (default: output.dir or runs)");
  app.add_option("--seed", seed, "Random seed for state ensembles and power iteration")->check(CLI::NonNegativeNumber);
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  Context ctx;
  fs::path root;
  try {
    ctx.cfg = config_path.empty() ? load_config_text("", "<defaults>") : load_config_file(config_path);
    for (const std::string& s : overrides) apply_override(ctx.cfg, s);
    if (seed >= 0) apply_override(ctx.cfg, "suite.seed=" + std::to_string(seed));
    if (workers > 0) apply_override(ctx.cfg, "suite.workers=" + std::to_string(workers));
    ctx.seed = static_cast<std::uint64_t>(get_int(ctx.cfg, "suite.seed", 1));
    ctx.workers = std::max(1, get_int(ctx.cfg, "suite.workers", 1));
    root = out_dir.empty() ? fs::path(get_string(ctx.cfg, "output.dir", "runs")) : fs::path(out_dir);
    if (command != "report") {
      ctx.grid = grid_from(ctx.cfg);
      ctx.pot = potential_from(ctx.cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    ctx.dir = make_run_dir(root, command);
  } catch (const std::exception& e) {
    std::cerr << "error: cannot create run directory: " << e.what() << "\n";
    return 2;
  }
  write_text(ctx.dir / "config.yaml", std::string("# schema_version: ") + kSchemaVersion + "\n" + snapshot(ctx.cfg));

  Outcome o;
  try {
    o = command == "report" ? report_cmd(root, ctx.dir) : commands().at(command)(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Refusal& e) {
    o.verdict = "REFUSED";
    o.reason = e.what();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  if (command != "report") {
    doc["potential"] = ctx.pot.name;
    doc["grid"] = Json{{"dim", ctx.grid.dim}, {"extent", ctx.grid.extent}, {"spacing", ctx.grid.spacing},
                       {"nodes", ctx.grid.size()}};
    doc["seed"] = ctx.seed;
  }
  doc["verdict"] = o.verdict;
  doc["reason"] = o.reason;
  doc["result"] = o.result;
  write_json(ctx.dir / "verdicts.json", doc);
  std::cout << o.verdict << " " << command << ": " << o.reason << "\n" << "run directory: " << ctx.dir.string() << "\n";
  return acceptable(o.verdict) ? 0 : 1;
}
