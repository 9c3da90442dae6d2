#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "lltorus/compare.hpp"
#include "lltorus/diagnostics.hpp"
#include "lltorus/io.hpp"
#include "lltorus/parametrix.hpp"
#include "lltorus/spectral.hpp"

namespace lltorus::cli {

namespace {
using json = nlohmann::json;

struct Common {
  std::string config, out, summary;
  unsigned seed = 1;
};

struct Context {
  Common common;
  bool seed_given = false;
  ExperimentConfig cfg;

  void load() {
    cfg = common.config.empty() ? ExperimentConfig{} : load_config(common.config);
    if (seed_given) cfg.seed = common.seed;
    default_tolerances() = cfg.tolerances;
  }
  std::string out_path() const { return common.out.empty() ? cfg.output.csv : common.out; }
  std::string summary_path() const { return common.summary.empty() ? cfg.output.summary : common.summary; }
};

Error config_error(const std::string& what) { return Error(ErrorKind::Config, "cli_runner", what); }

std::string csv_text(const CsvTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cli_runner", "cannot write file").with("path", path);
  out << text;
}

// CSV to --out (or stdout); the JSON summary to --summary, or to stdout when
// stdout is not already carrying the CSV.
void emit(const Context& ctx, const std::optional<std::string>& csv, const json& summary) {
  const std::string out = ctx.out_path(), sum = ctx.summary_path();
  if (csv) {
    if (out.empty())
      std::cout << *csv;
    else
      write_text(out, *csv);
  }
  const std::string s = summary.dump(2) + "\n";
  if (!sum.empty())
    write_text(sum, s);
  else if (!csv || !out.empty())
    std::cout << s;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

struct Source {
  ReflectionFn fn;
  std::optional<ScatteringData> data;  // sampled sources fix the contour grid
};

Source reflection_source(const Torus& T, const ExperimentConfig& cfg) {
  Source s;
  const auto& r = cfg.reflection;
  if (r.source == "synthetic") {
    s.fn = synthetic_reflection(r.c, r.s, T);
    return s;
  }
  if (r.source == "field") {
    ScatteringData d = compute_scattering(T, read_spin_field(r.path), r.nodes);
    reflection(d);
    s.data = std::move(d);
  } else {
    s.data = read_scattering(r.path, T);
  }
  s.fn = reflection_interpolant(s.data->grid, s.data->r);
  return s;
}

ContourSystem system_for(const Torus& T, const Source& src, const ExperimentConfig& cfg, double x, double t) {
  if (src.data) {
    if (cfg.grid.nodes && cfg.grid.nodes != src.data->grid.n)
      throw config_error("grid.nodes differs from the node count of the sampled reflection")
          .with("nodes", double(cfg.grid.nodes))
          .with("sampled", double(src.data->grid.n));
    return make_contour_system(T, src.data->grid.n);
  }
  const int n = cfg.grid.nodes ? cfg.grid.nodes
                               : resolve_mesh(T, src.fn, t, t > 0 ? x / t : x, cfg.grid.points_per_wavelength).n;
  return make_contour_system(T, n);
}

ReflectionSamples samples_for(const Source& src, const ContourSystem& cs) {
  return src.data ? interpolate_reflection(cs.grid, src.data->r) : sample_reflection(cs.grid, src.fn);
}

// ---------------------------------------------------------------- commands

int elliptic_check(Context& ctx, const std::vector<double>& ks, int points, double rho) {
  ctx.load();
  std::ostringstream csv;
  csv << "k,identity,residual,tolerance,pass\n";
  bool all = true;
  json worst = json::object();
  for (double k : ks) {
    const AnisotropyParams p = AnisotropyParams::from_modulus(k, rho);
    const Torus T(p, ctx.cfg.tolerances);
    const auto checks = elliptic_identity_suite(T, random_torus_points(p, points, ctx.cfg.seed));
    for (const auto& c : checks) {
      csv << format_number(k) << ',' << c.name << ',' << format_number(c.residual) << ',' << format_number(c.tolerance)
          << ',' << (c.pass() ? 1 : 0) << '\n';
      all = all && c.pass();
      if (!worst.contains(c.name) || worst[c.name].get<double>() < c.residual) worst[c.name] = c.residual;
    }
  }
  emit(ctx, csv.str(), json{{"command", "elliptic-check"}, {"pass", all}, {"points", points}, {"seed", ctx.cfg.seed},
                            {"worst_residual", worst}});
  return all ? 0 : 1;
}

int stationary_point(Context& ctx, std::optional<double> kappa, std::optional<double> k, std::optional<double> rho) {
  ctx.load();
  AnisotropyParams p = ctx.cfg.params;
  if (k || rho) p = AnisotropyParams::from_modulus(k.value_or(p.k), rho.value_or(p.rho));
  const double kap = kappa.value_or(ctx.cfg.kappa);
  const Torus T(p, ctx.cfg.tolerances);
  const StationaryPointResult s = find_lambda0(T, kap);
  emit(ctx, std::nullopt,
       json{{"kappa", kap}, {"k", p.k}, {"rho", p.rho}, {"lambda0", s.lambda0}, {"p_lambda0", s.p_at}, {"phi0", s.phi0},
            {"dp_residual", s.residual}});
  return 0;
}

int scatter(Context& ctx, const std::string& init, std::optional<int> nodes) {
  ctx.load();
  const Torus T(ctx.cfg.params, ctx.cfg.tolerances);
  const int n = nodes.value_or(ctx.cfg.reflection.nodes);
  if (n < 4 || n % 2) throw config_error("node count must be even and at least 4").with("nodes", double(n));
  ScatteringData d = compute_scattering(T, read_spin_field(init), n);
  reflection(d);
  double unitarity = 0;
  for (std::size_t j = 0; j < d.a.size(); ++j)
    if (distance_to_lattice(d.grid.nodes[j], T.params()).distance > T.tolerances().guard_radius && j < std::size_t(n))
      unitarity = std::max(unitarity, std::abs(std::norm(d.a[j]) + std::norm(d.b[j]) - 1.0));
  CsvTable t;
  t.header = {"re_lambda", "im_lambda", "re_a", "im_a", "re_b", "im_b", "re_r", "im_r"};
  for (std::size_t j = 0; j < d.grid.nodes.size(); ++j)
    t.rows.push_back({d.grid.nodes[j].real(), d.grid.nodes[j].imag(), d.a[j].real(), d.a[j].imag(), d.b[j].real(),
                      d.b[j].imag(), d.r[j].real(), d.r[j].imag()});
  emit(ctx, csv_text(t),
       json{{"command", "scatter"}, {"nodes", n}, {"winding", d.winding}, {"soliton_free", d.soliton_free},
            {"unitarity_defect_gamma1", unitarity}});
  return 0;
}

int evolve(Context& ctx, const std::string& in, double t) {
  ctx.load();
  const Torus T(ctx.cfg.params, ctx.cfg.tolerances);
  const ScatteringData d = evolve_scattering(T, read_scattering(in, T), t);
  const std::string out = ctx.out_path();
  if (out.empty()) throw config_error("evolve needs --out");
  write_scattering(out, d);
  emit(ctx, std::nullopt, json{{"command", "evolve"}, {"t", t}, {"nodes", d.grid.n}});
  return 0;
}

int rhp_solve(Context& ctx, std::optional<double> x, std::optional<double> t) {
  ctx.load();
  std::vector<std::pair<double, double>> pts = ctx.cfg.points;
  if (x || t) {
    if (!(x && t)) throw config_error("--x and --t go together");
    pts = {{*x, *t}};
  }
  if (pts.empty()) throw config_error("no (x, t) points: set points in the config or pass --x and --t");
  const Torus T(ctx.cfg.params, ctx.cfg.tolerances);
  const Source src = reflection_source(T, ctx.cfg);
  CsvTable table;
  table.header = {"x", "t", "L1", "L2", "L3", "det_residual", "jump_residual"};
  double worst_jump = 0, worst_det = 0;
  for (const auto& [px, pt] : pts) {
    const ContourSystem cs = system_for(T, src, ctx.cfg, px, pt);
    const PointResult p = rhp_point(T, cs, samples_for(src, cs), px, pt);
    table.rows.push_back({px, pt, p.L.L1, p.L.L2, p.L.L3, p.det_residual, p.jump_residual});
    worst_jump = std::max(worst_jump, p.jump_residual);
    worst_det = std::max(worst_det, p.det_residual);
  }
  emit(ctx, csv_text(table),
       json{{"command", "rhp-solve"}, {"points", pts.size()}, {"max_jump_residual", worst_jump}, {"max_det_residual", worst_det}});
  return 0;
}

int asymptotics(Context& ctx, std::optional<double> kappa, std::vector<double> ts) {
  ctx.load();
  const double kap = kappa.value_or(ctx.cfg.kappa);
  if (ts.empty()) ts = ctx.cfg.t_list;
  if (ts.empty()) throw config_error("no times: pass --t-list or set t_list in the config");
  const Torus T(ctx.cfg.params, ctx.cfg.tolerances);
  const Source src = reflection_source(T, ctx.cfg);
  const AsymptoticInputs in = make_inputs(T, kap, src.fn);
  CsvTable table;
  table.header = {"t", "x", "L1", "L2", "L3", "theta", "nu", "lambda0", "phi0", "c0_re", "c0_im"};
  for (double t : ts) {
    if (!(t > 0)) throw config_error("times must be positive").with("t", t);
    const AsymptoticL a = asymptotic_L(kap * t, t, in);
    table.rows.push_back({t, kap * t, a.L1, a.L2, a.L3, a.theta, in.nu, in.lambda0, in.phi0, in.c0.real(), in.c0.imag()});
  }
  emit(ctx, csv_text(table),
       json{{"command", "asymptotics"}, {"kappa", kap}, {"nu", in.nu}, {"lambda0", in.lambda0}, {"phi0", in.phi0},
            {"p0", in.p0}, {"r0", complex_json(in.r0)}, {"c0", complex_json(in.c0)}});
  return 0;
}

int parametrix_check(Context& ctx, double nu, std::vector<double> ts, std::optional<double> kappa, double radius) {
  ctx.load();
  if (!(nu > 0)) throw config_error("nu must be positive").with("nu", nu);
  if (ctx.cfg.reflection.source != "synthetic") throw config_error("parametrix-check scales the synthetic reflection");
  if (ts.empty()) ts = ctx.cfg.t_list;
  if (ts.empty()) throw config_error("no times: pass --t-list or set t_list in the config");
  const double kap = kappa.value_or(ctx.cfg.kappa);
  const Torus T(ctx.cfg.params, ctx.cfg.tolerances);
  // pick c so that nu(|r(lambda0)|) is the requested value
  const double lambda0 = find_lambda0(T, kap).lambda0;
  const double unit = std::abs(synthetic_reflection(1.0, ctx.cfg.reflection.s, T)(lambda0));
  const double c = std::sqrt(std::expm1(2.0 * std::numbers::pi * nu)) / unit;
  const ReflectionFn r = synthetic_reflection(c, ctx.cfg.reflection.s, T);
  const AsymptoticInputs in = make_inputs(T, kap, r);
  CsvTable table;
  table.header = {"t", "nu", "jump_residual", "jump_radius_drift", "matching", "leading_residual", "printed_leading_residual"};
  for (double t : ts) {
    if (!(t > 0)) throw config_error("times must be positive").with("t", t);
    const ParabolicParams P = make_parabolic_params(in.r0, in.p0, t);
    double jump = 0, drift = 0;
    for (int k = 0; k < 5; ++k) {
      const ComplexMatrix2 J1 = dab_ray_jump(P, k, 1.0), J3 = dab_ray_jump(P, k, 3.0);
      jump = std::max(jump, max_abs(J1 - dab_expected_jump(P, k)));
      drift = std::max(drift, max_abs(J3 - J1));
    }
    const GRCircle g = gr_circle(T, t, in, r, radius);
    table.rows.push_back({t, in.nu, jump, drift, g.matching, g.err_minus, g.err_printed});
  }
  emit(ctx, csv_text(table),
       json{{"command", "parametrix-check"}, {"nu", in.nu}, {"c", c}, {"kappa", kap}, {"radius", radius}});
  return 0;
}

int pde_run(Context& ctx, const std::string& init, double t, std::optional<double> dx, const std::vector<double>& checkpoints,
            const std::string& prefix) {
  ctx.load();
  PdeControls c;
  c.dx = dx.value_or(ctx.cfg.grid.pde_dx);
  c.checkpoints = checkpoints;
  const SimulationState s = ll_evolve(ctx.cfg.params, read_spin_field(init), t, c);
  const std::string out = ctx.out_path();
  if (out.empty()) throw config_error("pde-run needs --out");
  write_spin_field(out, s.field);
  json cps = json::array();
  for (const auto& [tc, f] : s.checkpoints) {
    if (prefix.empty()) throw config_error("checkpoints need --checkpoint-prefix");
    char name[64];
    std::snprintf(name, sizeof name, "_t%.6g.csv", tc);
    write_spin_field(prefix + name, f);
    cps.push_back(prefix + name);
  }
  const PdeMonitors& m = s.monitors;
  emit(ctx, std::nullopt,
       json{{"command", "pde-run"},
            {"scheme", s.scheme},
            {"t", s.t},
            {"dt", s.dt},
            {"dx", s.dx},
            {"steps", s.steps},
            {"X", s.field.X()},
            {"speed", s.speed},
            {"max_norm_defect", m.max_norm_defect},
            {"energy", {m.energy0, m.energy}},
            {"energy_drift_rate", m.energy_drift_rate},
            {"energy_within_bound", m.energy_within_bound},
            {"momentum_drift_rate", m.momentum_drift_rate},
            {"translation_momentum_drift_rate", m.tmomentum_drift_rate},
            {"checkpoints", cps}});
  return 0;
}

int compare(Context& ctx, const std::string& mode, std::optional<double> t_pde, std::vector<double> kappas) {
  ctx.load();
  const Torus T(ctx.cfg.params, ctx.cfg.tolerances);
  const Source src = reflection_source(T, ctx.cfg);
  if (mode == "rhp-vs-asymptotics") {
    if (src.data) throw config_error("rhp-vs-asymptotics resolves the mesh per t and needs the synthetic reflection");
    std::vector<double> ts = ctx.cfg.t_list;
    if (ts.size() < 2) throw config_error("rhp-vs-asymptotics needs at least two times in t_list");
    RhpSettings s;
    s.points_per_wavelength = ctx.cfg.grid.points_per_wavelength;
    const RhpComparison c = compare_rhp_asymptotics(T, src.fn, ctx.cfg.kappa, ts, s);
    CsvTable table;
    table.header = {"t", "x", "nodes", "L1_rhp", "L2_rhp", "L3_rhp", "L1_asym", "L2_asym", "L3_asym",
                    "res1", "res2", "res3", "amplitude", "jump_residual"};
    double worst_ratio = 0;
    for (const auto& row : c.rows) {
      table.rows.push_back({row.t, row.x, double(row.nodes), row.rhp.L1, row.rhp.L2, row.rhp.L3, row.asym.L1,
                            row.asym.L2, row.asym.L3, row.residual[0], row.residual[1], row.residual[2],
                            row.asym.amplitude, row.jump_residual});
      worst_ratio = std::max(worst_ratio, row.sup / row.asym.amplitude);
    }
    emit(ctx, csv_text(table),
         json{{"command", "compare"},
              {"mode", mode},
              {"kappa", ctx.cfg.kappa},
              {"slope", {c.fits[0].slope, c.fits[1].slope, c.fits[2].slope}},
              {"sup_slope", c.sup_fit.slope},
              {"sup_intercept", c.sup_fit.intercept},
              {"max_residual_over_amplitude", worst_ratio}});
    return 0;
  }
  if (mode == "pde-vs-asymptotics") {
    const double t = t_pde.value_or(40.0);
    if (kappas.empty()) kappas = {0.9, 0.95, 1.0, 1.05, 1.1};
    const SpinField init = field_from_reflection(T, src.fn, ctx.cfg.grid.x_max, ctx.cfg.grid.dx);
    PdeControls pc;
    pc.dx = ctx.cfg.grid.pde_dx;
    pc.spectrum_tol = 1e-4;
    const PdeComparison c = compare_pde_asymptotics(T, src.fn, init, t, kappas, pc);
    CsvTable table;
    table.header = {"x", "t", "L1_pde", "L2_pde", "L3_pde", "L1_asym", "L2_asym", "L3_asym", "sup"};
    for (const auto& row : c.rows)
      table.rows.push_back({row.x, t, row.pde(0), row.pde(1), row.pde(2), row.asym.L1, row.asym.L2, row.asym.L3, row.sup});
    emit(ctx, csv_text(table),
         json{{"command", "compare"}, {"mode", mode}, {"t", t}, {"sup_error", c.sup},
              {"energy_drift_rate", c.state.monitors.energy_drift_rate}, {"X", c.state.field.X()}});
    return 0;
  }
  throw config_error("unknown compare mode").with("mode", mode);
}

int fail(const Error& e) {
  std::cerr << error_json(e) << '\n';
  return e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Io ? 2 : 1;
}
}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Landau-Lifshitz on the torus: scattering, Riemann-Hilbert, asymptotics and PDE checks"};
  app.require_subcommand(1);
  Context ctx;
  app.add_option("--config", ctx.common.config, "JSON experiment config");
  app.add_option("--out", ctx.common.out, "CSV output path (default stdout)");
  app.add_option("--summary", ctx.common.summary, "JSON summary path");
  auto* seed = app.add_option("--seed", ctx.common.seed, "seed for random sample points");

  std::function<int()> action;

  auto* ec = app.add_subcommand("elliptic-check", "identity residuals of w_j, zeta and the kernel");
  std::vector<double> ks{0.3, 0.5, 0.8};
  int npoints = 200;
  double rho = 1.0;
  ec->add_option("--k", ks, "moduli");
  ec->add_option("--points", npoints, "random torus points per modulus")->check(CLI::PositiveNumber);
  ec->add_option("--rho", rho)->check(CLI::PositiveNumber);
  ec->callback([&] { action = [&] { return elliptic_check(ctx, ks, npoints, rho); }; });

  auto* sp = app.add_subcommand("stationary-point", "lambda0, p(lambda0) and phi0 as JSON");
  std::optional<double> sp_kappa, sp_k, sp_rho;
  sp->add_option("--kappa", sp_kappa);
  sp->add_option("--k", sp_k);
  sp->add_option("--rho", sp_rho);
  sp->callback([&] { action = [&] { return stationary_point(ctx, sp_kappa, sp_k, sp_rho); }; });

  auto* sc = app.add_subcommand("scatter", "scattering data of a spin field CSV");
  std::string sc_init;
  std::optional<int> sc_nodes;
  sc->add_option("--init", sc_init, "spin field CSV (x, L1, L2, L3)")->required();
  sc->add_option("--nodes", sc_nodes, "contour nodes per line");
  sc->callback([&] { action = [&] { return scatter(ctx, sc_init, sc_nodes); }; });

  auto* ev = app.add_subcommand("evolve", "time evolution of scattering data");
  std::string ev_in;
  double ev_t = 0;
  ev->add_option("--in", ev_in, "scattering CSV")->required();
  ev->add_option("--t", ev_t)->required();
  ev->callback([&] { action = [&] { return evolve(ctx, ev_in, ev_t); }; });

  auto* rs = app.add_subcommand("rhp-solve", "numerical Riemann-Hilbert solution at (x, t) points");
  std::optional<double> rs_x, rs_t;
  rs->add_option("--x", rs_x);
  rs->add_option("--t", rs_t);
  rs->callback([&] { action = [&] { return rhp_solve(ctx, rs_x, rs_t); }; });

  auto* as = app.add_subcommand("asymptotics", "leading-order L at x = kappa t");
  std::optional<double> as_kappa;
  std::vector<double> as_ts;
  as->add_option("--kappa", as_kappa);
  as->add_option("--t-list", as_ts);
  as->callback([&] { action = [&] { return asymptotics(ctx, as_kappa, as_ts); }; });

  auto* pc = app.add_subcommand("parametrix-check", "D_ab ray jumps and local matching residuals");
  double pc_nu = 0, pc_radius = 0.3;
  std::vector<double> pc_ts;
  std::optional<double> pc_kappa;
  pc->add_option("--nu", pc_nu)->required();
  pc->add_option("--t-list", pc_ts);
  pc->add_option("--kappa", pc_kappa);
  pc->add_option("--radius", pc_radius, "circle around lambda0 for the matching")->check(CLI::PositiveNumber);
  pc->callback([&] { action = [&] { return parametrix_check(ctx, pc_nu, pc_ts, pc_kappa, pc_radius); }; });

  auto* pr = app.add_subcommand("pde-run", "direct Landau-Lifshitz integration");
  std::string pr_init, pr_prefix;
  double pr_t = 0;
  std::optional<double> pr_dx;
  std::vector<double> pr_cps;
  pr->add_option("--init", pr_init, "spin field CSV")->required();
  pr->add_option("--t", pr_t)->required();
  pr->add_option("--dx", pr_dx);
  pr->add_option("--checkpoints", pr_cps, "times at which to write the field");
  pr->add_option("--checkpoint-prefix", pr_prefix);
  pr->callback([&] { action = [&] { return pde_run(ctx, pr_init, pr_t, pr_dx, pr_cps, pr_prefix); }; });

  auto* cm = app.add_subcommand("compare", "residual tables against the asymptotic formula");
  std::string cm_mode;
  std::optional<double> cm_t;
  std::vector<double> cm_kappas;
  cm->add_option("--mode", cm_mode, "rhp-vs-asymptotics | pde-vs-asymptotics")->required();
  cm->add_option("--t", cm_t, "final time of the PDE comparison");
  cm->add_option("--kappa-list", cm_kappas);
  cm->callback([&] { action = [&] { return compare(ctx, cm_mode, cm_t, cm_kappas); }; });

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(Error(ErrorKind::Config, "cli_runner", e.what()));
  }
  ctx.seed_given = seed->count() > 0;
  try {
    return action();
  } catch (const Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(Error(ErrorKind::Consistency, "cli_runner", e.what()));
  }
}

}  // namespace lltorus::cli
