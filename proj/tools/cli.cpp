#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "bv/bv.hpp"

namespace bv::cli {
namespace {

using nlohmann::json;

struct Globals {
  std::string config_path;
  std::string out_path;
  long long seed = 20240611;
  unsigned threads = 0;
  double tol = 1e-10;
};

class Context {
 public:
  Context(const Globals& g, std::ostream& out, std::ostream& err) : globals(g), out_(out), err_(err) {
    config = g.config_path.empty() ? RunConfig{validate_config(3, 2.0, 3.0), GridSpec{}, {}}
                                   : load_config(g.config_path);
    manifest.config_path = g.config_path;
    manifest.seed = g.seed;
  }

  /// Primary output: the --out file (plus manifest) or stdout.
  void emit(const std::string& content) {
    if (globals.out_path.empty()) {
      out_ << content;
      return;
    }
    std::ofstream f(globals.out_path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + globals.out_path);
    f << content;
    manifest.outputs.insert(manifest.outputs.begin(), globals.out_path);
    write_manifest(manifest, manifest_path(globals.out_path));
  }

  /// Secondary file output, recorded in the manifest.
  void side_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    f << content;
    manifest.outputs.push_back(path);
  }

  std::ostream& log() { return globals.out_path.empty() ? err_ : out_; }

  RadialGrid grid() const { return RadialGrid::geometric(config.grid); }
  unsigned threads() const { return resolve_threads(globals.threads); }

  Globals globals;
  RunConfig config;
  RunManifest manifest;

 private:
  std::ostream& out_;
  std::ostream& err_;
};

std::string csv(const std::vector<std::string>& header, const std::vector<std::span<const double>>& columns) {
  std::ostringstream ss;
  write_csv(ss, header, columns);
  return ss.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json outcome_json(const ShootOutcome& o) {
  json j{{"kind", to_string(o.kind)}, {"at_r", o.at_r}, {"diagnostics", o.diagnostics}};
  if (o.failed) j["failed"] = to_string(*o.failed);
  j["crossing_r"] = o.crossing_r ? json(*o.crossing_r) : json(nullptr);
  return j;
}

BubbleParams bubble_from(const Context& ctx, double t, std::vector<double> center) {
  return make_bubble(ctx.config.exponents, std::move(center), t);
}

std::vector<double> power_of_bubble(const BubbleParams& b, const RadialGrid& grid, double power) {
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = std::pow(eval_bubble_radial(b, grid[i]), power);
  return f;
}

// ---- bubble ---------------------------------------------------------------

struct BubbleArgs {
  double t = 1.0;
  std::vector<double> center;
  std::vector<double> x;
  int stencil = 7;
};

int bubble_eval(Context& ctx, const BubbleArgs& a) {
  const auto b = bubble_from(ctx, a.t, a.center);
  if (a.x.size() != static_cast<std::size_t>(b.n)) {
    throw Error(ErrorCode::InvalidArgument, "--x needs n = " + std::to_string(b.n) + " coordinates");
  }
  ctx.emit(dump({{"phi", eval_bubble(b, a.x)}, {"c", b.c}, {"t", b.t}, {"center", b.center}}));
  return kSuccess;
}

int bubble_residual_cmd(Context& ctx, const BubbleArgs& a) {
  if (a.stencil != 3 && a.stencil != 7) throw Error(ErrorCode::InvalidArgument, "--stencil must be 3 or 7");
  const Stencil st = a.stencil == 3 ? Stencil::three_point : Stencil::seven_point;
  const auto& cfg = ctx.config.exponents;
  const auto b = bubble_from(ctx, a.t, {});
  const auto grid = ctx.grid();
  const auto single = bubble_residual_report(b, cfg, grid, st);
  const auto [ru, rv] = system_residual(b, b, cfg, grid, st);
  ctx.emit(dump({{"t", a.t},
                 {"stencil", a.stencil},
                 {"residual", single.max_abs},
                 {"at_radius", single.at_radius},
                 {"system", {{"u", ru.max_abs}, {"v", rv.max_abs}}}}));
  return kSuccess;
}

int bubble_profile(Context& ctx, const BubbleArgs& a) {
  const auto b = bubble_from(ctx, a.t, {});
  const auto grid = ctx.grid();
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) phi[i] = eval_bubble_radial(b, grid[i]);
  ctx.emit(csv({"r", "phi"}, {grid.nodes(), phi}));
  return kSuccess;
}

// ---- shooting -------------------------------------------------------------

struct ShootArgs {
  double u0 = 1.0;
  double v0 = 1.0;
  std::optional<double> r_max;
};

ShootInput shoot_input(const Context& ctx, double u0, double v0, std::optional<double> r_max) {
  ShootInput in;
  in.config = ctx.config.exponents;
  in.u0 = u0;
  in.v0 = v0;
  in.r_start = ctx.config.grid.r0;
  in.r_max = r_max.value_or(ctx.config.grid.rmax);
  in.nodes = ctx.config.grid.nodes;
  in.tol = {ctx.globals.tol, ctx.globals.tol};
  return in;
}

int shoot(Context& ctx, const ShootArgs& a) {
  const auto outcome = classify(shoot_input(ctx, a.u0, a.v0, a.r_max));
  const auto& p = outcome.profile();
  ctx.emit(csv({"r", "u", "v", "du", "dv"}, {p.grid.nodes(), p.u, p.v, p.du, p.dv}));
  ctx.log() << outcome_json(outcome).dump() << '\n';
  return kSuccess;
}

struct SweepArgs {
  std::vector<double> ratios;
  double base = 1.0;
};

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

int sweep(Context& ctx, const SweepArgs& a) {
  std::vector<double> ratios = a.ratios.empty() ? default_sweep_ratios() : a.ratios;
  SweepOptions so;
  so.r_max = ctx.config.grid.rmax;
  so.nodes = ctx.config.grid.nodes;
  so.r_start = ctx.config.grid.r0;
  so.tol = {ctx.globals.tol, ctx.globals.tol};
  so.threads = ctx.threads();
  const auto report = uniqueness_sweep(ctx.config.exponents, ratios, a.base, so);
  std::ostringstream ss;
  ss << "ratio,kind,R0,diagnostics\n";
  for (const auto& row : report.rows) {
    json d = row.outcome.diagnostics;
    if (row.outcome.failed) {
      d["failed"] = to_string(*row.outcome.failed);
      d["at_r"] = row.outcome.at_r;
    }
    if (row.excluded) d["excluded"] = true;
    ss << format_double(row.ratio) << ',' << to_string(row.outcome.kind) << ','
       << (row.outcome.crossing_r ? format_double(*row.outcome.crossing_r) : "") << ',' << csv_quote(d.dump())
       << '\n';
  }
  ctx.emit(ss.str());
  for (const auto& v : report.violations) ctx.log() << "assertion: " << v << '\n';
  return report.assertion_holds ? kSuccess : kAssertionFailed;
}

struct IdentityArgs {
  double t = 1.0;
  std::vector<double> radii{0.1, 1.0, 10.0};
  std::optional<double> u0;
  std::optional<double> v0;
  double max_gap = 1e-5;
};

int identity(Context& ctx, const IdentityArgs& a) {
  const auto& cfg = ctx.config.exponents;
  std::optional<RadialProfilePair> profile;
  if (a.u0 || a.v0) {
    const double u0 = a.u0.value_or(a.v0.value_or(1.0));
    const double v0 = a.v0.value_or(u0);
    profile = integrate_radial(shoot_input(ctx, u0, v0, std::nullopt)).profile;
  } else {
    profile = sample_bubble(bubble_from(ctx, a.t, {}), ctx.grid());
  }
  const auto rep = check_integral_identity(*profile, cfg, a.radii);
  ctx.emit(dump({{"r_checked", rep.r_checked},
                 {"lhs", rep.lhs},
                 {"rhs", rep.rhs},
                 {"lhs_v", rep.lhs_v},
                 {"rhs_v", rep.rhs_v},
                 {"max_abs_gap", rep.max_abs_gap}}));
  return rep.max_abs_gap <= a.max_gap ? kSuccess : kAssertionFailed;
}

// ---- potential ------------------------------------------------------------

struct PotentialArgs {
  std::string input;
  std::string source = "bubble";
  double t = 1.0;
};

int potential_apply(Context& ctx, const PotentialArgs& a) {
  const int n = ctx.config.exponents.n;
  std::optional<RadialGrid> grid;
  std::vector<double> f;
  if (!a.input.empty()) {
    std::ifstream in(a.input);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + a.input);
    const auto table = read_csv(in);
    grid = RadialGrid::from_nodes(table.column("r"));
    f = table.column("value");
  } else if (a.source == "bubble") {
    grid = ctx.grid();
    f = power_of_bubble(bubble_from(ctx, a.t, {}), *grid, ctx.config.exponents.critical_exponent());
  } else if (a.source == "ball") {
    grid = RadialGrid::uniform(1e-4, 10.0);
    f.resize(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
      f[i] = (*grid)[i] < 1.0 ? 1.0 : (std::abs((*grid)[i] - 1.0) < 1e-9 ? 0.5 : 0.0);
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "--source must be bubble or ball");
  }
  const auto u = newton_potential_radial(f, *grid, n);
  ctx.emit(csv({"r", "value"}, {grid->nodes(), u}));
  return kSuccess;
}

struct PicardArgs {
  std::string init = "bubble";
  double perturb = 0.0;
  double t = 1.0;
  int max_steps = 200;
  double stop_tol = 1e-8;
};

int picard(Context& ctx, const PicardArgs& a) {
  const auto& cfg = ctx.config.exponents;
  const auto grid = ctx.grid();
  RadialProfilePair start{grid, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0),
                          std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0)};
  if (a.init == "bubble") {
    start = sample_bubble(bubble_from(ctx, a.t, {}), grid);
    for (auto* v : {&start.u, &start.v, &start.du, &start.dv}) {
      for (double& x : *v) x *= 1.0 + a.perturb;
    }
  } else if (a.init != "zero") {
    throw Error(ErrorCode::InvalidArgument, "--init must be bubble or zero");
  }
  std::ostringstream lines;
  const auto run = picard_iterate(PicardState{start, 0.0, 0, false}, cfg, PicardOptions{a.stop_tol, a.max_steps},
                                  [&](int step, double residual) {
                                    lines << json{{"step", step}, {"residual", residual}}.dump() << '\n';
                                  });
  lines << json{{"stop", to_string(run.stop)}, {"steps", run.final_state.step}}.dump() << '\n';
  ctx.emit(lines.str());
  return kSuccess;
}

struct HlsArgs {
  std::optional<double> lambda;
  std::optional<double> r_exp;
  std::optional<double> s_exp;
  double t = 1.0;
  int angular = 64;
  bool operator_bound = false;
};

int hls(Context& ctx, const HlsArgs& a) {
  const int n = ctx.config.exponents.n;
  const double lambda = a.lambda.value_or(n - 2.0);
  const double sym = 2.0 * n / (2.0 * n - lambda);
  const double r_exp = a.r_exp.value_or(a.s_exp ? 1.0 / (2.0 - lambda / n - 1.0 / *a.s_exp) : sym);
  const double s_exp = a.s_exp.value_or(1.0 / (2.0 - lambda / n - 1.0 / r_exp));
  const auto grid = ctx.grid();
  const auto b = bubble_from(ctx, a.t, {});
  const auto f = power_of_bubble(b, grid, ctx.config.exponents.critical_exponent());
  const auto e = hls_functional(f, f, grid, KernelSpec{n, lambda, a.angular}, r_exp, s_exp);
  json j{{"lambda", lambda},       {"r_exp", r_exp},   {"s_exp", s_exp}, {"t", a.t},
         {"functional", e.functional}, {"norm_f", e.norm_f}, {"norm_g", e.norm_g}, {"ratio", e.ratio}};
  if (a.operator_bound) {
    const auto ob = verify_hls_operator_bound(f, grid, ctx.config.exponents);
    j["operator"] = {{"lhs", ob.lhs}, {"rhs", ob.rhs}, {"ratio", ob.ratio}};
  }
  ctx.emit(dump(j));
  return kSuccess;
}

// ---- moving plane ---------------------------------------------------------

struct PlaneArgs {
  double center = 0.0;
  double t = 1.0;
  int m = 64;
  double half_width = 10.0;
  std::string geometry = "axisymmetric";
  std::vector<double> lambdas;
  std::optional<double> lo;
  std::optional<double> hi;
  std::size_t count = 65;
  double lambda = 0.0;
  std::vector<double> x;
  std::string nodes_csv;
};

CartesianSampler sampler_from(const Context& ctx, const PlaneArgs& a) {
  CartesianSampler s;
  s.n = ctx.config.exponents.n;
  s.nodes_per_axis = a.m;
  s.half_width = a.half_width;
  if (a.geometry == "full") s.geometry = SamplerGeometry::full;
  else if (a.geometry != "axisymmetric") throw Error(ErrorCode::InvalidArgument, "--geometry must be axisymmetric or full");
  return s;
}

std::vector<double> axis_point(int n, double x1) {
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  p[0] = x1;
  return p;
}

json report_json(const ReflectionReport& r) {
  json norms = json::object();
  for (const auto& [name, norm] : r.norms) norms[name] = {{"p", norm.p}, {"value", norm.value}, {"domain", norm.domain_tag}};
  return {{"lambda", r.lambda},
          {"Bu_measure", r.Bu_measure},
          {"Bv_measure", r.Bv_measure},
          {"Bu_count", r.Bu_count},
          {"Bv_count", r.Bv_count},
          {"norms", norms},
          {"inequality_margins",
           {{"u_lhs", r.margins.u_lhs},
            {"u_bracket", r.margins.u_bracket},
            {"v_lhs", r.margins.v_lhs},
            {"v_bracket", r.margins.v_bracket},
            {"smallness", r.margins.smallness}}}};
}

int mp_scan(Context& ctx, const PlaneArgs& a) {
  const auto sampler = sampler_from(ctx, a);
  const auto b = bubble_from(ctx, a.t, axis_point(sampler.n, a.center));
  auto field = [&](std::span<const double> x) { return eval_bubble(b, x); };
  std::vector<double> lambdas = a.lambdas;
  if (lambdas.empty()) {
    lambdas = (a.lo || a.hi) ? lambda_sweep(a.lo.value_or(-2.0 * a.half_width), a.hi.value_or(2.0 * a.half_width), a.count)
                             : default_lambda_sweep(sampler);
  }
  const auto scan = critical_plane_scan(field, field, sampler, lambdas, ctx.threads());
  json entries = json::array();
  for (const auto& e : scan.entries) {
    entries.push_back({{"lambda", e.lambda},
                       {"Bu_measure", e.Bu_measure},
                       {"Bv_measure", e.Bv_measure},
                       {"Bu_count", e.Bu_count},
                       {"Bv_count", e.Bv_count},
                       {"halfspace_nodes", e.halfspace_nodes}});
  }
  ctx.emit(dump({{"lambda0", scan.lambda0}, {"degenerate", scan.degenerate}, {"cell", scan.cell}, {"entries", entries}}));
  return kSuccess;
}

int mp_check(Context& ctx, const PlaneArgs& a) {
  const auto sampler = sampler_from(ctx, a);
  const auto b = bubble_from(ctx, a.t, axis_point(sampler.n, a.center));
  auto field = [&](std::span<const double> x) { return eval_bubble(b, x); };
  const auto plane = PlaneParam::along_e1(a.lambda, sampler.n);
  const auto report = reflection_inequality_check(field, field, plane, ctx.config.exponents, sampler);
  if (!a.nodes_csv.empty()) {
    const auto set = exceedance_sets(field, plane, sampler);
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(sampler.n));
    std::vector<double> x(static_cast<std::size_t>(sampler.n));
    for (std::size_t idx : set.members) {
      sampler.node(idx, x);
      for (std::size_t k = 0; k < x.size(); ++k) cols[k].push_back(x[k]);
    }
    std::vector<std::string> header;
    std::vector<std::span<const double>> spans;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      header.push_back("x" + std::to_string(k + 1));
      spans.emplace_back(cols[k]);
    }
    ctx.side_file(a.nodes_csv, csv(header, spans));
  }
  ctx.emit(dump(report_json(report)));
  return kSuccess;
}

int mp_identity(Context& ctx, const PlaneArgs& a) {
  const int n = ctx.config.exponents.n;
  const auto b = bubble_from(ctx, a.t, axis_point(n, a.center));
  if (a.x.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::InvalidArgument, "--x needs n = " + std::to_string(n) + " coordinates");
  }
  const auto g = greens_reflection_identity(b, b, PlaneParam::along_e1(a.lambda, n), a.x, ctx.config.exponents);
  ctx.emit(dump({{"lambda", a.lambda}, {"x", a.x}, {"lhs", g.lhs}, {"rhs", g.rhs}, {"nodes", g.nodes}}));
  return kSuccess;
}

int verify_all(Context& ctx) {
  AcceptanceOptions opt;
  opt.grid = ctx.config.grid;
  opt.threads = ctx.threads();
  opt.seed = static_cast<unsigned long long>(ctx.globals.seed);
  std::ostringstream table;
  bool ok = true;
  run_acceptance(opt, [&](const CriterionResult& r) {
    table << format_result(r) << '\n';
    ok = ok && r.passed;
  });
  table << (ok ? "all criteria passed" : "some criteria FAILED") << '\n';
  ctx.emit(table.str());
  return ok ? kSuccess : kAssertionFailed;
}

void record_parameters(const CLI::App* app, std::map<std::string, std::string>& params) {
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string joined;
    for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
    params[opt->get_name()] = joined.empty() ? "true" : joined;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial solver and verifier for the critical coupled system -Lu = u^a v^b, -Lv = u^b v^a", "bv"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_path, "output file (a manifest is written next to it)");
  app.add_option("--seed", g.seed, "seed for randomized checks");
  app.add_option("--threads", g.threads, "worker threads (default: BV_THREADS, then hardware)");
  app.add_option("--tol", g.tol, "integration tolerance (absolute and relative)")->check(CLI::PositiveNumber);

  BubbleArgs ba;
  auto* bubble = app.add_subcommand("bubble", "closed-form bubble family");
  bubble->require_subcommand(1);
  auto* b_eval = bubble->add_subcommand("eval", "evaluate phi at a point");
  b_eval->add_option("--t", ba.t, "scale");
  b_eval->add_option("--center", ba.center, "center coordinates")->delimiter(',');
  b_eval->add_option("--x", ba.x, "point coordinates")->delimiter(',')->required();
  auto* b_res = bubble->add_subcommand("residual", "finite-difference residual on the configured grid");
  b_res->add_option("--t", ba.t, "scale");
  b_res->add_option("--stencil", ba.stencil, "3 or 7 point Laplacian");
  auto* b_prof = bubble->add_subcommand("profile", "CSV (r, phi) on the configured grid");
  b_prof->add_option("--t", ba.t, "scale");

  ShootArgs sa;
  auto* shoot_cmd = app.add_subcommand("shoot", "integrate the radial system from (u0, v0)");
  shoot_cmd->add_option("--u0", sa.u0, "u(0)")->required();
  shoot_cmd->add_option("--v0", sa.v0, "v(0)")->required();
  shoot_cmd->add_option("--rmax", sa.r_max, "truncation radius");

  SweepArgs swa;
  auto* sweep_cmd = app.add_subcommand("sweep", "classify (base, ratio*base) over a ratio list");
  sweep_cmd->add_option("--ratios", swa.ratios, "ratios v0/u0")->delimiter(',');
  sweep_cmd->add_option("--base", swa.base, "u0");

  IdentityArgs ia;
  auto* id_cmd = app.add_subcommand("identity", "check the nested-integral identity");
  id_cmd->add_option("--t", ia.t, "bubble scale");
  id_cmd->add_option("--radii", ia.radii, "radii")->delimiter(',');
  id_cmd->add_option("--u0", ia.u0, "use a shot profile instead of the bubble");
  id_cmd->add_option("--v0", ia.v0, "use a shot profile instead of the bubble");
  id_cmd->add_option("--max-gap", ia.max_gap, "exit 2 above this gap");

  PotentialArgs pa;
  auto* pot = app.add_subcommand("potential", "radial Newtonian potential");
  pot->require_subcommand(1);
  auto* apply = pot->add_subcommand("apply", "CSV (r, value) of the potential");
  apply->add_option("--in", pa.input, "CSV with columns r, value");
  apply->add_option("--source", pa.source, "bubble (phi^p) or ball (unit-ball indicator)");
  apply->add_option("--t", pa.t, "bubble scale");

  PicardArgs pia;
  auto* pic = app.add_subcommand("picard", "Picard iteration of the integral system");
  pic->add_option("--init", pia.init, "bubble or zero");
  pic->add_option("--perturb", pia.perturb, "relative amplitude perturbation");
  pic->add_option("--t", pia.t, "bubble scale");
  pic->add_option("--max-steps", pia.max_steps, "step cap");
  pic->add_option("--stop", pia.stop_tol, "stop when the update falls below this");

  HlsArgs ha;
  auto* hls_cmd = app.add_subcommand("hls", "HLS functional ratio on the bubble family");
  hls_cmd->add_option("--lambda", ha.lambda, "kernel power (default n - 2)");
  hls_cmd->add_option("--rexp", ha.r_exp, "exponent for f");
  hls_cmd->add_option("--sexp", ha.s_exp, "exponent for g");
  hls_cmd->add_option("--t", ha.t, "bubble scale");
  hls_cmd->add_option("--angular", ha.angular, "Gauss-Legendre nodes for the sphere average");
  hls_cmd->add_flag("--operator", ha.operator_bound, "also report |Tf|_p and |f|_q");

  PlaneArgs pla;
  auto* mp = app.add_subcommand("mp", "moving-plane checks on a bubble centered on the x1 axis");
  mp->require_subcommand(1);
  auto plane_common = [&](CLI::App* c) {
    c->add_option("--center", pla.center, "x1 coordinate of the bubble center");
    c->add_option("--t", pla.t, "bubble scale");
  };
  auto sampler_common = [&](CLI::App* c) {
    c->add_option("--m", pla.m, "nodes per axis");
    c->add_option("--L", pla.half_width, "box half-width");
    c->add_option("--geometry", pla.geometry, "axisymmetric or full");
  };
  auto* mp_scan_cmd = mp->add_subcommand("scan", "critical plane scan");
  plane_common(mp_scan_cmd);
  sampler_common(mp_scan_cmd);
  mp_scan_cmd->add_option("--lambdas", pla.lambdas, "explicit plane positions")->delimiter(',');
  mp_scan_cmd->add_option("--lo", pla.lo, "sweep start");
  mp_scan_cmd->add_option("--hi", pla.hi, "sweep end");
  mp_scan_cmd->add_option("--count", pla.count, "sweep size");
  auto* mp_check_cmd = mp->add_subcommand("check", "reflection norms at one plane");
  plane_common(mp_check_cmd);
  sampler_common(mp_check_cmd);
  mp_check_cmd->add_option("--lambda", pla.lambda, "plane position")->required();
  mp_check_cmd->add_option("--nodes-csv", pla.nodes_csv, "dump B^u nodes as CSV");
  auto* mp_id_cmd = mp->add_subcommand("identity", "Green reflection identity at one point");
  plane_common(mp_id_cmd);
  mp_id_cmd->add_option("--lambda", pla.lambda, "plane position")->required();
  mp_id_cmd->add_option("--x", pla.x, "point in H_lambda")->delimiter(',')->required();

  auto* verify = app.add_subcommand("verify-all", "run every acceptance check");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("bv");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kSuccess;
    err << app.help();
    return kUsage;
  }

  try {
    Context ctx(g, out, err);
    ctx.manifest.subcommand = app.get_subcommands().front()->get_name();
    record_parameters(&app, ctx.manifest.parameters);
    for (const CLI::App* sub = app.get_subcommands().front(); sub;) {
      record_parameters(sub, ctx.manifest.parameters);
      const auto children = sub->get_subcommands();
      if (children.empty()) break;
      sub = children.front();
      ctx.manifest.subcommand += " " + sub->get_name();
    }

    if (b_eval->parsed()) return bubble_eval(ctx, ba);
    if (b_res->parsed()) return bubble_residual_cmd(ctx, ba);
    if (b_prof->parsed()) return bubble_profile(ctx, ba);
    if (shoot_cmd->parsed()) return shoot(ctx, sa);
    if (sweep_cmd->parsed()) return sweep(ctx, swa);
    if (id_cmd->parsed()) return identity(ctx, ia);
    if (apply->parsed()) return potential_apply(ctx, pa);
    if (pic->parsed()) return picard(ctx, pia);
    if (hls_cmd->parsed()) return hls(ctx, ha);
    if (mp_scan_cmd->parsed()) return mp_scan(ctx, pla);
    if (mp_check_cmd->parsed()) return mp_check(ctx, pla);
    if (mp_id_cmd->parsed()) return mp_identity(ctx, pla);
    if (verify->parsed()) return verify_all(ctx);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kUsage : kNumericalFailure;
  }
  err << app.help();
  return kUsage;
}

}  // namespace bv::cli
