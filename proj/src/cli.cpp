#include "cmcf/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "cmcf/error.hpp"
#include "cmcf/io.hpp"
#include "cmcf/verification.hpp"
#include "cmcf/winterbottom.hpp"

namespace cmcf {

namespace {

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 1;
  int threads = 1;  // accepted for interface compatibility; all kernels are serial
  bool export_vtk = false;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "TOML config file");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--export-vtk", f.export_vtk, "write VTK structured-points files");
}

io::TomlDoc load_config(const CommonFlags& f) {
  return f.config.empty() ? io::TomlDoc{} : io::TomlDoc::parse_file(f.config);
}

std::string pad4(std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", k);
  return buf;
}

template <class F>
std::string to_string_with(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
  std::optional<double> h, tau, beta, rho;
  std::optional<int> steps;
};

AdhesionField make_beta(const io::TomlDoc& cfg, const HalfSpaceGrid& g) {
  const std::string kind = cfg.string("beta.kind", "constant");
  if (kind == "constant") {
    const double b = cfg.number("beta.value", 0.0);
    if (cfg.has("beta.eta")) return AdhesionField::constant(g, b, cfg.number("beta.eta", 0.0));
    return AdhesionField::constant(g, b);
  }
  if (kind == "sine") {
    // value + amplitude sin(k x) sin(k y)
    const double b0 = cfg.number("beta.value", 0.0), a = cfg.number("beta.amplitude", 0.1);
    const double k = cfg.number("beta.wavenumber", 2.0 * 3.141592653589793);
    std::vector<double> v(static_cast<std::size_t>(g.nx()) * g.ny());
    double m = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const Vec3 c = g.center(i, j, 0);
        v[static_cast<std::size_t>(j) * g.nx() + i] = b0 + a * std::sin(k * c.x) * std::sin(k * c.y);
        m = std::max(m, std::abs(v[static_cast<std::size_t>(j) * g.nx() + i]));
      }
    require(m < 1.0, "beta: need max|beta| < 1");
    const double eta = cfg.number("beta.eta", std::min(0.5 * (1.0 - m), std::nextafter(0.5, 0.0)));
    return AdhesionField(g, std::move(v), eta);
  }
  if (kind == "csv") {
    std::ifstream is(cfg.string("beta.path", ""));
    require(is.is_open(), "beta.path: cannot open adhesion CSV");
    return AdhesionField::read_csv(is, g);
  }
  throw PreconditionError("beta.kind must be constant, sine or csv");
}

BinarySet make_initial(const io::TomlDoc& cfg, double h, std::uint64_t seed) {
  const std::string kind = cfg.string("shape.kind", "cap");
  DropletSpec d;
  const double margin = (kInteriorMargin + 4) * h;
  if (kind == "cap" || kind == "winterbottom") {
    const double rho = cfg.number("shape.rho", 0.5);
    require(rho > 0.0, "shape.rho must be positive");
    double ch = cfg.number("shape.center_height", 0.0);
    if (kind == "winterbottom") {
      const double b0 = cfg.number("shape.beta0", 0.0);
      require(std::abs(b0) < 1.0, "shape.beta0 must satisfy |beta0| < 1");
      ch = rho * b0;
    }
    require(ch > -rho, "shape.center_height must exceed -rho");
    const double cx = cfg.number("shape.center_x", 0.0), cy = cfg.number("shape.center_y", 0.0);
    d.caps = {{rho, ch, cx, cy}};
    const double lateral = ch >= 0.0 ? rho : std::sqrt(rho * rho - ch * ch);
    d.half_width = lateral + std::max(std::abs(cx), std::abs(cy)) + margin;
    d.height = rho + ch + margin;
  } else if (kind == "random_caps") {
    const int count = static_cast<int>(cfg.integer("shape.count", 3));
    require(count >= 1, "shape.count must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < count; ++n) {
      const double rho = 0.15 + 0.2 * u(rng);
      d.caps.push_back({rho, (u(rng) - 0.5) * rho, (u(rng) - 0.5) * 0.6, (u(rng) - 0.5) * 0.6});
    }
    d.half_width = 0.3 + 0.35 + margin;
    d.height = 0.35 * 1.5 + margin;
  } else {
    throw PreconditionError("shape.kind must be cap, winterbottom or random_caps");
  }
  d.half_width = cfg.number("box.half_width", d.half_width);
  d.height = cfg.number("box.height", d.height);
  return d.rasterize(h);
}

int cmd_simulate(const CommonFlags& cf, const SimulateFlags& sf, std::ostream& out) {
  io::TomlDoc cfg = load_config(cf);
  if (sf.h) cfg.set("h", *sf.h);
  if (sf.tau) cfg.set("tau", *sf.tau);
  if (sf.steps) cfg.set("steps", static_cast<double>(*sf.steps));
  if (sf.beta) {
    cfg.set("beta.kind", std::string("constant"));
    cfg.set("beta.value", *sf.beta);
  }
  if (sf.rho) cfg.set("shape.rho", *sf.rho);

  const double h = cfg.number("h", 1.0 / 32.0);
  require(h > 0.0, "h must be positive");
  const double tau = cfg.number("tau", 4.0 * h * h);
  require(tau > 0.0, "tau must be positive");
  const long long steps = cfg.integer("steps", 10);
  require(steps >= 1, "steps must be >= 1");
  const std::string ext = cfg.string("extremal", "minimal");
  require(ext == "minimal" || ext == "maximal", "extremal must be minimal or maximal");
  const std::string init = cfg.string("interface_init", "subcell");
  require(init == "subcell" || init == "staircase", "interface_init must be subcell or staircase");
  const long long every = cfg.integer("output.export_every", 1);
  require(every >= 1, "output.export_every must be >= 1");

  const BinarySet e0 = make_initial(cfg, h, cf.seed);
  const AdhesionField beta = make_beta(cfg, e0.grid());
  StepOptions opts;
  opts.interface_init = init == "subcell" ? InterfaceInit::subcell : InterfaceInit::staircase;

  io::StagedOutput stage(cf.out, "simulate");
  io::TomlDoc meta = cfg;
  meta.set("run.command", std::string("simulate"));
  meta.set("run.seed", static_cast<double>(cf.seed));
  meta.set("run.tau", tau);
  meta.set("run.h", h);
  meta.set("grid.nx", static_cast<double>(e0.grid().nx()));
  meta.set("grid.ny", static_cast<double>(e0.grid().ny()));
  meta.set("grid.nz", static_cast<double>(e0.grid().nz()));
  meta.set("grid.origin_x", e0.grid().origin_x());
  meta.set("grid.origin_y", e0.grid().origin_y());
  stage.write("meta.toml", to_string_with([&](std::ostream& os) { meta.write(os); }));

  const auto traj = run_flat_flow(e0, tau, static_cast<int>(steps), beta,
                                  ext == "minimal" ? Extremal::minimal : Extremal::maximal, opts);
  for (std::size_t k = 0; k < traj.steps.size(); ++k) {
    if (k % static_cast<std::size_t>(every) != 0 && k + 1 != traj.steps.size()) continue;
    io::write_dump(stage.file("step_" + pad4(k) + ".cmcf"), traj.steps[k]);
    if (cf.export_vtk)
      stage.write("step_" + pad4(k) + ".vtk", to_string_with([&](std::ostream& os) { io::write_vtk(os, traj.steps[k]); }));
  }
  stage.write("energies.csv", to_string_with([&](std::ostream& os) { io::write_energies_csv(os, traj); }));
  stage.commit();
  bool lyapunov = true;
  for (bool b : traj.lyapunov_ok) lyapunov = lyapunov && b;
  out << "simulate: " << traj.steps.size() - 1 << " steps, final volume " << volume(traj.steps.back())
      << (traj.extinction_step ? ", extinct at step " + std::to_string(*traj.extinction_step) : std::string())
      << (lyapunov ? "" : ", energy inequality violated") << '\n';
  return lyapunov ? kExitPass : kExitSuiteFailure;
}

// ---------------------------------------------------------------------------
// consistency / verify

void print_report(std::ostream& out, const SuiteReport& r) {
  out << r.name << ": " << (r.pass() ? "PASS" : "FAIL") << '\n';
  for (const auto* c : r.failures()) out << "  failed: " << c->name << ' ' << c->measured.dump() << '\n';
}

struct ConsistencyFlags {
  std::optional<std::string> shape;
  std::optional<int> levels;
  std::optional<double> tau0, horizon;
};

int cmd_consistency(const CommonFlags& cf, const ConsistencyFlags& fl, std::ostream& out) {
  io::TomlDoc cfg = load_config(cf);
  if (fl.shape) cfg.set("shape", *fl.shape);
  if (fl.levels) cfg.set("levels", static_cast<double>(*fl.levels));
  if (fl.tau0) cfg.set("tau0", *fl.tau0);
  if (fl.horizon) cfg.set("horizon", *fl.horizon);
  const std::string shape = cfg.string("shape", "hemisphere");
  require(shape == "hemisphere" || shape == "winterbottom", "shape must be hemisphere or winterbottom");
  ConsistencyConfig c = shape == "hemisphere" ? ConsistencyConfig::hemisphere() : ConsistencyConfig::winterbottom();
  c.rho0 = cfg.number("rho0", c.rho0);
  c.beta = cfg.number("beta", c.beta);
  c.horizon = cfg.number("horizon", c.horizon);
  c.levels = static_cast<int>(cfg.integer("levels", c.levels));
  c.tau0 = cfg.number("tau0", c.tau0);
  c.markers = static_cast<int>(cfg.integer("markers", c.markers));
  c.sample_count = static_cast<int>(cfg.integer("sample_count", c.sample_count));
  c.hausdorff_factor = cfg.number("hausdorff_factor", c.hausdorff_factor);
  c.symdiff_rel_max = cfg.number("symdiff_rel_max", c.symdiff_rel_max);

  io::StagedOutput stage(cf.out, "consistency");
  const auto res = consistency_experiment(c);
  stage.write("consistency.json", res.report.to_json().dump(2) + "\n");
  for (std::size_t j = 0; j < res.gmm.trajectories.size(); ++j)
    stage.write("energies_level" + std::to_string(j) + ".csv",
                to_string_with([&](std::ostream& os) { io::write_energies_csv(os, res.gmm.trajectories[j]); }));
  if (cf.export_vtk) {
    const auto& fine = res.gmm.trajectories.back();
    for (std::size_t s = 0; s < res.gmm.sample_times.size(); ++s)
      stage.write("sample_" + pad4(s) + ".vtk", to_string_with([&](std::ostream& os) {
                    io::write_vtk(os, fine.at_time(res.gmm.sample_times[s]));
                  }));
  }
  stage.commit();
  print_report(out, res.report);
  return res.report.pass() ? kExitPass : kExitSuiteFailure;
}

int cmd_verify(const CommonFlags& cf, std::vector<std::string> suites, std::ostream& out) {
  const io::TomlDoc cfg = load_config(cf);
  if (suites.empty()) suites = {"ball", "density", "holder", "barrier", "comparison"};
  for (const auto& s : suites)
    require(s == "ball" || s == "density" || s == "holder" || s == "barrier" || s == "comparison",
            "unknown suite '" + s + "'");
  io::StagedOutput stage(cf.out, "verify");
  nlohmann::json summary = nlohmann::json::object();
  bool all = true;
  for (const auto& s : suites) {
    SuiteReport r;
    if (s == "ball") {
      BallSuiteConfig c;
      c.h = cfg.number("ball.h", c.h);
      c.ball_tau = cfg.number("ball.ball_tau", c.ball_tau);
      c.ball_steps = static_cast<int>(cfg.integer("ball.ball_steps", c.ball_steps));
      c.beta = cfg.number("ball.beta", c.beta);
      c.beta0 = cfg.number("ball.beta0", c.beta0);
      c.r0 = cfg.number("ball.r0", c.r0);
      c.steps = static_cast<int>(cfg.integer("ball.steps", c.steps));
      c.fit_steps = static_cast<int>(cfg.integer("ball.fit_steps", c.fit_steps));
      r = ball_suite(c);
    } else if (s == "density") {
      DensitySuiteConfig c;
      c.h = cfg.number("density.h", c.h);
      c.taus = cfg.numbers("density.taus", c.taus);
      c.radius_cells = cfg.number("density.radius_cells", c.radius_cells);
      c.theta_min = cfg.number("density.theta_min", c.theta_min);
      r = density_suite(c);
    } else if (s == "holder") {
      HolderSuiteConfig c;
      c.r0 = cfg.number("holder.r0", c.r0);
      c.h = cfg.number("holder.h", c.h);
      c.horizon = cfg.number("holder.horizon", c.horizon);
      c.exponent_min = cfg.number("holder.exponent_min", c.exponent_min);
      r = holder_suite(c);
    } else if (s == "barrier") {
      BarrierSuiteConfig c;
      c.r0 = cfg.number("barrier.r0", c.r0);
      c.h = cfg.number("barrier.h", c.h);
      c.s = cfg.number("barrier.s", c.s);
      c.r = cfg.number("barrier.r", c.r);
      c.markers = static_cast<int>(cfg.integer("barrier.markers", c.markers));
      c.margin_cells = cfg.number("barrier.margin_cells", c.margin_cells);
      c.violated_tau = cfg.number("barrier.violated_tau", c.violated_tau);
      c.warmup = cfg.number("barrier.warmup", c.warmup);
      r = barrier_suite(c);
    } else {
      ComparisonSuiteConfig c;
      c.h = cfg.number("comparison.h", c.h);
      c.nested_pairs = static_cast<int>(cfg.integer("comparison.nested_pairs", c.nested_pairs));
      c.disjoint_pairs = static_cast<int>(cfg.integer("comparison.disjoint_pairs", c.disjoint_pairs));
      c.seed = cf.seed;
      r = comparison_suite(c);
    }
    stage.write(s + ".json", r.to_json().dump(2) + "\n");
    summary[s] = r.pass();
    all = all && r.pass();
    print_report(out, r);
  }
  stage.write("summary.json", summary.dump(2) + "\n");
  stage.commit();
  return all ? kExitPass : kExitSuiteFailure;
}

// ---------------------------------------------------------------------------
// winterbottom

struct WinterbottomFlags {
  double beta0 = 0.0;
  double rho = 1.0;
  std::optional<double> r0, p_height;
};

int cmd_winterbottom(const WinterbottomFlags& f, std::ostream& out) {
  const auto m = cap_measures(f.rho, f.beta0);
  char buf[64];
  auto row = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out << name << ',' << buf << '\n';
  };
  row("volume", m.volume);
  row("spherical_area", m.spherical_area);
  row("wetted_area", m.wetted_area);
  row("energy", m.capillary_energy);
  row("isoperimetric_constant", isoperimetric_constant(f.beta0));
  if (f.r0) {
    const auto ins = largest_inscribed(*f.r0, f.p_height.value_or(0.0), f.beta0);
    row("inscribed_rho", ins.shape.rho);
    row("inscribed_formula_rho", ins.formula_rho);
    row("inscribed_formula_contained", ins.formula_contained ? 1.0 : 0.0);
  }
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"capillary flat flows on a voxel half-space"};
  app.require_subcommand(1);
  CommonFlags cf;

  auto* sim = app.add_subcommand("simulate", "run a flat flow and write its trajectory");
  add_common(sim, cf);
  SimulateFlags sf;
  sim->add_option("--spacing", sf.h, "grid spacing h");
  sim->add_option("--tau", sf.tau, "time step");
  sim->add_option("--steps", sf.steps, "number of steps");
  sim->add_option("--beta", sf.beta, "constant adhesion coefficient");
  sim->add_option("--rho", sf.rho, "initial cap radius");

  auto* con = app.add_subcommand("consistency", "flat flows against the smooth flow across refinements");
  add_common(con, cf);
  ConsistencyFlags cfl;
  con->add_option("--shape", cfl.shape, "hemisphere or winterbottom");
  con->add_option("--levels", cfl.levels, "refinement levels");
  con->add_option("--tau0", cfl.tau0, "coarsest time step");
  con->add_option("--horizon", cfl.horizon, "final time");

  auto* ver = app.add_subcommand("verify", "run verification suites");
  add_common(ver, cf);
  std::vector<std::string> suites;
  ver->add_option("--suite", suites, "ball, density, holder, barrier or comparison (repeatable)");

  auto* win = app.add_subcommand("winterbottom", "closed-form Winterbottom measures as CSV rows");
  WinterbottomFlags wf;
  win->add_option("--beta0", wf.beta0, "contact cosine")->required();
  win->add_option("--rho", wf.rho, "radius");
  win->add_option("--r0", wf.r0, "ball radius for the largest inscribed shape");
  win->add_option("--p-height", wf.p_height, "ball center height");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfigError;
  }
  try {
    if (*sim) return cmd_simulate(cf, sf, out);
    if (*con) return cmd_consistency(cf, cfl, out);
    if (*ver) return cmd_verify(cf, suites, out);
    return cmd_winterbottom(wf, out);
  } catch (const PreconditionError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitSuiteFailure;
  }
}

}  // namespace cmcf
