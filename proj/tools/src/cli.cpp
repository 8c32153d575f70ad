#include "beamspec_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <memory>
#include <sstream>

#include "beamspec/modes.hpp"
#include "beamspec/simulator.hpp"
#include "beamspec_cli/format.hpp"
#include "beamspec_cli/verify.hpp"

namespace beamspec::cli {

using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  double k = 1.0;
  std::string format = "csv";
  std::string output;
};

struct Options {
  Common common;
  // spectrum
  int n_max = 50;
  double tol = kDefaultTolerance;
  // modes
  int n = 20;
  int grid = kDefaultGridSize;
  std::string kind = "F";
  // closeness
  int n_from = 10;
  int n_to = 80;
  // resolvent-check
  std::string phi_coeffs;
  std::string psi_coeffs;
  // simulate
  int M = 200;
  double dt = 1e-3;
  double t_final = 5.0;
  std::string ic = "poly";
  int record_every = 1;
  std::vector<double> window;
  // verify
  bool quick = false;
  std::uint64_t seed = 42;
};

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

Polynomial parse_coeffs(const std::string& text) {
  std::vector<double> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad polynomial coefficient '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw UsageError("bad polynomial coefficient '" + item + "'");
    c.push_back(v);
  }
  if (c.empty()) throw UsageError("empty coefficient list");
  return Polynomial(std::move(c));
}

std::string coeff_label(const Polynomial& p) {
  if (p.degree() < 0) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i) s += ' ';
    s += fmt17(p.coeffs()[i]);
  }
  return s;
}

// ------------------------------------------------------------ subcommands

void cmd_spectrum(const Options& o, std::ostream& out) {
  const Gain k(o.common.k);
  const SpectrumReport r = compute_spectrum(o.n_max, k, o.tol);
  if (o.common.format == "csv") {
    write_csv_row(out, {"n", "re_tau", "im_tau", "re_lambda", "im_lambda", "residual", "err_tau", "err_re_lambda"});
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      const auto& p = r.points[i];
      const auto& e = r.asymptote_errors[i];
      const cplx lam = p.lambda();
      write_csv_row(out, {std::to_string(p.n), fmt17(p.tau.real()), fmt17(p.tau.imag()), fmt17(lam.real()),
                          fmt17(lam.imag()), fmt17(p.residual), fmt17(e.err_tau), fmt17(e.err_re_lambda)});
    }
    return;
  }
  const AbscissaDetail a = spectral_abscissa_detail(r);
  json j;
  j["schema_version"] = "1";
  j["k"] = k.value();
  j["tolerance"] = r.tolerance;
  j["points"] = json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    const auto& e = r.asymptote_errors[i];
    j["points"].push_back({{"n", p.n},
                           {"tau", complex_json(p.tau)},
                           {"lambda", complex_json(p.lambda())},
                           {"residual", p.residual},
                           {"iterations", p.iterations},
                           {"err_tau", e.err_tau},
                           {"err_tau_quarter", e.err_tau_quarter},
                           {"err_re_lambda", e.err_re_lambda}});
  }
  j["spectral_abscissa"] = {{"value", a.value}, {"argmax_n", a.argmax_n}, {"tail_limit", a.tail_limit}};
  out << j.dump(2) << '\n';
}

void cmd_modes(const Options& o, std::ostream& out) {
  const Gain k(o.common.k);
  ModeProfile prof;
  json extra = json::object();
  if (o.kind == "F") {
    const SpectralPoint p = find_eigenvalue(o.n, k);
    const ModeShape m = build_mode(p, k, o.grid);
    prof = profile_F(m);
    const BoundaryResiduals b = boundary_residuals(m);
    extra["tau"] = complex_json(p.tau);
    extra["lambda"] = complex_json(p.lambda());
    extra["boundary_residuals"] = {{"phi_at_0", b.phi_at_0},
                                   {"slope_at_0", b.slope_at_0},
                                   {"phi_at_1", b.phi_at_1},
                                   {"moment_at_1", b.moment_at_1}};
  } else {
    prof = profile_G(o.n, o.grid);
  }
  if (o.common.format == "csv") {
    write_csv_row(out, {"x", "re_comp1", "im_comp1", "re_comp2", "im_comp2"});
    for (std::size_t j = 0; j < prof.comp1.size(); ++j) {
      write_csv_row(out, {fmt17(prof.grid.x(static_cast<int>(j))), fmt17(prof.comp1[j].real()),
                          fmt17(prof.comp1[j].imag()), fmt17(prof.comp2[j].real()), fmt17(prof.comp2[j].imag())});
    }
    return;
  }
  json j;
  j["schema_version"] = "1";
  j["k"] = k.value();
  j["n"] = o.n;
  j["kind"] = o.kind;
  j["grid_size"] = o.grid;
  const bool norm_ok = o.grid >= 64;
  j["l2_norm"] = norm_ok ? json(l2_norm(prof)) : json(nullptr);
  j["l2_norm_squared"] = norm_ok ? json(l2_norm_squared(prof)) : json(nullptr);
  for (auto& [key, val] : extra.items()) j[key] = val;
  json x = json::array(), c1 = json::array(), c2 = json::array();
  for (std::size_t i = 0; i < prof.comp1.size(); ++i) {
    x.push_back(prof.grid.x(static_cast<int>(i)));
    c1.push_back(complex_json(prof.comp1[i]));
    c2.push_back(complex_json(prof.comp2[i]));
  }
  j["x"] = x;
  j["comp1"] = c1;
  j["comp2"] = c2;
  out << j.dump(2) << '\n';
}

void cmd_closeness(const Options& o, std::ostream& out) {
  const Gain k(o.common.k);
  const auto rows = closeness_tail(o.n_from, o.n_to, k, o.grid);
  if (o.common.format == "csv") {
    write_csv_row(out, {"n", "d_n", "partial_sum"});
    for (const auto& r : rows) write_csv_row(out, {std::to_string(r.n), fmt17(r.d), fmt17(r.partial_sum)});
    return;
  }
  json j;
  j["schema_version"] = "1";
  j["k"] = k.value();
  j["grid_size"] = o.grid;
  j["rows"] = json::array();
  for (const auto& r : rows) j["rows"].push_back({{"n", r.n}, {"d_n", r.d}, {"partial_sum", r.partial_sum}});
  out << j.dump(2) << '\n';
}

int cmd_resolvent(const Options& o, std::ostream& out, std::ostream& err) {
  struct Case {
    double k;
    PolynomialState s;
  };
  std::vector<Case> cases;
  if (!o.phi_coeffs.empty() || !o.psi_coeffs.empty()) {
    PolynomialState s;
    s.phi = o.phi_coeffs.empty() ? Polynomial{} : parse_coeffs(o.phi_coeffs);
    s.psi = o.psi_coeffs.empty() ? Polynomial{} : parse_coeffs(o.psi_coeffs);
    cases.push_back({o.common.k, s});
  } else {
    for (double kv : {0.5, 1.0, 2.0})
      for (const Polynomial& phi : {Polynomial{}, Polynomial{0.0, 0.0, 1.0, -1.0}})
        for (int p = 0; p <= 3; ++p) cases.push_back({kv, {phi, Polynomial::monomial(p)}});
  }
  constexpr double kThreshold = 1e-12;
  bool ok = true;
  json j;
  j["schema_version"] = "1";
  j["threshold"] = kThreshold;
  j["cases"] = json::array();
  if (o.common.format == "csv") {
    write_csv_row(out, {"k", "phi", "psi", "identity_residual", "bc_u0", "bc_du0", "bc_u1", "bc_moment"});
  }
  for (const auto& c : cases) {
    const ResolventReport r = verify_resolvent(c.s, Gain(c.k));
    ok = ok && r.max_residual() <= kThreshold;
    if (o.common.format == "csv") {
      write_csv_row(out, {fmt17(c.k), coeff_label(c.s.phi), coeff_label(c.s.psi), fmt17(r.identity_residual),
                          fmt17(r.bc_u0), fmt17(r.bc_du0), fmt17(r.bc_u1), fmt17(r.bc_moment)});
    } else {
      j["cases"].push_back({{"k", c.k},
                            {"phi", c.s.phi.coeffs()},
                            {"psi", c.s.psi.coeffs()},
                            {"u", r.u.coeffs()},
                            {"identity_residual", r.identity_residual},
                            {"bc_u0", r.bc_u0},
                            {"bc_du0", r.bc_du0},
                            {"bc_u1", r.bc_u1},
                            {"bc_moment", r.bc_moment}});
    }
  }
  if (o.common.format == "json") {
    j["pass"] = ok;
    out << j.dump(2) << '\n';
  }
  if (!ok) err << "resolvent-check: residual above " << fmt_sci(kThreshold) << '\n';
  return ok ? kExitOk : kExitModuleError;
}

void cmd_simulate(const Options& o, std::ostream& out) {
  SimConfig cfg;
  cfg.M = o.M;
  cfg.dt = o.dt;
  cfg.t_final = o.t_final;
  cfg.k = Gain(o.common.k);
  cfg.ic = InitialCondition::parse(o.ic);
  cfg.record_every = o.record_every;
  cfg.validate();
  const EnergyTrace tr = simulate(cfg);
  if (o.common.format == "csv") {
    write_csv_row(out, {"t", "E", "boundary_power"});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      write_csv_row(out, {fmt17(tr.times[i]), fmt17(tr.energy[i]), fmt17(tr.boundary_power[i])});
    }
    return;
  }
  const auto window = o.window.empty() ? default_window(tr) : std::make_pair(o.window[0], o.window[1]);
  json j;
  j["schema_version"] = "1";
  j["config"] = {{"k", cfg.k.value()}, {"M", cfg.M}, {"dt", cfg.dt}, {"t_final", cfg.t_final},
                 {"ic", cfg.ic.name()}, {"record_every", cfg.record_every}};
  json decay = nullptr;
  try {
    const DecayEstimate d = fit_decay(tr, window);
    decay = {{"mu_hat", d.mu_hat}, {"M_hat", d.M_hat}, {"window", {d.window.first, d.window.second}},
             {"residual", d.residual}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonpositiveEnergy) throw;
  }
  j["decay"] = decay;
  j["initial_energy"] = tr.energy.front();
  j["final_energy"] = tr.energy.back();
  j["dissipation_defect"] = tr.times.size() >= 3 ? json(dissipation_check(tr)) : json(nullptr);
  j["max_energy_increase"] = max_energy_increase(tr);
  out << j.dump(2) << '\n';
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto rows = run_verify_suite({o.quick, o.seed});
  if (o.common.format == "json") {
    json j;
    j["schema_version"] = "1";
    j["quick"] = o.quick;
    j["seed"] = o.seed;
    j["checks"] = json::array();
    for (const auto& r : rows) {
      const char* st = r.status == CheckStatus::Pass ? "pass" : r.status == CheckStatus::Fail ? "fail" : "info";
      j["checks"].push_back({{"name", r.name}, {"status", st}, {"measured", r.measured}, {"threshold", r.threshold}});
    }
    j["pass"] = all_passed(rows);
    out << j.dump(2) << '\n';
  } else {
    print_table(out, rows);
  }
  return all_passed(rows) ? kExitOk : kExitModuleError;
}

void add_common(CLI::App* sub, Common& c, bool text_format = false) {
  sub->add_option("--k", c.k, "Feedback gain k >= 0")->check(CLI::NonNegativeNumber)->capture_default_str();
  if (text_format) {
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  } else {
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  }
  sub->add_option("--output,-o", c.output, "Write to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"beamspec: eigenvalues, eigenmodes and energy decay of a boundary-damped Euler-Bernoulli beam"};
  app.name("beamspec");
  app.require_subcommand(1);
  Options o;

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues lambda_n = i tau_n^2 up to --n-max");
  add_common(spectrum, o.common);
  spectrum->add_option("--n-max", o.n_max, "Highest mode index (>= 3)")->check(CLI::Range(kAsymptoticMinIndex, 1000000))->capture_default_str();
  spectrum->add_option("--tol", o.tol, "Newton tolerance")->check(CLI::PositiveNumber)->capture_default_str();

  auto* modes = app.add_subcommand("modes", "Sampled F_n or G_n profile");
  add_common(modes, o.common);
  modes->add_option("--n", o.n, "Mode index")->check(CLI::NonNegativeNumber)->capture_default_str();
  modes->add_option("--grid", o.grid, "Number of Simpson intervals (even, >= 16)")->check(CLI::Range(16, 1 << 24))->capture_default_str();
  modes->add_option("--kind", o.kind, "Profile kind")->check(CLI::IsMember({"F", "G"}))->capture_default_str();

  auto* close = app.add_subcommand("closeness", "Squared distances ||F_n - G_n||^2 and partial sums");
  add_common(close, o.common);
  close->add_option("--n-from", o.n_from, "First index (>= 3)")->check(CLI::Range(kAsymptoticMinIndex, 1000000))->capture_default_str();
  close->add_option("--n-to", o.n_to, "Last index")->check(CLI::Range(kAsymptoticMinIndex + 1, 1000000))->capture_default_str();
  close->add_option("--grid", o.grid, "Number of Simpson intervals (even, >= 64)")->check(CLI::Range(64, 1 << 24))->capture_default_str();

  auto* resolvent = app.add_subcommand("resolvent-check", "A A^{-1} = I on polynomial states");
  add_common(resolvent, o.common);
  resolvent->add_option("--phi", o.phi_coeffs, "Coefficients of phi, ascending powers, comma separated");
  resolvent->add_option("--psi", o.psi_coeffs, "Coefficients of psi, ascending powers, comma separated");

  auto* sim = app.add_subcommand("simulate", "Trapezoidal-rule simulation of the closed loop");
  add_common(sim, o.common);
  sim->add_option("--M", o.M, "Spatial intervals (>= 64)")->check(CLI::Range(64, 1 << 20))->capture_default_str();
  sim->add_option("--dt", o.dt, "Time step")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--t-final", o.t_final, "Final time")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--ic", o.ic, "Initial condition: poly, zero, mixed, 'mode <j>'")->capture_default_str();
  sim->add_option("--record-every", o.record_every, "Record every N steps")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--window", o.window, "Decay fit window t0 t1 (json output)")->expected(2);

  auto* verify = app.add_subcommand("verify", "Run the invariant suite and print a pass/fail table");
  add_common(verify, o.common, true);
  verify->add_flag("--quick", o.quick, "Desk-scale subset");
  verify->add_option("--seed", o.seed, "Seed for random test vectors")->capture_default_str();

  std::vector<const char*> argv{"beamspec"};
  for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: ParseError: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (verify->parsed() && o.common.format == "csv") o.common.format = "text";
    if (modes->parsed() && (o.grid % 2 != 0)) throw UsageError("--grid must be even");
    if (close->parsed() && (o.grid % 2 != 0)) throw UsageError("--grid must be even");
    if (close->parsed() && o.n_to <= o.n_from) throw UsageError("--n-to must exceed --n-from");
    if (modes->parsed() && o.kind == "G" && o.n < 1) throw UsageError("G profiles need --n >= 1");
    if (sim->parsed()) {
      if (o.t_final < 10.0 * o.dt) throw UsageError("--t-final must be >= 10 * --dt");
      if (!o.window.empty() && !(o.window[0] < o.window[1])) throw UsageError("--window needs t0 < t1");
      InitialCondition::parse(o.ic);
    }

    std::unique_ptr<std::ofstream> file;
    std::ostream* sink = &out;
    if (!o.common.output.empty()) {
      file = std::make_unique<std::ofstream>(o.common.output, std::ios::binary);
      if (!*file) throw UsageError("cannot open output file '" + o.common.output + "'");
      sink = file.get();
    }

    int code = kExitOk;
    if (spectrum->parsed()) cmd_spectrum(o, *sink);
    else if (modes->parsed()) cmd_modes(o, *sink);
    else if (close->parsed()) cmd_closeness(o, *sink);
    else if (resolvent->parsed()) code = cmd_resolvent(o, *sink, err);
    else if (sim->parsed()) cmd_simulate(o, *sink);
    else if (verify->parsed()) code = cmd_verify(o, *sink);
    sink->flush();
    return code;
  } catch (const UsageError& e) {
    err << "error: ParseError: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument ? kExitUsage : kExitModuleError;
  }
}

}  // namespace beamspec::cli
