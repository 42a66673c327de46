#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dh/config.hpp"
#include "dh/io.hpp"
#include "dh/verify.hpp"
#include "json.hpp"

using namespace dh;

namespace {

struct Flags {
  std::string config, shape, grid, out, format;
  std::optional<int> n, mu;
  std::optional<double> ky;
};

RunConfig resolve(const Flags& fl) {
  Shape shape = Shape::Constant;
  if (!fl.shape.empty()) {
    try {
      shape = parse_shape(fl.shape);
    } catch (const std::exception& e) {
      throw ConfigError("<flag>", 0, "case", e.what());
    }
  }
  RunConfig c = fl.config.empty() ? preset(shape) : load_config(fl.config);
  if (!fl.shape.empty()) c.field.shape = shape;
  if (fl.n) c.n = *fl.n;
  if (fl.mu) c.mu = *fl.mu;
  if (fl.ky) c.ky = *fl.ky;
  if (!fl.out.empty()) c.out = fl.out;
  if (!fl.format.empty()) c.set("format", fl.format);
  return c;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error("cannot write " + c.out);
  f << text;
}

Tolerances tolerances() {
  const char* env = std::getenv("DIRAC_HEUN_TOL");
  if (!env || !*env) return {};
  try {
    return parse_tolerances(env);
  } catch (const std::exception& e) {
    throw ConfigError("DIRAC_HEUN_TOL", 0, "", e.what());
  }
}

EigenState requested_state(const RunConfig& c) {
  QuantumNumbers q{c.n, c.ky, c.mu};
  q.validate();
  return build_state(c.material, c.field, q);
}

std::vector<double> x_samples(const RunConfig& c, const EigenState& s) {
  if (c.x_grid) return linspace(c.x_grid->lo, c.x_grid->hi, c.x_grid->count);
  Interval w = support(s, 1e-10);
  return linspace(w.lo, w.hi, 801);
}

Footer state_footer(const EigenState& s, double rho_sum) {
  return {{"case", std::string(shape_name(s.shape))},
          {"n", std::to_string(s.q.n)},
          {"mu", std::to_string(s.q.mu)},
          {"k_y", fmt_double(s.q.k_y)},
          {"E", fmt_double(s.E)},
          {"sum_rho_dx", fmt_double(rho_sum)}};
}

int cmd_spectrum(RunConfig c, const Flags& fl) {
  if (!fl.grid.empty()) c.set("ky_grid", fl.grid);
  c.validate();
  ScanSpec spec;
  spec.k_y = linspace(c.ky_grid.lo, c.ky_grid.hi, c.ky_grid.count);
  spec.n_min = c.n_min;
  spec.n_max = c.n_max;
  spec.mus = c.bands;
  SpectrumTable t = scan_spectrum(c.material, c.field, spec);
  std::cerr << "omitted " << t.omitted << " inadmissible (n, mu, k_y) rows\n";
  emit(c, c.format == "json" ? spectrum_json(t) : spectrum_csv(t));
  return 0;
}

int cmd_samples(RunConfig c, const Flags& fl, bool observables_mode) {
  if (!fl.grid.empty()) c.set("x_grid", fl.grid);
  c.validate();
  EigenState s = requested_state(c);
  std::vector<double> xs = x_samples(c, s);
  std::vector<ObservableSample> obs = observables(s, xs);
  Footer footer = state_footer(s, density_sum(obs));
  std::string text;
  if (observables_mode)
    text = c.format == "json" ? observables_json(obs, footer) : observables_csv(obs, footer);
  else {
    auto wf = wavefunction(s, xs);
    text = c.format == "json" ? wavefunction_json(wf, footer) : wavefunction_csv(wf, footer);
  }
  emit(c, text);
  return 0;
}

nlohmann::json params_json(const RunConfig& c) {
  return {{"v_x", c.material.v_x}, {"v_y", c.material.v_y}, {"v_t", c.material.v_t}, {"nu", c.material.nu},
          {"B0", c.field.B0},      {"E0", c.field.E0},      {"v_d", c.field.v_d()}, {"alpha", c.field.alpha},
          {"k_y", c.ky},           {"fd_N", c.fd_N}};
}

int cmd_verify(RunConfig c, const Flags& fl) {
  c.validate();
  Tolerances tol = tolerances();
  int lo = fl.n ? c.n : c.n_min, hi = fl.n ? c.n : c.n_max;
  std::vector<int> mus = fl.mu ? std::vector<int>{c.mu} : c.bands;
  nlohmann::json records = nlohmann::json::array();
  bool all_ok = true;
  for (int n = lo; n <= hi; ++n)
    for (int mu : mus) {
      if (n == 0 && mu != mus.front()) continue;
      QuantumNumbers q{n, c.ky, mu};
      auto E = try_energy(c.material, c.field, q);
      if (!E) {
        std::cerr << "skipping n=" << n << " mu=" << mu << ": not bound\n";
        continue;
      }
      EigenState s = build_state(c.material, c.field, q);
      double scale = level_scale(c.material, c.field, c.ky, mu);
      FDMatch fm = fd_match(s, window_for({&s}), c.fd_N, scale);

      DecoupledSystem sys = make_decoupled(c.material, c.field, c.ky, s.E, true);
      Interval w = support(s, 1e-8);
      ResidualOptions ro = residual_options_for(s);
      // F1 == 0 leaves the second-order equation undefined; reported as null.
      std::optional<double> ode;
      try {
        DecoupledSystem strict = make_decoupled(c.material, c.field, c.ky, s.E);
        ode = std::max(ode_residual(strict, [&](double x) { return s.psi_plus(x); }, 1, w, ro),
                       ode_residual(strict, [&](double x) { return s.psi_minus(x); }, -1, w, ro));
      } catch (const SingularF1& e) {
        std::cerr << "n=" << n << " mu=" << mu << ": " << e.what() << ", second-order residual skipped\n";
      }
      double fo = first_order_residual(
          sys, [&](double x) { return s.psi_plus(x); }, [&](double x) { return s.psi_minus(x); }, w, ro);
      double norm_err = std::abs(overlap(s, s) - 1);
      bool ok = fm.rel_err < tol.rel_err && (!ode || *ode < tol.ode) && fo < tol.first_order && norm_err < tol.norm;
      all_ok = all_ok && ok;
      records.push_back({{"case", shape_name(c.field.shape)},
                         {"params", params_json(c)},
                         {"n", n},
                         {"mu", mu},
                         {"E_analytic", s.E},
                         {"E_fd", fm.E_fd},
                         {"rel_err", fm.rel_err},
                         {"fd_overlap", fm.overlap},
                         {"ode_residual", ode ? nlohmann::json(*ode) : nlohmann::json(nullptr)},
                         {"first_order_residual", fo},
                         {"norm_err", norm_err},
                         {"pass", ok}});
    }
  nlohmann::json report = {
      {"records", records},
      {"tolerances",
       {{"rel_err", tol.rel_err}, {"ode", tol.ode}, {"first_order", tol.first_order}, {"norm", tol.norm}}},
      {"pass", all_ok}};
  emit(c, report.dump(1) + "\n");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound states of tilted anisotropic Dirac cones in proportional E and B fields"};
  app.require_subcommand(1);
  Flags fl;
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--config", fl.config, "key = value parameter file");
    sc->add_option("--case", fl.shape, "constant | exponential | hyperbolic");
    sc->add_option("--n", fl.n, "Landau index");
    sc->add_option("--mu", fl.mu, "band, +1 or -1");
    sc->add_option("--ky", fl.ky, "transverse momentum");
    sc->add_option("--grid", fl.grid, "lo:hi:count; k_y grid for spectrum, x grid otherwise");
    sc->add_option("--out", fl.out, "output path, stdout if omitted");
    sc->add_option("--format", fl.format, "csv | json");
  };
  auto* spectrum = app.add_subcommand("spectrum", "E_n(k_y) table over a k_y grid");
  auto* wavefunction = app.add_subcommand("wavefunction", "psi+ and psi- on an x grid");
  auto* observables = app.add_subcommand("observables", "density and current on an x grid");
  auto* verify = app.add_subcommand("verify", "check analytic states against numerical oracles (JSON)");
  for (auto* sc : {spectrum, wavefunction, observables, verify}) add_common(sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig c = resolve(fl);
    if (*spectrum) return cmd_spectrum(c, fl);
    if (*wavefunction) return cmd_samples(c, fl, false);
    if (*observables) return cmd_samples(c, fl, true);
    return cmd_verify(c, fl);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const CriticalFieldExceeded& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParams& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
