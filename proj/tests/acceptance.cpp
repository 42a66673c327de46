// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dh/config.hpp"
#include "dh/heun.hpp"
#include "dh/verify.hpp"

using namespace dh;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Setup {
  Shape shape;
  MaterialParams m;
  FieldProfile f;
};

Setup preset_setup(Shape s) {
  RunConfig c = preset(s);
  return {s, c.material, c.field};
}

const Shape kShapes[] = {Shape::Constant, Shape::Exponential, Shape::Hyperbolic};

std::string name(Shape s) { return std::string(shape_name(s)); }

template <class... T>
std::string fmt(const char* f, T... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

// (n, mu) pairs with n = 0 once.
std::vector<QuantumNumbers> levels(const Setup& s, double k, int n_max) {
  std::vector<QuantumNumbers> out;
  for (int n = 0; n <= n_max; ++n)
    for (int mu : {1, -1}) {
      if (n == 0 && mu == -1) continue;
      if (try_energy(s.m, s.f, {n, k, mu})) out.push_back({n, k, mu});
    }
  return out;
}

double bench_k(Shape s) {
  switch (s) {
    case Shape::Constant: return 0.7;
    case Shape::Exponential: return 6.0;
    case Shape::Hyperbolic: return 1.0;
  }
  return 0;
}

Outcome ground_state_law() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  int checked = 0;
  for (Shape sh : kShapes) {
    Setup s = preset_setup(sh);
    std::vector<double> ks;
    if (sh == Shape::Constant) {
      ks = linspace(-5, 5, 20);
    } else {
      Interval d = k_domain(s.m, s.f, 0).front();
      double lo = std::isfinite(d.lo) ? d.lo : -10, hi = std::isfinite(d.hi) ? d.hi : 10;
      for (int i = 1; i <= 20; ++i) ks.push_back(lo + (hi - lo) * i / 21.0);
    }
    for (double k : ks) {
      double E = energy(s.m, s.f, {0, k, 1});
      worst = std::max(worst, std::abs(E + s.f.v_d() * k));
      ++checked;
    }
  }
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-12 && checked == 60 && sec < 1,
          fmt("%d k_y values, max |E_0 + v_d k_y| = %.2e, %.3f s", checked, worst, sec)};
}

Outcome oracle_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  struct Point {
    Shape sh;
    double k;
  };
  const Point pts[] = {{Shape::Constant, 0.0}, {Shape::Constant, 0.7}, {Shape::Exponential, 2.0},
                       {Shape::Exponential, 6.0}, {Shape::Hyperbolic, 1.0}};
  double worst = 0, min_ov = 1;
  int count = 0;
  std::string where;
  for (const Point& p : pts) {
    Setup s = preset_setup(p.sh);
    for (const QuantumNumbers& q : levels(s, p.k, 5)) {
      EigenState st = build_state(s.m, s.f, q);
      FDMatch r = fd_match(st, window_for({&st}), 2000, level_scale(s.m, s.f, p.k, q.mu));
      ++count;
      min_ov = std::min(min_ov, r.overlap);
      if (r.rel_err > worst) {
        worst = r.rel_err;
        where = fmt("%s k=%g n=%d mu=%d", name(p.sh).c_str(), p.k, q.n, q.mu);
      }
    }
  }
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-3 && sec < 120,
          fmt("%d levels, max rel err %.2e (%s), min overlap %.6f, %.1f s", count, worst, where.c_str(), min_ov,
              sec)};
}

Outcome graphene_limit() {
  MaterialParams m{0.8, 0.8, 0, 1};
  FieldProfile f = FieldProfile::with_drift(Shape::Constant, 1.0, 0);
  double worst_a = 0, worst_fd = 0;
  for (int n = 0; n <= 10; ++n)
    for (int mu : {1, -1}) {
      double E = energy(m, f, {n, 0, mu});
      double exact = mu * std::sqrt(2.0 * n * f.B0) * m.v_x;
      worst_a = std::max(worst_a, std::abs(E - exact));
      if (n == 0 && mu == -1) continue;
      EigenState st = build_state(m, f, {n, 0, mu});
      FDMatch r = fd_match(st, window_for({&st}), 2000, level_scale(m, f, 0, mu));
      worst_fd = std::max(worst_fd, r.rel_err);
    }
  return {worst_a < 1e-12 && worst_fd < 1e-3,
          fmt("max |E_n - mu sqrt(2nB0) v_x| = %.2e, FD max rel err %.2e (n <= 10)", worst_a, worst_fd)};
}

// Each (n <= 6, mu) pair must be exercised at some k_y; the exponential
// profile binds high n only at large k_y.
Outcome residuals() {
  double worst_ode = 0, worst_fo = 0;
  int states = 0;
  bool covered = true;
  std::string missing;
  for (Shape sh : kShapes) {
    Setup s = preset_setup(sh);
    std::vector<double> ks = {bench_k(sh)};
    if (sh == Shape::Exponential) ks.push_back(20.0);
    std::set<std::pair<int, int>> seen;
    for (double k : ks)
      for (const QuantumNumbers& q : levels(s, k, 6)) {
        EigenState st = build_state(s.m, s.f, q);
        DecoupledSystem sys = make_decoupled(s.m, s.f, k, st.E);
        Interval w = support(st);
        ResidualOptions o = residual_options_for(st);
        worst_ode = std::max({worst_ode, ode_residual(sys, [&](double x) { return st.psi_plus(x); }, 1, w, o),
                              ode_residual(sys, [&](double x) { return st.psi_minus(x); }, -1, w, o)});
        worst_fo = std::max(worst_fo, first_order_residual(
                                          sys, [&](double x) { return st.psi_plus(x); },
                                          [&](double x) { return st.psi_minus(x); }, w, o));
        seen.insert({q.n, q.mu});
        ++states;
      }
    if (seen.size() != 13) {
      covered = false;
      missing += fmt(" %s covers %d/13 (n, mu)", name(sh).c_str(), static_cast<int>(seen.size()));
    }
  }
  return {worst_ode < 1e-6 && worst_fo < 1e-6 && covered,
          fmt("%d states, max second-order %.2e, max first-order %.2e%s", states, worst_ode, worst_fo,
              missing.c_str())};
}

Outcome normalization() {
  double worst_norm = 0, worst_cross = 0;
  int states = 0;
  for (Shape sh : kShapes) {
    Setup s = preset_setup(sh);
    double k = bench_k(sh);
    for (int mu : {1, -1}) {
      std::vector<EigenState> st;
      for (int n = 0; n <= 6; ++n)
        if (try_energy(s.m, s.f, {n, k, mu})) st.push_back(build_state(s.m, s.f, {n, k, mu}));
      states += static_cast<int>(st.size());
      for (size_t i = 0; i < st.size(); ++i) {
        worst_norm = std::max(worst_norm, std::abs(overlap(st[i], st[i]) - 1));
        for (size_t j = i + 1; j < st.size(); ++j) worst_cross = std::max(worst_cross, std::abs(overlap(st[i], st[j])));
      }
    }
  }
  return {worst_norm < 1e-8 && worst_cross < 1e-6,
          fmt("%d states, max |<n|n> - 1| = %.2e, max |<m|n>| = %.2e", states, worst_norm, worst_cross)};
}

// Random admissible parameters with 0.05 <= |beta_nu| <= 0.9.
template <class F>
int random_draws(Shape sh, int want, unsigned seed, F&& body) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  int done = 0;
  for (int t = 0; t < 200 * want && done < want; ++t) {
    MaterialParams m{0.3 + u(rng), 0.3 + u(rng), u(rng) - 0.5, u(rng) < 0.5 ? 1 : -1};
    double beta = (0.05 + 0.85 * u(rng)) * (u(rng) < 0.5 ? -1 : 1);
    FieldProfile f = FieldProfile::with_drift(sh, 0.5 + 3 * u(rng), beta * m.v_y - m.nu * m.v_t, 0.5 + u(rng));
    double k = sh == Shape::Exponential ? 0.5 + 8 * u(rng) : 4 * u(rng) - 2;
    QuantumNumbers q{static_cast<int>(u(rng) * 7), k, u(rng) < 0.5 ? 1 : -1};
    if (!try_energy(m, f, q)) continue;
    body(m, f, q);
    ++done;
  }
  return done;
}

Outcome determinants() {
  std::string detail;
  bool ok = true;
  for (Shape sh : kShapes) {
    double worst = 0;
    int done = random_draws(sh, 200, 1234 + static_cast<unsigned>(sh),
                            [&](const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
                              for (int sign : {1, -1}) worst = std::max(worst, heun_check(m, f, q, sign).det_rel);
                            });
    ok = ok && done == 200 && worst < 1e-10;
    detail += fmt("%s %d draws max %.1e; ", name(sh).c_str(), done, worst);
  }
  return {ok, "|det M|/max|M_ij|: " + detail};
}

Outcome heun_basis() {
  std::string detail;
  bool ok = true;
  for (Shape sh : kShapes) {
    Setup s = preset_setup(sh);
    double worst = 0;
    int count = 0;
    for (const QuantumNumbers& q : levels(s, bench_k(sh), 6))
      for (int sign : {1, -1}) {
        HeunCheck h = heun_check(s.m, s.f, q, sign);
        worst = std::max({worst, h.coeff_err, h.tail});
        ++count;
      }
    ok = ok && worst < 1e-10;
    detail += fmt("%s %d series max %.1e; ", name(sh).c_str(), count, worst);
  }
  return {ok, detail};
}

// Energy spread of the first five admitted levels, ordered by (n, -mu).
std::pair<double, int> spread(const MaterialParams& m, const FieldProfile& f, double k) {
  std::vector<double> E;
  for (int n = 0; E.size() < 5 && n < 200; ++n)
    for (int mu : {1, -1}) {
      if (n == 0 && mu == -1) continue;
      if (E.size() == 5) break;
      if (auto e = try_energy(m, f, {n, k, mu})) E.push_back(*e);
    }
  if (E.empty()) return {0.0, 0};
  auto [lo, hi] = std::minmax_element(E.begin(), E.end());
  return {*hi - *lo, static_cast<int>(E.size())};
}

Outcome degeneracy() {
  bool ok = true;
  std::string detail;
  for (Shape sh : kShapes) {
    Setup s = preset_setup(sh);
    double k = sh == Shape::Hyperbolic ? 2.0 : bench_k(sh);
    auto at = [&](double beta) {
      FieldProfile f = FieldProfile::with_drift(sh, s.f.B0, beta * s.m.v_y - s.m.nu * s.m.v_t, s.f.alpha);
      return spread(s.m, f, k);
    };
    auto [w5, c5] = at(0.5);
    auto [w9, c9] = at(0.999);
    double ratio = w9 / w5;
    ok = ok && ratio < 0.01 && c5 == 5 && c9 == 5;
    detail += fmt("%s k=%g ratio %.4f (%d/%d levels); ", name(sh).c_str(), k, ratio, c9, c5);
  }
  return {ok, "spread(0.999)/spread(0.5): " + detail};
}

Outcome currents() {
  bool jx_zero = true;
  for (Shape sh : kShapes) {
    Setup s = preset_setup(sh);
    for (const QuantumNumbers& q : levels(s, bench_k(sh), 3)) {
      EigenState st = build_state(s.m, s.f, q);
      Interval w = support(st);
      for (const auto& o : observables(st, linspace(w.lo, w.hi, 501))) jx_zero = jx_zero && o.J_x == 0.0;
    }
  }
  Setup c = preset_setup(Shape::Constant);
  EigenState g0 = build_state(c.m, c.f, {0, 0, 1});
  Interval w = support(g0);
  double jmax = 0;
  for (const auto& o : observables(g0, linspace(w.lo, w.hi, 2001))) jmax = std::max(jmax, std::abs(o.J_y));

  MaterialParams gm{1, 1, 0, 1};
  FieldProfile gf = FieldProfile::with_drift(Shape::Constant, 1, 0);
  EigenState gr = build_state(gm, gf, {0, 0, 1});
  double tilt_dev = 0;
  for (const auto& o : observables(gr, linspace(-8, 8, 2001)))
    tilt_dev = std::max(tilt_dev, std::abs(o.J_y - gm.nu * gm.v_t * o.rho));
  return {jx_zero && jmax > 1e-6 && tilt_dev == 0.0,
          fmt("J_x == 0: %s; tilted ground state max |J_y| = %.3e; graphene max |J_y - nu v_t rho| = %.1e",
              jx_zero ? "yes" : "no", jmax, tilt_dev)};
}

Outcome counting() {
  bool ok = true;
  std::string detail;
  struct Set {
    Shape sh;
    std::vector<double> ks;
  };
  for (const Set& set : {Set{Shape::Exponential, {1, 2, 3}}, Set{Shape::Hyperbolic, {-1, 0, 1, 2}}}) {
    Setup s = preset_setup(set.sh);
    int agree = 0;
    detail += name(set.sh) + ":";
    for (double k : set.ks) {
      BoundCount bc = count_bound_states(s.m, s.f, k);
      if (bc.fd == bc.analytic && bc.analytic == max_level(s.m, s.f, k).states) ++agree;
      detail += fmt(" k=%g fd %d / analytic %d (N=%d)", k, bc.fd, bc.analytic, bc.N);
    }
    detail += "; ";
    ok = ok && agree >= 3;
  }
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const Criterion list[] = {
      {"ground-state law", ground_state_law},
      {"oracle equivalence", oracle_equivalence},
      {"graphene limit", graphene_limit},
      {"ODE and intertwining residuals", residuals},
      {"normalization and orthogonality", normalization},
      {"determinant identities", determinants},
      {"Heun-basis equivalence", heun_basis},
      {"degeneracy collapse", degeneracy},
      {"currents", currents},
      {"bound-state counting", counting},
  };
  int failed = 0, idx = 0;
  for (const Criterion& c : list) {
    ++idx;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", idx, c.title, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", idx - failed, idx);
  return failed == 0 ? 0 : 1;
}
