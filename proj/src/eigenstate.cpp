#include "dh/eigenstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "dh/specfun.hpp"

namespace dh {

namespace {

// Everything a case needs to supply. In the natural variable t(x) the two
// SUSY partner functions are phi_i = exp(logenv) * p_i(t).
struct Basis {
  std::function<double(double)> t_of_x;
  std::function<double(double)> logenv_of_x;
  std::function<void(double t, double& p1, double& p2)> polys;
  Weight weight;        // measure in t for rho dx, up to the Jacobian below
  double log_jacobian;  // log of dx/dt factor left after the weight
};

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct Mixing {
  double ch, sh;
};

// A boost with tanh(eta) = -nu beta removes the electric term; in the boosted
// frame the pair satisfies (d/dx + w) phi2 = R phi1, (-d/dx + w) phi1 = R phi2.
Mixing mixing(int nu, double beta, double s) {
  return {std::sqrt((1 + s) / (2 * s)), -nu * beta / std::sqrt(2 * s * (1 + s))};
}

void finish(EigenState& st, const Basis& b, const Mixing& mx) {
  auto g = [&](double t) {
    double p1, p2;
    b.polys(t, p1, p2);
    double u = mx.ch * p1 + mx.sh * p2;
    double v = mx.sh * p1 + mx.ch * p2;
    return u * u + v * v;
  };
  ScaledIntegral I = integrate(g, b.weight, default_nodes(st.q.n));
  double log_total = std::log(I.sum) + I.log_mass + b.log_jacobian;
  st.log_norm = -0.5 * log_total;
  st.norm_const = std::exp(st.log_norm);
  st.aux.push_back({"log_norm", st.log_norm});
  st.aux.push_back({"ch", mx.ch});
  st.aux.push_back({"sh", mx.sh});

  auto shared = std::make_shared<Basis>(b);
  double lnorm = st.log_norm;
  auto raw = [shared, lnorm, mx](double x) {
    double le = shared->logenv_of_x(x);
    if (!(le > -745)) return Spinor{0, 0};
    double p1, p2;
    shared->polys(shared->t_of_x(x), p1, p2);
    double e = std::exp(le + lnorm);
    return Spinor{e * (mx.ch * p1 + mx.sh * p2), e * (mx.sh * p1 + mx.ch * p2)};
  };
  st.eval = raw;

  Interval sup = support(st);
  const int samples = 4001;
  double best = -1, phase = 1;
  for (int i = 0; i < samples; ++i) {
    double x = sup.lo + (sup.hi - sup.lo) * i / (samples - 1);
    double v = raw(x).minus;
    if (std::abs(v) > best) {
      best = std::abs(v);
      phase = v < 0 ? -1 : 1;
    }
  }
  st.eval = [raw, phase](double x) {
    Spinor s = raw(x);
    return Spinor{phase * s.plus, phase * s.minus};
  };
}

EigenState header(Shape shape, const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  EigenState st;
  st.shape = shape;
  st.m = m;
  st.f = f;
  st.q = q;
  if (q.n == 0) st.q.mu = 1;
  st.E = energy(m, f, q);
  return st;
}

}  // namespace

double EigenState::aux_value(const std::string& key) const {
  for (const auto& [k, v] : aux)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

EigenState build_state_constant(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  EigenState st = header(Shape::Constant, m, f, q);
  DerivedParams d = derived_params(m, f, q.k_y, st.E);
  double Om = omega(m, f);
  int n = q.n;
  double R = m.nu * d.signed_root;
  double c1 = n == 0 ? 0.0 : std::copysign(std::sqrt(2.0 * n), R);
  double shift = 2 * d.kappa / Om;
  double sc = std::sqrt(Om / 2);
  st.x_center = -shift;
  st.length = 1 / (sc * std::sqrt(2.0 * n + 2));
  st.aux = {{"Omega", Om}, {"xi_shift", shift}, {"c1", c1}};

  Basis b;
  b.t_of_x = [sc, shift](double x) { return sc * (x + shift); };
  b.logenv_of_x = [sc, shift](double x) {
    double xi = sc * (x + shift);
    return -0.5 * xi * xi;
  };
  b.polys = [n, c1](double t, double& p1, double& p2) {
    p2 = hermite(n, t);
    p1 = n == 0 ? 0.0 : c1 * hermite(n - 1, t);
  };
  b.weight = Weight::gauss();
  b.log_jacobian = std::log(1 / sc);
  finish(st, b, mixing(m.nu, d.beta_nu, d.s));
  return st;
}

EigenState build_state_exponential(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  EigenState st = header(Shape::Exponential, m, f, q);
  DerivedParams d = derived_params(m, f, q.k_y, st.E);
  double al = f.alpha, F = fcal(m, f);
  int n = q.n;
  double lam = (d.kappa - n * al) / al;
  double R = m.nu * d.signed_root;
  double c1 = n == 0 ? 0.0 : std::copysign(std::sqrt((n + 2 * lam) / n), R);
  double theta0 = 2 * F / al;
  double a = 2 * lam;
  st.x_center = -std::log(std::max(lam + n, 0.5) / theta0 * 2) / al;
  st.length = 2 / (al * (40 + 4 * lam + 4 * n));
  st.aux = {{"Fcal", F}, {"lambda", lam}, {"beta_bar", a}, {"theta_scale", theta0}, {"c1", c1}};

  Basis b;
  b.t_of_x = [theta0, al](double x) { return theta0 * std::exp(-al * x); };
  b.logenv_of_x = [theta0, al, lam](double x) {
    double lt = std::log(theta0) - al * x;
    return lam * lt - 0.5 * std::exp(lt);
  };
  b.polys = [n, a, c1](double t, double& p1, double& p2) {
    p2 = laguerre(n, a, t);
    p1 = n == 0 ? 0.0 : c1 * laguerre(n - 1, a, t);
  };
  b.weight = Weight::half_line_exp(a - 1);
  b.log_jacobian = -std::log(al);
  finish(st, b, mixing(m.nu, d.beta_nu, d.s));
  return st;
}

EigenState build_state_hyperbolic(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  EigenState st = header(Shape::Hyperbolic, m, f, q);
  DerivedParams d = derived_params(m, f, q.k_y, st.E);
  double al = f.alpha, F = fcal(m, f);
  int n = q.n;
  double An = F - n * al;
  double a = (An + d.kappa * F / An) / al;
  double bb = (An - d.kappa * F / An) / al;
  double R = m.nu * d.signed_root;
  double c1 = n == 0 ? 0.0 : al * al * (n + a) * (n + bb) / (F * R);
  st.x_center = std::atanh((bb - a) / (a + bb)) / al;
  st.length = 1 / (al * (std::max(a, bb) + 2 * n + 2));
  st.aux = {{"Fcal", F}, {"delta_bar", a + 1}, {"gamma_bar", bb + 1}, {"c1", c1}};

  Basis b;
  b.t_of_x = [al](double x) { return std::tanh(al * x); };
  b.logenv_of_x = [al, a, bb](double x) {
    double z = 2 * al * x;
    double l1m = std::log(2.0) - softplus(z);   // log(1 - tanh(al x))
    double l1p = std::log(2.0) - softplus(-z);  // log(1 + tanh(al x))
    return 0.5 * a * l1m + 0.5 * bb * l1p;
  };
  b.polys = [n, a, bb, c1](double t, double& p1, double& p2) {
    p2 = jacobi(n, a, bb, t);
    p1 = n == 0 ? 0.0 : c1 * jacobi(n - 1, a, bb, t);
  };
  b.weight = Weight::jacobi(a - 1, bb - 1);
  b.log_jacobian = -std::log(al);
  finish(st, b, mixing(m.nu, d.beta_nu, d.s));
  return st;
}

EigenState build_state(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  switch (f.shape) {
    case Shape::Constant: return build_state_constant(m, f, q);
    case Shape::Exponential: return build_state_exponential(m, f, q);
    case Shape::Hyperbolic: return build_state_hyperbolic(m, f, q);
  }
  throw InvalidParams("unknown shape");
}

Interval support(const EigenState& s, double tol) {
  auto mag = [&](double x) {
    Spinor v = s(x);
    return std::max(std::abs(v.plus), std::abs(v.minus));
  };
  double step0 = s.length / 4;
  auto march = [&](double dir) {
    double x = s.x_center, last = s.x_center, step = step0;
    int quiet = 0;
    for (int i = 0; i < 2000000 && quiet < 200; ++i) {
      x += dir * step;
      if (mag(x) >= tol) {
        last = x;
        quiet = 0;
      } else {
        ++quiet;
      }
      if (i > 400) step *= 1.002;
    }
    return last + dir * step0;
  };
  return {march(-1), march(1)};
}

double overlap(const EigenState& a, const EigenState& b) {
  Interval ia = support(a, 1e-14), ib = support(b, 1e-14);
  double lo = std::max(ia.lo, ib.lo), hi = std::min(ia.hi, ib.hi);
  if (!(hi > lo)) return 0;
  double scale = std::min(a.length, b.length);
  int panels = std::clamp(static_cast<int>((hi - lo) / scale), 200, 200000);
  return integrate_interval(
      [&](double x) {
        Spinor u = a(x), v = b(x);
        return u.plus * v.plus + u.minus * v.minus;
      },
      lo, hi, panels, 16);
}

namespace {

ObservableSample sample_at(const EigenState& s, double x) {
  Spinor p = s(x);
  double rho = p.plus * p.plus + p.minus * p.minus;
  double jy = s.m.nu * (2 * s.m.v_y * p.plus * p.minus + s.m.v_t * rho);
  return {x, rho, 0.0, jy};
}

}  // namespace

std::vector<ObservableSample> observables(const EigenState& s, const std::vector<double>& xs) {
  std::vector<ObservableSample> out(xs.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(xs.size()); ++i) out[i] = sample_at(s, xs[i]);
  return out;
}

std::vector<ObservableSample> observables_serial(const EigenState& s, const std::vector<double>& xs) {
  std::vector<ObservableSample> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out[i] = sample_at(s, xs[i]);
  return out;
}

std::vector<WavefunctionSample> wavefunction(const EigenState& s, const std::vector<double>& xs) {
  std::vector<WavefunctionSample> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    Spinor p = s(xs[i]);
    out[i] = {xs[i], p.plus, p.minus};
  }
  return out;
}

double density_sum(const std::vector<ObservableSample>& samples) {
  if (samples.size() < 2) return 0;
  double dx = (samples.back().x - samples.front().x) / (samples.size() - 1);
  double s = 0;
  for (const auto& p : samples) s += p.rho;
  return s * dx;
}

}  // namespace dh
