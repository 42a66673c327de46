#include "dh/verify.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dh {

namespace {

struct Deriv {
  double v, d1, d2;
};

Deriv differentiate(const std::function<double(double)>& g, double x, double h) {
  double m2 = g(x - 2 * h), m1 = g(x - h), c = g(x), p1 = g(x + h), p2 = g(x + 2 * h);
  return {c, (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h), (-m2 + 16 * m1 - 30 * c + 16 * p1 - p2) / (12 * h * h)};
}

std::vector<double> sample_points(Interval w, int n) {
  n = std::max(n, 2);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = w.lo + (w.hi - w.lo) * i / (n - 1);
  return xs;
}

double max_abs_F1(const DecoupledSystem& sys, const std::vector<double>& xs) {
  double m = 0;
  for (double x : xs) m = std::max(m, std::abs(sys.F1(x)));
  return m;
}

}  // namespace

double DecoupledSystem::p(double x) const { return dF1(x) / F1(x); }

double DecoupledSystem::c(double x, int sign) const {
  double f1 = F1(x), f2 = F2(x);
  return f2 * f2 - f1 * f1 + sign * (f1 * dF2(x) - dF1(x) * f2) / f1;
}

DecoupledSystem make_decoupled(const MaterialParams& m, const FieldProfile& f, double k, double E,
                               bool allow_singular) {
  m.validate();
  f.validate();
  double nu = m.nu, vx = m.v_x, vy = m.v_y, vt = m.v_t, vd = f.v_d();
  if (!allow_singular && nu * vd + vt == 0 && nu * E - vt * k == 0)
    throw SingularF1("F1 vanishes identically (nu*E = v_t*k_y with no field-dependent part)");
  DecoupledSystem s;
  s.F1 = [=](double x) {
    Potentials p = potentials(f, x);
    return nu * (E - nu * vt * k + p.phi - nu * vt * p.A_y) / vx;
  };
  s.dF1 = [=](double x) {
    double B = magnetic_field(f, x);
    return nu * (-vd * B - nu * vt * B) / vx;
  };
  s.F2 = [=](double x) { return vy / vx * (k + potentials(f, x).A_y); };
  s.dF2 = [=](double x) { return vy / vx * magnetic_field(f, x); };
  return s;
}

double ode_residual(const DecoupledSystem& sys, const std::function<double(double)>& psi, int sign,
                    Interval window, const ResidualOptions& opt) {
  std::vector<double> xs = sample_points(window, opt.samples);
  double f1max = max_abs_F1(sys, xs);
  double worst = 0, scale = 0;
  int used = 0;
  for (double x : xs) {
    double f1 = sys.F1(x);
    if (std::abs(f1) <= opt.root_exclusion * f1max) continue;
    ++used;
    Deriv d = differentiate(psi, x, opt.h);
    double f2 = sys.F2(x), df1 = sys.dF1(x), df2 = sys.dF2(x);
    double t0 = -f1 * d.d2;
    double t1 = df1 * d.d1;
    double t2 = f1 * (f2 * f2 - f1 * f1) * d.v;
    double t3 = sign * (f1 * df2 - df1 * f2) * d.v;
    worst = std::max(worst, std::abs(t0 + t1 + t2 + t3));
    scale = std::max(scale, std::abs(t0) + std::abs(t1) + std::abs(t2) + std::abs(t3));
  }
  if (used == 0) throw SingularF1("every residual sample lies next to a root of F1");
  return scale > 0 ? worst / scale : 0.0;
}

double first_order_residual(const DecoupledSystem& sys, const std::function<double(double)>& pp,
                            const std::function<double(double)>& pm, Interval window, const ResidualOptions& opt) {
  std::vector<double> xs = sample_points(window, opt.samples);
  double worst = 0, scale = 0;
  for (double x : xs) {
    Deriv a = differentiate(pp, x, opt.h), b = differentiate(pm, x, opt.h);
    double f1 = sys.F1(x), f2 = sys.F2(x);
    double r1 = -a.d1 + f2 * a.v - f1 * b.v;
    double r2 = b.d1 + f2 * b.v - f1 * a.v;
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
    scale = std::max({scale, std::abs(a.d1) + std::abs(f2 * a.v) + std::abs(f1 * b.v),
                      std::abs(b.d1) + std::abs(f2 * b.v) + std::abs(f1 * a.v)});
  }
  return scale > 0 ? worst / scale : 0.0;
}

ResidualOptions residual_options_for(const EigenState& s) {
  ResidualOptions o;
  o.h = 5e-3 * s.length;
  return o;
}

FDOperator assemble_fd(const MaterialParams& m, const FieldProfile& f, double k, Interval w, int N) {
  m.validate();
  f.validate();
  if (N < 400) throw InvalidParams("FD grid needs N >= 400");
  if (!(w.hi > w.lo)) throw InvalidParams("FD window must have hi > lo");
  auto W = [&](double x) { return k + potentials(f, x).A_y; };
  int first = W(w.lo) > 0 ? 1 : -1;
  int last = W(w.hi) > 0 ? -1 : 1;
  int M = 2 * N - (first == last ? 1 : 0);
  FDOperator op;
  op.N = N;
  op.d = (w.hi - w.lo) / (M + 1);
  op.x.resize(M);
  op.comp.resize(M);
  op.diag.resize(M);
  op.off.resize(M - 1);
  double nu = m.nu;
  for (int s = 0; s < M; ++s) {
    double x = w.lo + op.d * (s + 1);
    op.x[s] = x;
    op.comp[s] = (s % 2 == 0) ? first : -first;
    op.diag[s] = nu * m.v_t * W(x) - potentials(f, x).phi;
  }
  for (int s = 0; s + 1 < M; ++s) {
    double xm = op.x[s] + 0.5 * op.d;
    op.off[s] = nu * (op.comp[s] * m.v_x / (2 * op.d) + 0.5 * m.v_y * W(xm));
  }
  return op;
}

int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double sigma) {
  int count = 0;
  double q = 1;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  for (size_t i = 0; i < diag.size(); ++i) {
    double e2 = i > 0 ? off[i - 1] * off[i - 1] : 0.0;
    q = diag[i] - sigma - (i > 0 ? e2 / q : 0.0);
    if (q == 0) q = -tiny;
    if (q < 0) ++count;
  }
  return count;
}

namespace {

double bisect_index(const FDOperator& op, int idx, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(op.diag, op.off, mid) >= idx + 1) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

Interval gershgorin(const FDOperator& op) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (size_t i = 0; i < op.diag.size(); ++i) {
    double r = (i > 0 ? std::abs(op.off[i - 1]) : 0.0) + (i < op.off.size() ? std::abs(op.off[i]) : 0.0);
    lo = std::min(lo, op.diag[i] - r);
    hi = std::max(hi, op.diag[i] + r);
  }
  return {lo - 1, hi + 1};
}

double nearest_eigenvalue(const FDOperator& op, double target) {
  Interval g = gershgorin(op);
  int c = sturm_count(op.diag, op.off, target);
  int M = static_cast<int>(op.diag.size());
  double best = std::numeric_limits<double>::quiet_NaN();
  if (c > 0) best = bisect_index(op, c - 1, g.lo, target);
  if (c < M) {
    double up = bisect_index(op, c, target, g.hi);
    if (!(std::abs(best - target) <= std::abs(up - target))) best = up;
  }
  return best;
}

}  // namespace

std::vector<double> eigenvalues_in(const FDOperator& op, double lo, double hi) {
  int a = sturm_count(op.diag, op.off, lo), b = sturm_count(op.diag, op.off, hi);
  std::vector<double> out(std::max(b - a, 0));
#pragma omp parallel for schedule(dynamic)
  for (int i = a; i < b; ++i) out[i - a] = bisect_index(op, i, lo, hi);
  return out;
}

std::vector<double> eigenvalues_in_serial(const FDOperator& op, double lo, double hi) {
  int a = sturm_count(op.diag, op.off, lo), b = sturm_count(op.diag, op.off, hi);
  std::vector<double> out(std::max(b - a, 0));
  for (int i = a; i < b; ++i) out[i - a] = bisect_index(op, i, lo, hi);
  return out;
}

std::vector<double> eigenvector(const FDOperator& op, double lambda) {
  lapack_int M = static_cast<lapack_int>(op.diag.size());
  std::vector<double> v(M);
  for (lapack_int i = 0; i < M; ++i) v[i] = 1.0 + 0.1 * std::sin(0.37 * i);
  double shift = lambda;
  for (int it = 0; it < 3; ++it) {
    std::vector<double> dl(op.off), du(op.off), d(op.diag);
    for (double& x : d) x -= shift;
    lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, M, 1, dl.data(), d.data(), du.data(), v.data(), M);
    if (info > 0) {
      shift += 1e-13 * std::max(1.0, std::abs(lambda));
      --it;
      continue;
    }
    if (info < 0) throw NonConvergence("tridiagonal solve failed in inverse iteration");
    double nrm = 0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;
  }
  return v;
}

double fd_overlap(const FDOperator& op, const std::vector<double>& v, const EigenState& s) {
  double uv = 0, uu = 0, vv = 0;
  for (size_t i = 0; i < op.x.size(); ++i) {
    Spinor p = s(op.x[i]);
    double u = op.comp[i] > 0 ? p.plus : p.minus;
    uv += u * v[i];
    uu += u * u;
    vv += v[i] * v[i];
  }
  return std::abs(uv) / std::sqrt(uu * vv);
}

std::vector<double> fd_spectrum(const MaterialParams& m, const FieldProfile& f, double k, Interval window, int N,
                                std::optional<Interval> erange, const std::vector<const EigenState*>& refs) {
  for (const EigenState* r : refs) {
    Interval s = support(*r);
    if (s.lo < window.lo || s.hi > window.hi) {
      std::ostringstream os;
      os << "state n=" << r->q.n << " has support [" << s.lo << ", " << s.hi << "] outside window [" << window.lo
         << ", " << window.hi << "]";
      throw WindowTooSmall(os.str());
    }
  }
  FDOperator op = assemble_fd(m, f, k, window, N);
  Interval g = erange ? *erange : gershgorin(op);
  return eigenvalues_in(op, g.lo, g.hi);
}

double richardson(double Ec, double dc, double Ef, double df) {
  return Ef + (Ef - Ec) * df * df / (dc * dc - df * df);
}

Interval window_for(const std::vector<const EigenState*>& states, double tol) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const EigenState* s : states) {
    Interval i = support(*s, tol);
    lo = std::min(lo, i.lo);
    hi = std::max(hi, i.hi);
  }
  double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

Interval auto_window(const MaterialParams& m, const FieldProfile& f, double k, double target, Interval w, int N,
                     double tol) {
  double prev = nearest_eigenvalue(assemble_fd(m, f, k, w, N), target);
  for (int it = 0; it < 40; ++it) {
    double c = 0.5 * (w.lo + w.hi), h = 0.75 * (w.hi - w.lo);
    Interval next{c - h, c + h};
    // Keep the spacing fixed so only the window size changes.
    int Nn = static_cast<int>(std::ceil(N * (next.hi - next.lo) / (w.hi - w.lo)));
    double E = nearest_eigenvalue(assemble_fd(m, f, k, next, Nn), target);
    if (std::abs(E - prev) < tol * std::max(1.0, std::abs(E))) return w;
    w = next;
    N = Nn;
    prev = E;
  }
  throw NonConvergence("FD window did not stabilise");
}

double level_scale(const MaterialParams& m, const FieldProfile& f, double k, int mu) {
  auto E0 = try_energy(m, f, {0, k, mu});
  auto E1 = try_energy(m, f, {1, k, mu});
  return E0 && E1 ? std::abs(*E1 - *E0) : 0.0;
}

FDMatch fd_match(const EigenState& s, Interval window, int N, double scale) {
  FDOperator c = assemble_fd(s.m, s.f, s.q.k_y, window, N);
  FDOperator fo = assemble_fd(s.m, s.f, s.q.k_y, window, 2 * N);
  FDMatch r;
  r.E_analytic = s.E;
  r.E_coarse = nearest_eigenvalue(c, s.E);
  r.E_fine = nearest_eigenvalue(fo, s.E);
  r.E_fd = richardson(r.E_coarse, c.d, r.E_fine, fo.d);
  r.overlap = fd_overlap(fo, eigenvector(fo, r.E_fine), s);
  r.rel_err = std::abs(r.E_fd - s.E) / std::max(std::abs(s.E), scale);
  return r;
}

std::optional<Interval> continuum_gap(const MaterialParams& m, const FieldProfile& f, double k) {
  double nu = m.nu;
  switch (f.shape) {
    case Shape::Constant: return std::nullopt;
    case Shape::Exponential:
      return Interval{nu * m.v_t * k - m.v_y * std::abs(k), nu * m.v_t * k + m.v_y * std::abs(k)};
    case Shape::Hyperbolic: {
      double Ba = f.B0 / f.alpha, vd = f.v_d();
      double Wp = k + Ba, Wm = k - Ba;
      double cp = nu * m.v_t * Wp + vd * Ba, cm = nu * m.v_t * Wm - vd * Ba;
      return Interval{std::max(cp - m.v_y * std::abs(Wp), cm - m.v_y * std::abs(Wm)),
                      std::min(cp + m.v_y * std::abs(Wp), cm + m.v_y * std::abs(Wm))};
    }
  }
  return std::nullopt;
}

Interval resolved_window(const MaterialParams& m, const FieldProfile& f, double k, Interval w, int N) {
  double d = (w.hi - w.lo) / (2 * N + 1);
  auto bad = [&](double x) { return m.v_y * std::abs(k + potentials(f, x).A_y) * d > 0.25 * m.v_x; };
  auto pull = [&](double from, double to) {
    if (!bad(from)) return from;
    if (bad(to)) throw InvalidParams("FD grid too coarse for the gauge field inside the window");
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (from + to);
      (bad(mid) ? from : to) = mid;
    }
    return to;
  };
  double mid = 0.5 * (w.lo + w.hi);
  return {pull(w.lo, mid), pull(w.hi, mid)};
}

BoundCount count_bound_states(const MaterialParams& m, const FieldProfile& f, double k, int N_start, int N_limit) {
  auto gap = continuum_gap(m, f, k);
  if (!gap) throw InvalidParams("constant fields have no continuum; counting is undefined");
  BoundCount bc;
  bc.gap = *gap;
  bc.analytic = max_level(m, f, k).states;
  std::vector<EigenState> states;
  LevelBound lb = max_level(m, f, k);
  for (int n = 0; n <= lb.n_max; ++n)
    for (int mu : {1, -1}) {
      if (n == 0 && mu == -1) continue;
      if (try_energy(m, f, {n, k, mu})) states.push_back(build_state(m, f, {n, k, mu}));
    }
  std::vector<const EigenState*> ptrs;
  for (const auto& s : states) ptrs.push_back(&s);
  bc.window = ptrs.empty() ? Interval{-20 / f.alpha, 20 / f.alpha} : window_for(ptrs);
  if (!(bc.gap.hi > bc.gap.lo)) {
    bc.fd = 0;
    return bc;
  }
  auto count_at = [&](int N) {
    FDOperator op = assemble_fd(m, f, k, resolved_window(m, f, k, bc.window, N), N);
    return sturm_count(op.diag, op.off, bc.gap.hi) - sturm_count(op.diag, op.off, bc.gap.lo);
  };
  int N = N_start;
  int prev = count_at(N);
  while (2 * N <= N_limit) {
    int cur = count_at(2 * N);
    N *= 2;
    if (cur == prev) {
      bc.fd = cur;
      bc.N = N;
      return bc;
    }
    prev = cur;
  }
  throw NonConvergence("FD bound-state count did not stabilise under refinement");
}

}  // namespace dh
