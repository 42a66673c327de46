#include "dh/specfun.hpp"

#include <lapacke.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace dh {

namespace {

void check_pole(double x) {
  if (x <= 0 && x == std::floor(x)) {
    std::ostringstream os;
    os << "gamma has a pole at " << x;
    throw PoleError(os.str());
  }
}

// Jacobi matrix of the monic recurrence: diagonal a_k, off-diagonal sqrt(b_k).
void jacobi_matrix(const Weight& wt, int n, std::vector<double>& d, std::vector<double>& e,
                   double& log_mass) {
  d.assign(n, 0.0);
  e.assign(n > 1 ? n - 1 : 0, 0.0);
  switch (wt.kind) {
    case Weight::Gauss:
      for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(0.5 * k);
      log_mass = 0.5 * std::log(M_PI);
      break;
    case Weight::HalfLineExp:
      if (!(wt.a > -1)) throw InvalidParams("half-line weight needs a > -1");
      for (int k = 0; k < n; ++k) d[k] = 2.0 * k + wt.a + 1;
      for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(k * (k + wt.a));
      log_mass = log_gamma(wt.a + 1);
      break;
    case Weight::Jacobi: {
      double a = wt.a, b = wt.b;
      if (!(a > -1) || !(b > -1)) throw InvalidParams("Jacobi weight needs a, b > -1");
      double ab = a + b;
      d[0] = (b - a) / (ab + 2);
      for (int k = 1; k < n; ++k) {
        double c = 2.0 * k + ab;
        d[k] = (b * b - a * a) / (c * (c + 2));
      }
      for (int k = 1; k < n; ++k) {
        double c = 2.0 * k + ab;
        if (k == 1) {
          // The generic form is 0/0 at a + b = -1.
          e[0] = std::sqrt(4.0 * (1 + a) * (1 + b) / ((ab + 2) * (ab + 2) * (ab + 3)));
          continue;
        }
        double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
        double den = c * c * (c + 1) * (c - 1);
        e[k - 1] = std::sqrt(num / den);
      }
      log_mass = (ab + 1) * std::log(2.0) + log_gamma(a + 1) + log_gamma(b + 1) - log_gamma(ab + 2);
      break;
    }
  }
}

// Orthonormal polynomials of the normalized measure, p_0 = 1, up to degree m.
void orthonormal(const std::vector<double>& d, const std::vector<double>& e, int m, double x, double& pm,
                 double& dpm, double& sumsq) {
  double p0 = 0, p1 = 1, q0 = 0, q1 = 0;
  sumsq = 1;
  for (int k = 0; k < m; ++k) {
    double prev = k > 0 ? e[k - 1] : 0.0;
    double p2 = ((x - d[k]) * p1 - prev * p0) / e[k];
    double q2 = ((x - d[k]) * q1 + p1 - prev * q0) / e[k];
    p0 = p1;
    p1 = p2;
    q0 = q1;
    q1 = q2;
    if (k + 1 < m) sumsq += p1 * p1;
  }
  pm = p1;
  dpm = q1;
}

GaussRule build_rule(const Weight& wt, int n) {
  GaussRule r;
  std::vector<double> d, e;
  jacobi_matrix(wt, n + 1, d, e, r.log_mass);
  std::vector<double> dd(d.begin(), d.begin() + n), ee(e.begin(), e.begin() + n);
  std::vector<double> z(static_cast<size_t>(n) * n);
  int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, dd.data(), ee.data(), z.data(), n);
  if (info != 0) throw NonConvergence("tridiagonal eigensolver failed building Gauss rule");
  r.x = dd;
  r.w.resize(n);
  // Eigenvector weights lose relative accuracy where the weight function is
  // tiny, yet polynomials there can be huge. Polish each node with Newton on
  // p_n and take Christoffel weights 1 / sum_k p_k(x)^2 instead.
  for (int i = 0; i < n; ++i) {
    double x = r.x[i], p = 0, dp = 0, ss = 0;
    for (int it = 0; it < 3; ++it) {
      orthonormal(d, e, n, x, p, dp, ss);
      if (dp == 0 || !std::isfinite(p / dp)) break;
      double step = p / dp;
      if (std::abs(step) > 1e-8 * std::max(1.0, std::abs(x))) break;  // only polish
      x -= step;
    }
    orthonormal(d, e, n, x, p, dp, ss);
    r.x[i] = x;
    double v = z[static_cast<size_t>(i) * n];
    r.w[i] = std::isfinite(ss) && ss > 0 ? 1.0 / ss : v * v;
  }
  return r;
}

}  // namespace

double gamma(double x) {
  check_pole(x);
  return std::tgamma(x);
}

double log_gamma(double x) {
  check_pole(x);
  return std::lgamma(x);
}

double hermite(int n, double x) { return hermite_rec(n, x, 1.0); }
double laguerre(int n, double a, double x) { return laguerre_rec(n, a, x, 1.0); }
double jacobi(int n, double a, double b, double x) { return jacobi_rec(n, a, b, x, 1.0); }

double eval_poly(const PolyFamily& p, double x) {
  if (p.degree < 0) throw InvalidParams("polynomial degree must be >= 0");
  switch (p.kind) {
    case PolyFamily::Hermite: return hermite(p.degree, x);
    case PolyFamily::Laguerre: return laguerre(p.degree, p.a, x);
    case PolyFamily::Jacobi: return jacobi(p.degree, p.a, p.b, x);
  }
  return 0;
}

const GaussRule& gauss_rule(const Weight& wt, int nodes) {
  if (nodes < 1) throw InvalidParams("quadrature needs at least one node");
  using Key = std::tuple<int, double, double, int>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<GaussRule>> cache;
  Key key{static_cast<int>(wt.kind), wt.a, wt.b, nodes};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<GaussRule>(build_rule(wt, nodes));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(rule));
  return *it->second;
}

int default_nodes(int n) { return std::max(40, 2 * n + 10); }

double ScaledIntegral::value() const { return sum * std::exp(log_mass); }

ScaledIntegral integrate(const std::function<double(double)>& f, const Weight& wt, int nodes,
                         double tol) {
  auto run = [&](int m, double& abs_sum) {
    const GaussRule& r = gauss_rule(wt, m);
    double s = 0;
    abs_sum = 0;
    for (size_t i = 0; i < r.x.size(); ++i) {
      double v = r.w[i] * f(r.x[i]);
      s += v;
      abs_sum += std::abs(v);
    }
    return s;
  };
  double a1 = 0, a2 = 0;
  double s1 = run(nodes, a1);
  double s2 = run(2 * nodes, a2);
  double scale = std::max(a2, 1e-300);
  if (!std::isfinite(s2) || std::abs(s2 - s1) > tol * scale) {
    std::ostringstream os;
    os << "quadrature did not converge: " << s1 << " (" << nodes << " nodes) vs " << s2 << " ("
       << 2 * nodes << " nodes)";
    throw NonConvergence(os.str());
  }
  return {s2, gauss_rule(wt, 2 * nodes).log_mass};
}

double quadrature(const std::function<double(double)>& f, const Weight& wt, int nodes, double tol) {
  return integrate(f, wt, nodes, tol).value();
}

double integrate_interval(const std::function<double(double)>& f, double lo, double hi, int panels,
                          int order) {
  const GaussRule& r = gauss_rule(Weight::jacobi(0, 0), order);
  double h = (hi - lo) / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    double c = lo + (p + 0.5) * h;
    double s = 0;
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + 0.5 * h * r.x[i]);
    total += s * h;  // normalized weights sum to one, interval length h
  }
  return total;
}

}  // namespace dh
