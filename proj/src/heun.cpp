#include "dh/heun.hpp"

#include <algorithm>
#include <cmath>

#include "dh/specfun.hpp"

namespace dh {

double Poly::operator()(double z) const {
  double v = 0;
  for (size_t i = c.size(); i-- > 0;) v = v * z + c[i];
  return v;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c.empty() || b.c.empty()) return Poly();
  Poly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

Poly operator*(double s, const Poly& a) {
  Poly r = a;
  for (double& v : r.c) v *= s;
  return r;
}

namespace {

std::vector<double> coeffs(const Poly& p, int len) {
  std::vector<double> v(len, 0.0);
  for (int i = 0; i < len && i < static_cast<int>(p.c.size()); ++i) v[i] = p.c[i];
  return v;
}

double max_abs(const Mat2& M) {
  return std::max({std::abs(M[0]), std::abs(M[1]), std::abs(M[2]), std::abs(M[3])});
}

// Compares the series (degree n part) with the combination after the best
// common rescaling, and records how far the series is from terminating.
void compare(HeunCheck& h, std::vector<double> A, const Poly& comb, int n) {
  std::vector<double> c = coeffs(comb, n + 1);
  double dot = 0, aa = 0, cmax = 0, amax = 0;
  for (int i = 0; i <= n; ++i) {
    dot += A[i] * c[i];
    aa += A[i] * A[i];
    cmax = std::max(cmax, std::abs(c[i]));
  }
  for (double v : A) amax = std::max(amax, std::abs(v));
  double sc = dot / aa;
  double err = 0;
  for (int i = 0; i <= n; ++i) err = std::max(err, std::abs(sc * A[i] - c[i]));
  double tail = 0;
  for (size_t i = n + 1; i < A.size(); ++i) tail = std::max(tail, std::abs(A[i]));
  h.coeff_err = err / cmax;
  h.tail = tail / amax;
  for (double& v : A) v *= sc;
  A.resize(n + 1);
  h.series = A;
  h.combined = c;
}

void finish_det(HeunCheck& h) {
  double det = h.M[0] * h.M[3] - h.M[1] * h.M[2];
  double sc = max_abs(h.M);
  h.det_rel = sc > 0 ? std::abs(det) / sc : 0.0;
}

}  // namespace

HeunCheck heun_check_constant(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, int sign) {
  double E = energy_constant(m, f, q);
  DerivedParams d = derived_params(m, f, q.k_y, E);
  ConstantCaseParams p = constant_params(m, f, q.k_y, E);
  int n = q.n;
  double bb = p.bbar, ab = p.abar;
  double db = sign > 0 ? p.dbar_plus : p.dbar_minus;
  double c = 0.5 * (db + bb * (1 + ab));
  HeunCheck h;
  h.M = {1.0, 0.5 * bb * (1 + sign * d.s), 0.5 * bb * (-1 + sign * d.s), -2.0 * n};
  finish_det(h);

  // A_1 = -c; A_2 is free because the recursion is resonant at k = 1, and is
  // fixed by demanding A_{n+1} = 0.
  // The recursion is linear in (A_1, A_2), so the series splits into a
  // particular part P (A_2 = 0) and the resonant part Q (A_0 = A_1 = 0).
  auto run = [&](double a0, double a1, double a2) {
    std::vector<double> A(n + 3, 0.0);
    A[0] = a0;
    A[1] = a1;
    A[2] = a2;
    for (int k = 2; k <= n + 1; ++k)
      A[k + 1] = ((bb * k + c) * A[k] - (2.0 * n - 2 * k + 2) * A[k - 1]) / ((k + 1.0) * (k - 1.0));
    return A;
  };
  std::vector<double> A = run(1.0, -c, 0.0);
  if (n >= 2) {
    std::vector<double> Q = run(0.0, 0.0, 1.0);
    double t = -A[n + 1] / Q[n + 1];
    for (size_t i = 2; i < A.size(); ++i) A[i] += t * Q[i];
  }
  Poly zs = Poly::linear(0.5 * bb, 1.0);
  Poly one = Poly::constant(1.0);
  Poly comb = hermite_rec(n, zs, one);
  if (n > 0) comb = comb + (-0.5 * bb * (1 + sign * d.s)) * hermite_rec(n - 1, zs, one);
  compare(h, A, comb, n);
  return h;
}

HeunCheck heun_check_exponential(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q,
                                 int sign) {
  double E = energy_exponential(m, f, q);
  ExponentialCaseParams p = exponential_params(m, f, q.k_y, E);
  int n = q.n;
  double ab = p.abar, bb = p.bbar, gb = p.gbar, db = p.dbar;
  double eta = sign > 0 ? p.ebar_plus : p.ebar_minus;
  double xi = ((bb + 1) * (ab - gb - 1) + 1) / 2 - eta;
  double ze = ((gb + 1) * (ab + bb + 1) - 1) / 2 + db + eta;
  HeunCheck h;
  h.M = {-1.0 * n, ze, (bb + ab) + ze, -ab};
  finish_det(h);

  std::vector<double> A(n + 2, 0.0);
  A[0] = 1;
  for (int k = 0; k <= n; ++k) {
    double cA = k * (k - 1 - ab + bb + gb + 2) - xi;
    double cB = ab * (k - 1) + xi + ze;
    double prev = k >= 1 ? A[k - 1] : 0.0;
    A[k + 1] = (cA * A[k] + cB * prev) / ((k + 1.0) * (k + bb + 1));
  }
  Poly x = Poly::linear(0.0, -ab);
  Poly one = Poly::constant(1.0);
  Poly comb = laguerre_rec(n, bb - 1, x, one);
  if (n > 0) comb = comb + (ze / n) * laguerre_rec(n - 1, bb, x, one);
  compare(h, A, comb, n);
  return h;
}

HeunCheck heun_check_hyperbolic(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, int sign) {
  double E = energy_hyperbolic(m, f, q);
  DerivedParams d = derived_params(m, f, q.k_y, E);
  HyperbolicCaseParams p = hyperbolic_params(m, f, q.k_y, E);
  int n = q.n;
  double as = p.a_sing, A_ = p.alpha_bar, B_ = p.beta_bar, g = p.gamma_bar, dl = p.delta_bar;
  double qq = sign > 0 ? p.q_plus : p.q_minus;
  double e = A_ + B_ + 1 - g - dl;

  auto Rk = [&](double k) {
    return 4 * (k - 1) * (k - A_) * (k + B_) * (k - 1 - A_ + B_) / ((2 * k - 1 - A_ + B_) * (2 * k - A_ + B_));
  };
  auto Pk = [&](double k) {
    return 4 * k * (k - A_ + B_) * (k + B_ - g) * (k - 2 - A_ + g) / ((2 * k - 2 - A_ + B_) * (2 * k - 1 - A_ + B_));
  };
  auto Qk = [&](double k) {
    double aa = A_, bq = B_, G = g, a = as;
    double t = (-2 + 4 * a) * k * k * k * k - 4 * (-1 + 2 * a) * k * k * k * (1 + aa - bq) +
               (2 + aa - bq) * (qq * (aa - bq) + (1 + aa) * bq * (1 - a * aa + a * bq) - bq * G) +
               k * k *
                   (-4 + 4 * qq - 5 * aa - 2 * aa * aa + 7 * bq + 6 * aa * bq - 2 * bq * bq +
                    a * (4 + 10 * aa + 5 * aa * aa - 14 * (1 + aa) * bq + 5 * bq * bq) - (-2 + aa + bq) * G) -
               k * (1 + aa - bq) *
                   (4 * qq + a * aa * aa + bq * (3 + a * (-6 + bq) - G) + 2 * (-1 + G) -
                    aa * (1 - 2 * bq + a * (-2 + 6 * bq) + G));
    return -4 * t / ((-2 + 2 * k - aa + bq) * (2 * k - aa + bq));
  };
  HeunCheck h;
  if (n == 0) {
    h.M = {1.0, 0.0, 0.0, 1.0};
    h.det_rel = 0;
  } else {
    h.M = {Rk(0), Qk(1), Qk(0), Pk(1)};
    finish_det(h);
  }

  std::vector<double> C(n + 2, 0.0);
  C[0] = 1;
  for (int k = 0; k <= n; ++k) {
    double R = as * (k + 1) * (k + g);
    double Q = -k * ((k - 1 + g) * (1 + as) + as * dl + e) - qq;
    double P = (k - 1 + A_) * (k - 1 + B_);
    double prev = k >= 1 ? C[k - 1] : 0.0;
    C[k + 1] = -(Q * C[k] + P * prev) / R;
  }
  Poly x = Poly::linear(-1.0, 2.0);
  Poly one = Poly::constant(1.0);
  Poly comb = jacobi_rec(n, dl - 1, g - 1, x, one);
  if (n > 0) {
    double F = p.Fcal, nal = n * f.alpha;
    double cf = F * d.signed_root * (1 + sign * d.s) / (nal * (nal - 2 * F) * d.beta_nu);
    comb = comb + cf * jacobi_rec(n - 1, dl - 1, g - 1, x, one);
  }
  compare(h, C, comb, n);
  return h;
}

HeunCheck heun_check(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, int sign) {
  switch (f.shape) {
    case Shape::Constant: return heun_check_constant(m, f, q, sign);
    case Shape::Exponential: return heun_check_exponential(m, f, q, sign);
    case Shape::Hyperbolic: return heun_check_hyperbolic(m, f, q, sign);
  }
  throw InvalidParams("unknown shape");
}

}  // namespace dh
