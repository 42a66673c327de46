#include "dh/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dh {

namespace {

constexpr double kRelTol = 1e-12;

bool strictly_greater(double a, double b) {
  return a - b > kRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

struct Common {
  double beta, s, vd;
};

Common common(const MaterialParams& m, const FieldProfile& f) {
  m.validate();
  f.validate();
  double b = beta_nu(m, f);
  return {b, std::sqrt((1 - b) * (1 + b)), f.v_d()};
}

void require_shape(const FieldProfile& f, Shape s) {
  if (f.shape != s)
    throw InvalidParams("field shape is " + std::string(shape_name(f.shape)) + ", expected " +
                        std::string(shape_name(s)));
}

double hyperbolic_kappa_bound(double F, double nal) { return (F - nal) * (F - nal) / F; }

}  // namespace

double omega(const MaterialParams& m, const FieldProfile& f) {
  Common c = common(m, f);
  return 2 * (m.v_y / m.v_x) * c.s * f.B0;
}

double fcal(const MaterialParams& m, const FieldProfile& f) {
  Common c = common(m, f);
  return c.s * (m.v_y / m.v_x) * f.B0 / f.alpha;
}

ConstantCaseParams constant_params(const MaterialParams& m, const FieldProfile& f, double k, double E) {
  DerivedParams d = derived_params(m, f, k, E);
  ConstantCaseParams p;
  p.Omega = omega(m, f);
  p.abar = -2;
  p.bbar = (2 / d.beta_nu) * std::sqrt(2 / p.Omega) * d.signed_root;
  p.gbar = 2 * d.epsilon / p.Omega;
  double dl = (2 / d.beta_nu) * d.s * std::sqrt(2 / p.Omega) * d.signed_root;
  p.dbar_plus = -dl;
  p.dbar_minus = dl;
  return p;
}

ExponentialCaseParams exponential_params(const MaterialParams& m, const FieldProfile& f, double k,
                                         double E) {
  DerivedParams d = derived_params(m, f, k, E);
  double al = f.alpha, b = d.beta_nu, se = d.signed_root, kap = d.kappa;
  ExponentialCaseParams p;
  p.Fcal = fcal(m, f);
  p.abar = 2 * (se - b * kap) / (al * b);
  p.bbar = 2 * std::sqrt(kap * kap - d.epsilon) / al;
  p.gbar = -2;
  p.dbar = 2 * kap * (b * kap - se) / (al * al * b);
  double common_part = al * al * b + 2 * kap * (se - b * kap);
  p.ebar_plus = (common_part - al * d.s * se) / (al * al * b);
  p.ebar_minus = (common_part + al * d.s * se) / (al * al * b);
  return p;
}

HyperbolicCaseParams hyperbolic_params(const MaterialParams& m, const FieldProfile& f, double k,
                                       double E) {
  DerivedParams d = derived_params(m, f, k, E);
  double al = f.alpha, b = d.beta_nu, se = d.signed_root, kap = d.kappa;
  HyperbolicCaseParams p;
  double F = fcal(m, f);
  p.Fcal = F;
  p.a_sing = 0.5 * (1 + (se - b * kap) / (b * F));
  p.delta_bar = std::sqrt((F + kap) * (F + kap) - d.epsilon) / al + 1;
  p.gamma_bar = std::sqrt((F - kap) * (F - kap) - d.epsilon) / al + 1;
  double apb = p.delta_bar + p.gamma_bar - 2;
  p.alpha_bar = 0.5 * apb - F / al;
  p.beta_bar = 0.5 * apb + F / al;
  double atb = p.alpha_bar * p.beta_bar;
  double base = p.a_sing * apb + 2 * p.a_sing * atb - (p.gamma_bar - 1);
  double tail = d.s * se / (al * b);
  p.q_plus = 0.5 * (base + tail);
  p.q_minus = 0.5 * (base - tail);
  return p;
}

double energy_constant(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  require_shape(f, Shape::Constant);
  q.validate();
  Common c = common(m, f);
  return -q.k_y * c.vd + q.mu * m.v_x * c.s * std::sqrt(q.n * omega(m, f));
}

double energy_exponential(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  require_shape(f, Shape::Exponential);
  q.validate();
  Common c = common(m, f);
  double k = q.k_y, al = f.alpha;
  double shift = m.v_y * k - al * m.v_x * c.s * q.n;
  double vk = m.v_y * k;
  double rad = vk * vk - shift * shift;
  if (rad < 0) {
    if (rad < -kRelTol * (vk * vk + shift * shift))
      throw NotBound("kappa_n > n*alpha", "no real energy, radicand " + num(rad));
    rad = 0;
  }
  double E = -c.vd * k + al * m.v_x * c.beta * c.s * q.n + q.mu * c.s * std::sqrt(rad);
  if (auto v = violated_predicate(m, f, q, E)) throw NotBound(*v, "n = " + std::to_string(q.n) + ", k_y = " + num(k));
  return E;
}

double energy_hyperbolic(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  require_shape(f, Shape::Hyperbolic);
  q.validate();
  Common c = common(m, f);
  double F = fcal(m, f), nal = q.n * f.alpha, k = q.k_y;
  if (!strictly_greater(F, nal)) throw NotBound("n*alpha < F", "n*alpha = " + num(nal) + ", F = " + num(F));
  double An = F - nal;
  double D = An * An + c.beta * c.beta * (2 * F - nal) * nal;
  double inner = m.v_x * m.v_x * D - c.s * c.s * m.v_y * m.v_y * k * k;
  double rad = nal * (2 * F - nal) * inner / (c.s * c.s * An * An);
  if (rad < 0) {
    if (inner < -kRelTol * m.v_x * m.v_x * D)
      throw NotBound("|kappa_n| < (F - n*alpha)^2/F", "no real energy, radicand " + num(rad));
    rad = 0;
  }
  double E = m.nu * k * m.v_t - m.v_y * c.beta * k * F * F / D + q.mu * c.s * c.s * An * An / D * std::sqrt(rad);
  if (auto v = violated_predicate(m, f, q, E)) throw NotBound(*v, "n = " + std::to_string(q.n) + ", k_y = " + num(k));
  return E;
}

double energy(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  switch (f.shape) {
    case Shape::Constant: return energy_constant(m, f, q);
    case Shape::Exponential: return energy_exponential(m, f, q);
    case Shape::Hyperbolic: return energy_hyperbolic(m, f, q);
  }
  return 0;
}

std::optional<double> try_energy(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q) {
  try {
    return energy(m, f, q);
  } catch (const NotBound&) {
    return std::nullopt;
  }
}

std::optional<std::string> violated_predicate(const MaterialParams& m, const FieldProfile& f,
                                              const QuantumNumbers& q, double E) {
  DerivedParams d = derived_params(m, f, q.k_y, E);
  double nal = q.n * f.alpha;
  switch (f.shape) {
    case Shape::Constant: return std::nullopt;
    case Shape::Exponential:
      if (!strictly_greater(d.kappa, nal)) return "kappa_n > n*alpha";
      return std::nullopt;
    case Shape::Hyperbolic: {
      double F = fcal(m, f);
      if (!strictly_greater(F, nal)) return "n*alpha < F";
      if (!strictly_greater(hyperbolic_kappa_bound(F, nal), std::abs(d.kappa)))
        return "|kappa_n| < (F - n*alpha)^2/F";
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool admissible(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, double E) {
  return !violated_predicate(m, f, q, E).has_value();
}

double quantization_residual(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q,
                             double E) {
  DerivedParams d = derived_params(m, f, q.k_y, E);
  double n = q.n;
  switch (f.shape) {
    case Shape::Constant: return 2 * d.epsilon / omega(m, f) - 2 * n;
    case Shape::Exponential: {
      double r = d.kappa * d.kappa - d.epsilon;
      if (r < 0) return std::numeric_limits<double>::quiet_NaN();
      return (-d.kappa + std::sqrt(r)) / f.alpha + n;
    }
    case Shape::Hyperbolic: {
      HyperbolicCaseParams p = hyperbolic_params(m, f, q.k_y, E);
      double Fa = p.Fcal / f.alpha;
      double scale = n * n + Fa * Fa;
      double S = p.alpha_bar + p.beta_bar;
      double phys = n * n + S * n + S * S / 4 - Fa * Fa;
      // The n*alpha -> -n*alpha roots sit on the other indicial root
      // gamma_bar - 1 < 0, which is what makes them non-normalizable.
      double Sm = (p.delta_bar - 1) - (p.gamma_bar - 1);
      double mirror = n * n - Sm * n + Sm * Sm / 4 - Fa * Fa;
      double r = std::abs(phys) <= std::abs(mirror) ? phys : mirror;
      return r / scale;
    }
  }
  return 0;
}

std::vector<double> mirrored_hyperbolic_energies(const MaterialParams& m, const FieldProfile& f,
                                                 const QuantumNumbers& q) {
  require_shape(f, Shape::Hyperbolic);
  Common c = common(m, f);
  double F = fcal(m, f), nal = q.n * f.alpha, k = q.k_y;
  if (q.n == 0) return {};
  double Ap = F + nal;
  double D = Ap * Ap - c.beta * c.beta * (2 * F + nal) * nal;
  double inner = m.v_x * m.v_x * D - c.s * c.s * m.v_y * m.v_y * k * k;
  double rad = -nal * (2 * F + nal) * inner / (c.s * c.s * Ap * Ap);
  if (!(rad >= 0) || D == 0) return {};
  double base = m.nu * k * m.v_t - m.v_y * c.beta * k * F * F / D;
  double r = c.s * c.s * Ap * Ap / D * std::sqrt(rad);
  return {base + r, base - r};
}

LevelBound max_level(const MaterialParams& m, const FieldProfile& f, double k) {
  LevelBound out;
  Common c = common(m, f);
  int upper = 0;
  switch (f.shape) {
    case Shape::Constant:
      out.unbounded = true;
      return out;
    case Shape::Exponential:
      if (k > 0) upper = static_cast<int>(std::floor(2 * m.v_y * k / (f.alpha * m.v_x * c.s))) + 1;
      break;
    case Shape::Hyperbolic:
      upper = static_cast<int>(std::ceil(fcal(m, f) / f.alpha));
      break;
  }
  for (int n = 0; n <= upper; ++n) {
    for (int mu : {1, -1}) {
      if (n == 0 && mu == -1) continue;
      if (try_energy(m, f, {n, k, mu})) {
        out.n_max = n;
        ++out.states;
      }
    }
  }
  return out;
}

std::vector<Interval> k_domain(const MaterialParams& m, const FieldProfile& f, int n) {
  if (f.shape == Shape::Constant) throw InvalidParams("k_domain is defined for exponential and hyperbolic fields");
  Common c = common(m, f);
  auto exists = [&](double k) {
    return try_energy(m, f, {n, k, 1}).has_value() || (n > 0 && try_energy(m, f, {n, k, -1}).has_value());
  };
  double kmax;
  if (f.shape == Shape::Exponential) {
    kmax = 10 * (1 + f.alpha * m.v_x * c.s * n / m.v_y) * std::max(1.0, f.B0 / f.alpha);
  } else {
    double F = fcal(m, f), nal = n * f.alpha;
    double D = (F - nal) * (F - nal) + c.beta * c.beta * std::abs(2 * F - nal) * nal;
    kmax = 1.1 * std::max(m.v_x * std::sqrt(D) / (c.s * m.v_y), f.B0 / f.alpha) + 1;
  }
  const int samples = 4001;
  std::vector<double> ks = linspace(-kmax, kmax, samples);
  std::vector<char> in(samples);
  for (int i = 0; i < samples; ++i) in[i] = exists(ks[i]);
  auto edge = [&](double a, double b) {
    bool ina = exists(a);
    for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
      double mid = 0.5 * (a + b);
      if (exists(mid) == ina) a = mid; else b = mid;
    }
    return 0.5 * (a + b);
  };
  auto far = [&](double k) { return exists(k) && exists(4 * k) && exists(16 * k); };
  std::vector<Interval> out;
  double inf = std::numeric_limits<double>::infinity();
  double start = 0;
  bool open = false;
  if (in[0]) {
    start = far(ks[0]) ? -inf : ks[0];
    open = true;
  }
  for (int i = 1; i < samples; ++i) {
    if (in[i] == in[i - 1]) continue;
    double e = edge(ks[i - 1], ks[i]);
    if (in[i]) {
      start = e;
      open = true;
    } else {
      out.push_back({start, e});
      open = false;
    }
  }
  if (open) out.push_back({start, far(ks.back()) ? inf : ks.back()});
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(std::max(count, 0));
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  return v;
}

namespace {

void fill_cell(const MaterialParams& m, const FieldProfile& f, const ScanSpec& s, size_t cell,
               std::vector<SpectrumRow>& rows, size_t& omitted) {
  int nn = s.n_max - s.n_min + 1;
  double k = s.k_y[cell / nn];
  int n = s.n_min + static_cast<int>(cell % nn);
  bool first = true;
  for (int mu : s.mus) {
    if (n == 0 && !first) break;
    first = false;
    if (auto E = try_energy(m, f, {n, k, mu}))
      rows.push_back({f.shape, n, mu, k, *E});
    else
      ++omitted;
  }
}

SpectrumTable gather(std::vector<std::vector<SpectrumRow>>& parts, std::vector<size_t>& omitted) {
  SpectrumTable t;
  for (size_t i = 0; i < parts.size(); ++i) {
    t.rows.insert(t.rows.end(), parts[i].begin(), parts[i].end());
    t.omitted += omitted[i];
  }
  return t;
}

void check_scan(const MaterialParams& m, const FieldProfile& f, const ScanSpec& s) {
  common(m, f);
  if (s.n_min < 0 || s.n_max < s.n_min) throw InvalidParams("scan needs 0 <= n_min <= n_max");
  for (int mu : s.mus)
    if (mu != 1 && mu != -1) throw InvalidParams("mu must be +1 or -1");
}

}  // namespace

SpectrumTable scan_spectrum(const MaterialParams& m, const FieldProfile& f, const ScanSpec& s) {
  check_scan(m, f, s);
  size_t cells = s.k_y.size() * static_cast<size_t>(s.n_max - s.n_min + 1);
  std::vector<std::vector<SpectrumRow>> parts(cells);
  std::vector<size_t> omitted(cells, 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long c = 0; c < static_cast<long long>(cells); ++c) fill_cell(m, f, s, c, parts[c], omitted[c]);
  return gather(parts, omitted);
}

SpectrumTable scan_spectrum_serial(const MaterialParams& m, const FieldProfile& f, const ScanSpec& s) {
  check_scan(m, f, s);
  size_t cells = s.k_y.size() * static_cast<size_t>(s.n_max - s.n_min + 1);
  std::vector<std::vector<SpectrumRow>> parts(cells);
  std::vector<size_t> omitted(cells, 0);
  for (size_t c = 0; c < cells; ++c) fill_cell(m, f, s, c, parts[c], omitted[c]);
  return gather(parts, omitted);
}

}  // namespace dh
