#include "dh/model.hpp"

#include <cmath>
#include <sstream>

namespace dh {

namespace {

std::string fmt_beta(double beta) {
  std::ostringstream os;
  os << "|beta_nu| = |(v_d + nu*v_t)/v_y| = " << std::abs(beta) << " but |beta_nu| < 1 is required";
  return os.str();
}

}  // namespace

CriticalFieldExceeded::CriticalFieldExceeded(double b) : Error(fmt_beta(b)), beta(b) {}

NotBound::NotBound(std::string pred, const std::string& detail)
    : Error("state not bound: " + pred + " fails (" + detail + ")"), predicate(std::move(pred)) {}

std::string_view shape_name(Shape s) {
  switch (s) {
    case Shape::Constant: return "constant";
    case Shape::Exponential: return "exponential";
    case Shape::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

Shape parse_shape(std::string_view name) {
  if (name == "constant") return Shape::Constant;
  if (name == "exponential") return Shape::Exponential;
  if (name == "hyperbolic") return Shape::Hyperbolic;
  throw InvalidParams("unknown field shape '" + std::string(name) + "'");
}

void MaterialParams::validate() const {
  if (!(v_x > 0) || !std::isfinite(v_x)) throw InvalidParams("v_x must be > 0");
  if (!(v_y > 0) || !std::isfinite(v_y)) throw InvalidParams("v_y must be > 0");
  if (!std::isfinite(v_t)) throw InvalidParams("v_t must be finite");
  if (nu != 1 && nu != -1) throw InvalidParams("nu must be +1 or -1");
}

void FieldProfile::validate() const {
  if (!(B0 > 0) || !std::isfinite(B0)) throw InvalidParams("B0 must be > 0");
  if (!(E0 >= 0) || !std::isfinite(E0)) throw InvalidParams("E0 must be >= 0");
  if (shape != Shape::Constant && (!(alpha > 0) || !std::isfinite(alpha)))
    throw InvalidParams("alpha must be > 0");
}

FieldProfile FieldProfile::with_drift(Shape shape, double B0, double v_d, double alpha) {
  FieldProfile f;
  f.shape = shape;
  f.B0 = B0;
  f.E0 = std::abs(v_d) * B0;
  f.alpha = alpha;
  f.reversed = v_d < 0;
  return f;
}

void QuantumNumbers::validate() const {
  if (n < 0) throw InvalidParams("n must be >= 0");
  if (mu != 1 && mu != -1) throw InvalidParams("mu must be +1 or -1");
  if (!std::isfinite(k_y)) throw InvalidParams("k_y must be finite");
}

Potentials potentials(const FieldProfile& f, double x) {
  double A = 0;
  switch (f.shape) {
    case Shape::Constant: A = f.B0 * x; break;
    case Shape::Exponential: A = -(f.B0 / f.alpha) * std::exp(-f.alpha * x); break;
    case Shape::Hyperbolic: A = (f.B0 / f.alpha) * std::tanh(f.alpha * x); break;
  }
  return {A, -f.v_d() * A};
}

double magnetic_field(const FieldProfile& f, double x) {
  switch (f.shape) {
    case Shape::Constant: return f.B0;
    case Shape::Exponential: return f.B0 * std::exp(-f.alpha * x);
    case Shape::Hyperbolic: {
      double c = std::cosh(f.alpha * x);
      return f.B0 / (c * c);
    }
  }
  return 0;
}

double beta_nu(const MaterialParams& m, const FieldProfile& f) {
  double b = (f.v_d() + m.nu * m.v_t) / m.v_y;
  if (!(std::abs(b) < 1)) throw CriticalFieldExceeded(b);
  return b;
}

DerivedParams derived_params(const MaterialParams& m, const FieldProfile& f, double k, double E) {
  DerivedParams d;
  d.beta_nu = beta_nu(m, f);
  d.s = std::sqrt((1 - d.beta_nu) * (1 + d.beta_nu));
  d.kappa = (k * m.v_y + d.beta_nu * (E - m.nu * m.v_t * k)) / (d.s * m.v_x);
  d.signed_root = (E + f.v_d() * k) / (d.s * m.v_x);
  d.epsilon = d.signed_root * d.signed_root;
  return d;
}

}  // namespace dh
