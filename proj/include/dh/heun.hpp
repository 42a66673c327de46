#pragma once

#include <array>
#include <vector>

#include "dh/spectra.hpp"

namespace dh {

// Dense coefficient vector in ascending powers of z.
struct Poly {
  std::vector<double> c;

  Poly() = default;
  explicit Poly(std::vector<double> coeffs) : c(std::move(coeffs)) {}
  static Poly constant(double v) { return Poly({v}); }
  static Poly linear(double c0, double c1) { return Poly({c0, c1}); }
  double operator()(double z) const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(double s, const Poly& a);

// 2x2 matrix whose vanishing determinant makes the first two series
// coefficients consistent with the polynomial ansatz; row-major.
using Mat2 = std::array<double, 4>;

struct HeunCheck {
  Mat2 M;
  double det_rel;     // |det M| / max|M_ij|
  double coeff_err;   // series vs closed-form combination, max coefficient difference / max coefficient
  double tail;        // size of the first coefficient past degree n, relative
  std::vector<double> series;    // Heun series coefficients, rescaled
  std::vector<double> combined;  // orthogonal-polynomial combination
};

// sign selects the upper (+1) or lower (-1) spinor equation. The state must
// be admissible and beta_nu must be nonzero.
HeunCheck heun_check_constant(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, int sign);
HeunCheck heun_check_exponential(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, int sign);
HeunCheck heun_check_hyperbolic(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, int sign);
HeunCheck heun_check(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, int sign);

}  // namespace dh
