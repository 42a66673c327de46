#pragma once

#include <string>
#include <string_view>

#include "dh/errors.hpp"

// Units: hbar = e = 1. Velocities are dimensionless, lengths are whatever
// makes alpha and sqrt(Omega) order one.
namespace dh {

enum class Shape { Constant, Exponential, Hyperbolic };

std::string_view shape_name(Shape s);
Shape parse_shape(std::string_view name);

struct MaterialParams {
  double v_x = 1.0;
  double v_y = 1.0;
  double v_t = 0.0;
  int nu = 1;

  void validate() const;
};

// B0 > 0 and E0 >= 0 always. Antiparallel fields are selected with
// `reversed`, which flips the sign of v_d = E0/B0.
struct FieldProfile {
  Shape shape = Shape::Constant;
  double B0 = 1.0;
  double E0 = 0.0;
  double alpha = 1.0;
  bool reversed = false;

  double v_d() const { return reversed ? -E0 / B0 : E0 / B0; }
  void validate() const;

  // Convenience for callers that think in terms of the drift velocity.
  static FieldProfile with_drift(Shape shape, double B0, double v_d, double alpha = 1.0);
};

struct QuantumNumbers {
  int n = 0;
  double k_y = 0.0;
  int mu = 1;

  void validate() const;
};

struct Potentials {
  double A_y;
  double phi;
};

// Landau gauge, phi = -v_d A_y.
Potentials potentials(const FieldProfile& f, double x);
// dA_y/dx, i.e. the magnetic field profile.
double magnetic_field(const FieldProfile& f, double x);

struct DerivedParams {
  double beta_nu;
  double s;            // sqrt(1 - beta_nu^2)
  double kappa;
  double signed_root;  // (E + v_d k_y) / (s v_x); epsilon is its square
  double epsilon;
};

double beta_nu(const MaterialParams& m, const FieldProfile& f);
DerivedParams derived_params(const MaterialParams& m, const FieldProfile& f, double k_y, double E);

}  // namespace dh
