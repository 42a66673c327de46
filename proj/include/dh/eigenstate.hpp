#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dh/spectra.hpp"

namespace dh {

struct Spinor {
  double plus;
  double minus;
};

// A normalized bound state. Components are the real functions psi+ and psi-
// of Psi(x) = (psi+, i psi-); evaluation is a closure over constants fixed at
// build time, so any grid can be used.
struct EigenState {
  Shape shape = Shape::Constant;
  MaterialParams m;
  FieldProfile f;
  QuantumNumbers q;
  double E = 0;
  double norm_const = 0;  // 1/sqrt of the basis-spinor norm, may be inf for huge exponents
  double log_norm = 0;
  double x_center = 0;    // envelope maximum
  double length = 1;      // shortest local variation scale, used for numerical derivatives
  std::vector<std::pair<std::string, double>> aux;
  std::function<Spinor(double)> eval;

  Spinor operator()(double x) const { return eval(x); }
  double psi_plus(double x) const { return eval(x).plus; }
  double psi_minus(double x) const { return eval(x).minus; }
  double aux_value(const std::string& key) const;
};

EigenState build_state_constant(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);
EigenState build_state_exponential(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);
EigenState build_state_hyperbolic(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);
EigenState build_state(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);

// Smallest interval outside of which max(|psi+|, |psi-|) < tol.
Interval support(const EigenState& s, double tol = 1e-8);

// \int (psi+_a psi+_b + psi-_a psi-_b) dx over the union of both supports.
double overlap(const EigenState& a, const EigenState& b);

struct ObservableSample {
  double x;
  double rho;
  double J_x;
  double J_y;
};

struct WavefunctionSample {
  double x;
  double psi_plus;
  double psi_minus;
};

std::vector<ObservableSample> observables(const EigenState& s, const std::vector<double>& xs);
std::vector<ObservableSample> observables_serial(const EigenState& s, const std::vector<double>& xs);
std::vector<WavefunctionSample> wavefunction(const EigenState& s, const std::vector<double>& xs);

// sum_i rho_i dx on a uniform grid.
double density_sum(const std::vector<ObservableSample>& samples);

}  // namespace dh
