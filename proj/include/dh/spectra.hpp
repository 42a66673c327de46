#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dh/model.hpp"

namespace dh {

// Effective cyclotron scale of the constant case.
double omega(const MaterialParams& m, const FieldProfile& f);
// Field-strength scale F of the exponential and hyperbolic cases.
double fcal(const MaterialParams& m, const FieldProfile& f);

struct ConstantCaseParams {
  double Omega, abar, bbar, gbar, dbar_plus, dbar_minus;
};
struct ExponentialCaseParams {
  double Fcal, abar, bbar, gbar, dbar, ebar_plus, ebar_minus;
};
struct HyperbolicCaseParams {
  double Fcal, a_sing, alpha_bar, beta_bar, gamma_bar, delta_bar, q_plus, q_minus;
};

// Heun parameters at a given (k_y, E). The bbar/dbar families divide by
// beta_nu and are infinite when beta_nu == 0.
ConstantCaseParams constant_params(const MaterialParams& m, const FieldProfile& f, double k_y, double E);
ExponentialCaseParams exponential_params(const MaterialParams& m, const FieldProfile& f, double k_y,
                                         double E);
HyperbolicCaseParams hyperbolic_params(const MaterialParams& m, const FieldProfile& f, double k_y,
                                       double E);

double energy_constant(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);
double energy_exponential(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);
double energy_hyperbolic(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);
// Dispatches on f.shape.
double energy(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);
std::optional<double> try_energy(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q);

// Square-integrability predicate at energy E. Returns the name of the first
// violated condition, or nullopt when the state is admissible.
std::optional<std::string> violated_predicate(const MaterialParams& m, const FieldProfile& f,
                                              const QuantumNumbers& q, double E);
bool admissible(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q, double E);

// lhs - rhs of the truncation condition of the case's Heun equation. The
// hyperbolic value is the smaller of the physical quadratic and its
// n -> -n image taken on the second indicial root of gamma_bar, divided by
// n^2 + (F/alpha)^2, so it also vanishes on the rejected branch.
double quantization_residual(const MaterialParams& m, const FieldProfile& f, const QuantumNumbers& q,
                             double E);

// The two real roots of the hyperbolic quantization obtained with
// n*alpha -> -n*alpha. These are never admissible levels; exposed to test
// that rejection.
std::vector<double> mirrored_hyperbolic_energies(const MaterialParams& m, const FieldProfile& f,
                                                 const QuantumNumbers& q);

struct LevelBound {
  bool unbounded = false;
  int n_max = -1;   // largest admitted n, -1 if none
  int states = 0;   // admitted (n, mu) pairs, n = 0 counted once
};

LevelBound max_level(const MaterialParams& m, const FieldProfile& f, double k_y);

struct Interval {
  double lo;
  double hi;
};

// k_y intervals where level n exists for some band. Infinite ends are
// reported as +-inf when the predicate still holds far out.
std::vector<Interval> k_domain(const MaterialParams& m, const FieldProfile& f, int n);

struct SpectrumRow {
  Shape shape;
  int n;
  int mu;
  double k_y;
  double E;
};

struct ScanSpec {
  std::vector<double> k_y;
  int n_min = 0;
  int n_max = 5;
  std::vector<int> mus{1, -1};
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;
  std::size_t omitted = 0;
};

std::vector<double> linspace(double lo, double hi, int count);

// Rows are ordered by (k_y index, n, mu as listed). n = 0 is emitted once.
SpectrumTable scan_spectrum(const MaterialParams& m, const FieldProfile& f, const ScanSpec& s);
SpectrumTable scan_spectrum_serial(const MaterialParams& m, const FieldProfile& f, const ScanSpec& s);

}  // namespace dh
