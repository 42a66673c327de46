#pragma once

#include <functional>
#include <vector>

#include "dh/errors.hpp"

namespace dh {

// Thin wrappers over the C library; they add pole detection.
double gamma(double x);
double log_gamma(double x);

// Three-term recurrences in the degree. T only needs +, -, scalar * T and
// T * T, which lets the same code produce values and coefficient vectors.
template <class T>
T hermite_rec(int n, const T& x, const T& one) {
  if (n == 0) return one;
  T p0 = one;
  T p1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    T p2 = 2.0 * (x * p1) - (2.0 * k) * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

template <class T>
T laguerre_rec(int n, double a, const T& x, const T& one) {
  if (n == 0) return one;
  T p0 = one;
  T p1 = (1.0 + a) * one - x;
  for (int k = 1; k < n; ++k) {
    T p2 = (1.0 / (k + 1)) * (((2.0 * k + 1 + a) * one - x) * p1 - (k + a) * p0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

template <class T>
T jacobi_rec(int n, double a, double b, const T& x, const T& one) {
  if (n == 0) return one;
  T p0 = one;
  T p1 = (a + 1) * one + (0.5 * (a + b + 2)) * (x - one);
  for (int k = 1; k < n; ++k) {
    double c = 2.0 * k + a + b;
    double d = 2.0 * (k + 1) * (k + a + b + 1) * c;
    T p2 = (1.0 / d) * ((c + 1) * ((c + 2) * c * x + (a * a - b * b) * one) * p1 -
                        (2.0 * (k + a) * (k + b) * (c + 2)) * p0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double hermite(int n, double x);
double laguerre(int n, double a, double x);
double jacobi(int n, double a, double b, double x);

struct PolyFamily {
  enum Kind { Hermite, Laguerre, Jacobi };
  Kind kind = Hermite;
  int degree = 0;
  double a = 0.0;
  double b = 0.0;
};

double eval_poly(const PolyFamily& p, double x);

// Weights: HalfLineExp x^a e^{-x} on (0, inf), Jacobi (1-x)^a (1+x)^b on
// (-1, 1), Gauss e^{-x^2} on the real line.
struct Weight {
  enum Kind { HalfLineExp, Jacobi, Gauss };
  Kind kind = Gauss;
  double a = 0.0;
  double b = 0.0;

  static Weight half_line_exp(double a) { return {HalfLineExp, a, 0.0}; }
  static Weight jacobi(double a, double b) { return {Jacobi, a, b}; }
  static Weight gauss() { return {Gauss, 0.0, 0.0}; }
};

// Golub-Welsch rule. Weights sum to one; the total mass of the weight
// function is kept separately as a logarithm so that large exponents do not
// overflow.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
  double log_mass = 0.0;
};

// Rules are cached per (weight, nodes); the returned reference stays valid.
const GaussRule& gauss_rule(const Weight& wt, int nodes);

int default_nodes(int n);

struct ScaledIntegral {
  double sum;       // sum_i w_i f(x_i) with normalized weights
  double log_mass;
  double value() const;
};

// \int weight(x) f(x) dx. Repeats with twice the nodes and throws
// NonConvergence when the two disagree by more than tol (relative to
// sum |w f|).
ScaledIntegral integrate(const std::function<double(double)>& f, const Weight& wt, int nodes,
                         double tol = 1e-12);
double quadrature(const std::function<double(double)>& f, const Weight& wt, int nodes,
                  double tol = 1e-12);

// Composite Gauss-Legendre on [lo, hi]; used where no weight matches.
double integrate_interval(const std::function<double(double)>& f, double lo, double hi,
                          int panels = 200, int order = 16);

}  // namespace dh
