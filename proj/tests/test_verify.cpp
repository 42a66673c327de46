#include <cmath>

#include "doctest.h"
#include "dh/verify.hpp"
#include "fixtures.hpp"

using namespace dh;

TEST_CASE("decoupled coefficients") {
  // No drift, no tilt: F1 constant and the equation has oscillator form.
  MaterialParams m = fx::mat(Shape::Constant);
  m.v_t = 0;
  FieldProfile f = FieldProfile::with_drift(Shape::Constant, 1, 0);
  DecoupledSystem s = make_decoupled(m, f, 0.4, 0.8);
  CHECK(s.F1(-2) == doctest::Approx(0.8 / m.v_x));
  CHECK(s.F1(3) == s.F1(-2));
  CHECK(s.dF1(1) == 0);
  CHECK(s.p(0.5) == 0);
  double x = 0.9, F2 = s.F2(x);
  CHECK(s.c(x, 1) == doctest::Approx(F2 * F2 + s.dF2(x) - s.F1(x) * s.F1(x)));

  DecoupledSystem c = make_decoupled(fx::mat(Shape::Constant), fx::field(Shape::Constant), 1, 0.3);
  CHECK(c.F2(0) == doctest::Approx(0.785 / 0.534).epsilon(1e-15));

  // Exponential gauge: F1 is affine in exp(-alpha x).
  MaterialParams me = fx::mat(Shape::Exponential);
  FieldProfile fe = fx::field(Shape::Exponential);
  DecoupledSystem e = make_decoupled(me, fe, 2, 1.1);
  double u0 = 1, u1 = std::exp(-0.5), u2 = std::exp(-1.0);
  double slope = (e.F1(0.5) - e.F1(0)) / (u1 - u0);
  CHECK(e.F1(1.0) == doctest::Approx(e.F1(0) + slope * (u2 - u0)).epsilon(1e-13));

  CHECK_THROWS_AS(make_decoupled(fx::graphene_mat(), fx::graphene_field(), 0.5, 0.0), SingularF1);
  CHECK_NOTHROW(make_decoupled(fx::graphene_mat(), fx::graphene_field(), 0.5, 0.0, true));
}

TEST_CASE("analytic states satisfy both equations") {
  for (Shape sh : fx::all_shapes) {
    MaterialParams m = fx::mat(sh);
    FieldProfile f = fx::field(sh);
    double k = fx::typical_k(sh);
    for (int n = 0; n <= 4; ++n) {
      if (!try_energy(m, f, {n, k, 1})) continue;
      EigenState s = build_state(m, f, {n, k, 1});
      DecoupledSystem sys = make_decoupled(m, f, k, s.E);
      Interval w = support(s);
      ResidualOptions o = residual_options_for(s);
      CAPTURE(shape_name(sh));
      CAPTURE(n);
      CHECK(ode_residual(sys, [&](double x) { return s.psi_plus(x); }, 1, w, o) < 1e-6);
      CHECK(ode_residual(sys, [&](double x) { return s.psi_minus(x); }, -1, w, o) < 1e-6);
      CHECK(first_order_residual(sys, [&](double x) { return s.psi_plus(x); },
                                 [&](double x) { return s.psi_minus(x); }, w, o) < 1e-6);
    }
  }
}

TEST_CASE("residual checks detect wrong inputs") {
  MaterialParams m = fx::mat(Shape::Constant);
  FieldProfile f = fx::field(Shape::Constant);
  EigenState s = build_state(m, f, {1, 0, 1});
  Interval w = support(s);
  ResidualOptions o = residual_options_for(s);
  DecoupledSystem wrong = make_decoupled(m, f, 0, s.E + 0.05);
  CHECK(ode_residual(wrong, [&](double x) { return s.psi_plus(x); }, 1, w, o) > 1e-3);
  DecoupledSystem right = make_decoupled(m, f, 0, s.E);
  CHECK(ode_residual(right, [](double) { return 0.0; }, 1, w, o) == 0);
  CHECK(first_order_residual(right, [&](double x) { return s.psi_minus(x); }, [&](double x) { return s.psi_plus(x); },
                             w, o) > 1e-2);
}

TEST_CASE("sturm count and bisection") {
  std::vector<double> d{2, 2, 2, 2}, e{-1, -1, -1};
  // Eigenvalues 2 - 2 cos(j pi / 5).
  CHECK(sturm_count(d, e, 0.0) == 0);
  CHECK(sturm_count(d, e, 2.0) == 2);
  CHECK(sturm_count(d, e, 5.0) == 4);
}

TEST_CASE("FD oracle on the graphene limit") {
  FieldProfile f = fx::graphene_field();
  MaterialParams m = fx::graphene_mat();
  Interval w{-12, 12};
  auto c = fd_spectrum(m, f, 0, w, 2000, Interval{0.1, 2.6});
  auto fi = fd_spectrum(m, f, 0, w, 4000, Interval{0.1, 2.6});
  REQUIRE(c.size() == 3);
  REQUIRE(fi.size() == 3);
  double dc = 24.0 / (4000 + 1), df = 24.0 / (8000 + 1);
  double expect[] = {std::sqrt(2.0), 2.0, std::sqrt(6.0)};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(fi[i] - expect[i]) < 1e-3);
    CHECK(std::abs(richardson(c[i], dc, fi[i], df) - expect[i]) < 1e-6);
  }
  auto par = eigenvalues_in(assemble_fd(m, f, 0, w, 2000), -3, 3);
  auto ser = eigenvalues_in_serial(assemble_fd(m, f, 0, w, 2000), -3, 3);
  CHECK(par == ser);
}

TEST_CASE("FD matches analytic levels and eigenvectors") {
  struct Case {
    Shape sh;
    double k;
    int n;
  };
  for (Case cs : {Case{Shape::Constant, 0, 2}, Case{Shape::Exponential, 2, 1}, Case{Shape::Hyperbolic, 1, 1}}) {
    MaterialParams m = fx::mat(cs.sh);
    FieldProfile f = fx::field(cs.sh);
    EigenState s = build_state(m, f, {cs.n, cs.k, 1});
    FDMatch r = fd_match(s, window_for({&s}), 2000, 0);
    CAPTURE(shape_name(cs.sh));
    CHECK(r.rel_err < 1e-3);
    CHECK(r.overlap > 0.999);
  }
}

TEST_CASE("window checks") {
  MaterialParams m = fx::mat(Shape::Constant);
  FieldProfile f = fx::field(Shape::Constant);
  EigenState s = build_state(m, f, {3, 0, 1});
  CHECK_THROWS_AS(fd_spectrum(m, f, 0, {-1, 1}, 500, std::nullopt, {&s}), WindowTooSmall);
  Interval w = window_for({&s});
  CHECK_NOTHROW(fd_spectrum(m, f, 0, w, 500, Interval{0, 1}, {&s}));
  CHECK_THROWS_AS(assemble_fd(m, f, 0, w, 100), InvalidParams);
  Interval a = auto_window(m, f, 0, s.E, {-2, 2}, 800);
  CHECK(a.hi - a.lo > 4);
}

TEST_CASE("FD spectrum reflects under v_d, k_y -> -v_d, -k_y") {
  MaterialParams m = fx::mat(Shape::Constant);
  m.v_t = 0;
  FieldProfile f = FieldProfile::with_drift(Shape::Constant, 1, 0.2);
  FieldProfile g = FieldProfile::with_drift(Shape::Constant, 1, -0.2);
  auto a = fd_spectrum(m, f, 0.7, {-10, 10}, 1600, Interval{-2, 2});
  auto b = fd_spectrum(m, g, -0.7, {-10, 10}, 1600, Interval{-2, 2});
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("bound-state count for the hyperbolic case at k_y = 1") {
  MaterialParams m = fx::mat(Shape::Hyperbolic);
  FieldProfile f = fx::field(Shape::Hyperbolic);
  BoundCount bc = count_bound_states(m, f, 1);
  CHECK(bc.fd == bc.analytic);
  CHECK(bc.analytic == max_level(m, f, 1).states);
  CHECK(bc.gap.hi > bc.gap.lo);
  CHECK_THROWS_AS(count_bound_states(fx::mat(Shape::Constant), fx::field(Shape::Constant), 0), InvalidParams);
  CHECK_FALSE(continuum_gap(fx::mat(Shape::Constant), fx::field(Shape::Constant), 0).has_value());
}

TEST_CASE("unresolved confining region is clipped from the counting window") {
  MaterialParams m = fx::mat(Shape::Exponential);
  FieldProfile f = fx::field(Shape::Exponential);
  const double k = 3;
  Interval w{-7, 100};
  const int N = 8000;
  Interval r = resolved_window(m, f, k, w, N);
  CHECK(r.lo > w.lo);
  CHECK(r.hi == w.hi);
  double d = (w.hi - w.lo) / (2 * N + 1);
  CHECK(m.v_y * std::abs(k + potentials(f, r.lo).A_y) * d == doctest::Approx(0.25 * m.v_x).epsilon(1e-6));

  // The full window carries a spurious mode where a chain bond changes sign.
  auto gap = *continuum_gap(m, f, k);
  auto in_gap = [&](Interval win) {
    FDOperator op = assemble_fd(m, f, k, win, N);
    return sturm_count(op.diag, op.off, gap.hi) - sturm_count(op.diag, op.off, gap.lo);
  };
  CHECK(in_gap(w) > max_level(m, f, k).states);
  CHECK(in_gap(r) == max_level(m, f, k).states);
  for (double kk : {1.0, 2.0, 3.0}) CHECK(count_bound_states(m, f, kk).fd == max_level(m, f, kk).states);
}
