#include <sstream>

#include "doctest.h"
#include "dh/config.hpp"
#include "dh/io.hpp"

using namespace dh;

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "shape = exponential\n"
      "v_d = -0.1   # before B0 on purpose\n"
      "B0 = 8\n"
      "v_x=0.86\n"
      "ky_grid = 0.5:2:4\n"
      "bands = -1\n");
  RunConfig c = parse_config(in, "test.cfg");
  CHECK(c.field.shape == Shape::Exponential);
  CHECK(c.field.E0 == doctest::Approx(0.8));
  CHECK(c.field.reversed);
  CHECK(c.field.v_d() == doctest::Approx(-0.1));
  CHECK(c.material.v_x == 0.86);
  CHECK(c.ky_grid.count == 4);
  CHECK(c.bands == std::vector<int>{-1});
}

TEST_CASE("config diagnostics carry line and key") {
  std::istringstream bad("v_x = 1\nspeed = 3\n");
  try {
    parse_config(bad, "a.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
    CHECK(e.key == "speed");
    CHECK(std::string(e.what()).find("a.cfg:2") != std::string::npos);
  }
  std::istringstream nonnum("B0 = strong\n");
  CHECK_THROWS_AS(parse_config(nonnum, "b.cfg"), ConfigError);
  std::istringstream noeq("B0 8\n");
  CHECK_THROWS_AS(parse_config(noeq, "c.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("2:1:5"), std::invalid_argument);
}

TEST_CASE("validation rejects the critical field") {
  RunConfig c = preset(Shape::Constant);
  c.set("v_d", "1.2");
  c.finalize();
  CHECK_THROWS_AS(c.validate(), CriticalFieldExceeded);
  RunConfig d = preset(Shape::Hyperbolic);
  d.set("mu", "0");
  CHECK_THROWS_AS(d.validate(), ConfigError);
  CHECK_NOTHROW(preset(Shape::Exponential).validate());
}

TEST_CASE("tolerance overrides") {
  Tolerances t = parse_tolerances("1e-4");
  CHECK(t.rel_err == 1e-4);
  CHECK(t.ode == 1e-4);
  Tolerances u = parse_tolerances("ode=1e-7, rel_err=2e-3");
  CHECK(u.ode == 1e-7);
  CHECK(u.rel_err == 2e-3);
  CHECK(u.norm == Tolerances{}.norm);
  CHECK_THROWS(parse_tolerances("speed=1"));
}

TEST_CASE("spectrum CSV round-trips bit for bit") {
  RunConfig c = preset(Shape::Hyperbolic);
  ScanSpec s;
  s.k_y = linspace(-2, 2, 41);
  SpectrumTable t = scan_spectrum(c.material, c.field, s);
  std::string text = spectrum_csv(t);
  SpectrumTable r = parse_spectrum_csv(text);
  REQUIRE(r.rows.size() == t.rows.size());
  CHECK(r.omitted == t.omitted);
  for (size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].E == t.rows[i].E);
    CHECK(r.rows[i].k_y == t.rows[i].k_y);
    CHECK(r.rows[i].n == t.rows[i].n);
    CHECK(r.rows[i].mu == t.rows[i].mu);
  }
  CHECK(spectrum_csv(r) == text);
  CHECK(text.rfind("case,n,mu,k_y,E\n", 0) == 0);
}

TEST_CASE("sample headers") {
  EigenState s = build_state(preset(Shape::Constant).material, preset(Shape::Constant).field, {0, 0, 1});
  auto xs = linspace(-3, 3, 5);
  CHECK(observables_csv(observables(s, xs)).rfind("x,rho,J_x,J_y\n", 0) == 0);
  CHECK(wavefunction_csv(wavefunction(s, xs), {{"sum_rho_dx", "1"}}).find("# sum_rho_dx=1") != std::string::npos);
  CHECK(fmt_double(0.1) == "0.1");
}
