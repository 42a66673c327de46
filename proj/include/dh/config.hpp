#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "dh/model.hpp"

namespace dh {

struct ConfigError : Error {
  ConfigError(const std::string& source, int line, const std::string& key, const std::string& what);
  int line;
  std::string key;
};

struct GridSpec {
  double lo = 0;
  double hi = 0;
  int count = 0;
};

GridSpec parse_grid(const std::string& text);

struct Tolerances {
  double rel_err = 1e-3;
  double ode = 1e-6;
  double first_order = 1e-6;
  double norm = 1e-8;
};

// Accepts a single number (applied to every tolerance) or a comma list
// such as "rel_err=1e-4,ode=1e-7".
Tolerances parse_tolerances(const std::string& text);

struct RunConfig {
  MaterialParams material;
  FieldProfile field;

  GridSpec ky_grid{0, 0, 1};
  int n_min = 0;
  int n_max = 5;
  std::vector<int> bands{1, -1};

  int n = 0;
  int mu = 1;
  double ky = 0;
  std::optional<GridSpec> x_grid;

  // v_d given as a key is applied after the whole file is read, so its
  // position relative to B0 does not matter.
  std::optional<double> drift;

  int fd_N = 2000;
  std::string format = "csv";
  std::string out;

  // Applies one key=value pair. Unknown keys and malformed values throw
  // ConfigError tagged with source and line.
  void set(const std::string& key, const std::string& value, const std::string& source = "<flag>", int line = 0);
  // Re-checks every module-level invariant, including |beta_nu| < 1.
  void validate() const;
  void finalize();
};

// Reference parameter set of each field shape, with a matching k_y scan.
RunConfig preset(Shape shape);

RunConfig parse_config(std::istream& in, const std::string& source, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

}  // namespace dh
