#pragma once

#include <stdexcept>
#include <string>

namespace dh {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParams : Error {
  using Error::Error;
};

// |beta_nu| >= 1: the electric field reached B0 (v_y - nu v_t).
struct CriticalFieldExceeded : Error {
  explicit CriticalFieldExceeded(double beta);
  double beta;
};

struct PoleError : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  using Error::Error;
};

// The requested level is not square integrable. `predicate` names the failed
// admissibility condition, e.g. "kappa_n > n*alpha".
struct NotBound : Error {
  NotBound(std::string predicate, const std::string& detail);
  std::string predicate;
};

struct SingularF1 : Error {
  using Error::Error;
};

struct WindowTooSmall : Error {
  using Error::Error;
};

}  // namespace dh
