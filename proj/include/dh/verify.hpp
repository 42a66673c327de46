#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dh/eigenstate.hpp"

namespace dh {

// F1, F2 of the first-order system and their exact derivatives.
struct DecoupledSystem {
  std::function<double(double)> F1, F2, dF1, dF2;
  // Coefficients of -psi'' + p psi' + c_sign psi = 0.
  double p(double x) const;
  double c(double x, int sign) const;
};

// Throws SingularF1 only when F1 vanishes identically, unless allow_singular
// is set (the first-order system stays meaningful, the second-order one not).
DecoupledSystem make_decoupled(const MaterialParams& m, const FieldProfile& f, double k_y, double E,
                               bool allow_singular = false);

struct ResidualOptions {
  int samples = 2000;
  double h = 1e-3;              // finite-difference step
  double root_exclusion = 1e-6;  // relative |F1| below which samples are skipped
};

// max_i |F1 (LHS)| / max_i |F1| (|psi''| + |p psi'| + |c psi|), with LHS the
// second-order operator applied to psi by 4th-order central differences.
// Multiplying by F1 keeps the apparent singularity at F1 = 0 out of the
// normalization. Returns 0 for psi == 0.
double ode_residual(const DecoupledSystem& sys, const std::function<double(double)>& psi, int sign,
                    Interval window, const ResidualOptions& opt = {});

// max over samples of |(-+d/dx + F2) psi+- - F1 psi-+| over the largest term.
double first_order_residual(const DecoupledSystem& sys, const std::function<double(double)>& psi_plus,
                            const std::function<double(double)>& psi_minus, Interval window,
                            const ResidualOptions& opt = {});

// Residual options tuned to a state's own length scale.
ResidualOptions residual_options_for(const EigenState& s);

// Staggered grid: +/- components alternate on sites spaced d apart, so the
// operator is a real symmetric tridiagonal matrix with a single Dirac point.
// The component placed at each wall is chosen from the sign of k_y + A_y
// there, which removes wall-bound states from the gap.
struct FDOperator {
  std::vector<double> x;
  std::vector<int> comp;  // +1 for psi+, -1 for psi-
  std::vector<double> diag;
  std::vector<double> off;
  double d = 0;
  int N = 0;
};

FDOperator assemble_fd(const MaterialParams& m, const FieldProfile& f, double k_y, Interval window, int N);

// Number of eigenvalues of tridiagonal (diag, off) strictly below sigma.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double sigma);

// All eigenvalues in [lo, hi), by bisection, indices split across threads.
std::vector<double> eigenvalues_in(const FDOperator& op, double lo, double hi);
std::vector<double> eigenvalues_in_serial(const FDOperator& op, double lo, double hi);

// Unit eigenvector by inverse iteration.
std::vector<double> eigenvector(const FDOperator& op, double lambda);

// |<state|v>| with the state sampled on the operator's sites.
double fd_overlap(const FDOperator& op, const std::vector<double>& v, const EigenState& s);

// Throws WindowTooSmall if a reference state's support is not inside the
// window. Eigenvalues are restricted to [erange_lo, erange_hi) when given.
std::vector<double> fd_spectrum(const MaterialParams& m, const FieldProfile& f, double k_y, Interval window, int N,
                                std::optional<Interval> erange = std::nullopt,
                                const std::vector<const EigenState*>& refs = {});

// Extrapolates two O(h^2) estimates at spacings d_c > d_f.
double richardson(double E_coarse, double d_coarse, double E_fine, double d_fine);

// Window covering every state's support (|psi| < tol outside), plus margin.
Interval window_for(const std::vector<const EigenState*>& states, double tol = 1e-8);

// Grows the window by 1.5x until the eigenvalue nearest to target moves
// less than tol between expansions.
Interval auto_window(const MaterialParams& m, const FieldProfile& f, double k_y, double target, Interval start, int N,
                     double tol = 1e-6);

// Denominator floor for rel_err: |E_1 - E_0| of the band, 0 if level 1 is
// not bound. E_0 can sit at zero, the level spacing cannot.
double level_scale(const MaterialParams& m, const FieldProfile& f, double k_y, int mu);

struct FDMatch {
  double E_analytic;
  double E_coarse;
  double E_fine;
  double E_fd;      // Richardson value
  double overlap;   // fine grid
  double rel_err;
};

// Nearest FD eigenvalue at N and 2N, extrapolated, with eigenvector overlap
// on the fine grid. rel_err uses max(|E|, scale) as denominator.
FDMatch fd_match(const EigenState& s, Interval window, int N, double scale);

// Energy window free of continuum at large |x|. Constant fields give an
// empty optional: the whole spectrum is discrete.
std::optional<Interval> continuum_gap(const MaterialParams& m, const FieldProfile& f, double k_y);

// Shrinks w from either end until v_y |k + A_y| d <= v_x / 4 with d the
// spacing of an N-point grid on the original window. Past that point a bond
// of the staggered chain changes sign and splits off a spurious mode.
Interval resolved_window(const MaterialParams& m, const FieldProfile& f, double k_y, Interval w, int N);

struct BoundCount {
  int fd = 0;
  int analytic = 0;
  int N = 0;
  Interval gap{0, 0};
  Interval window{0, 0};
};

// Doubles N from N_start until two successive grids agree on the number of
// eigenvalues inside the gap.
BoundCount count_bound_states(const MaterialParams& m, const FieldProfile& f, double k_y, int N_start = 4000,
                              int N_limit = 256000);

}  // namespace dh
