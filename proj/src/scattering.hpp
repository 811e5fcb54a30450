#ifndef STEPLIKE_SCATTERING_HPP
#define STEPLIKE_SCATTERING_HPP

// Transmission/reflection coefficients T-, T+, R-, R+ and the Jost Wronskian
// D = W[f-, f+] at a surface point.  With the tail-exact Jost solutions the
// coefficients follow from 2x2 matching at the tail edges:
//   f- = A f+ + B (f+ with r+ negated)   =>  T- = 1/B,  R- = A/B,
//   f+ = C f- + E (f- with r- negated)   =>  T+ = 1/E,  R+ = C/E,
// and D = 2 i r+ B = 2 i r- E.  Values are carried in log form (modulus and
// argument separately) so they remain meaningful far out on the surface,
// where the raw complex value may over- or underflow.

#include <array>

#include "jost.hpp"
#include "potential.hpp"
#include "riemann.hpp"

namespace steplike {

struct LogComplex {
  double log_abs = 0.0;
  double arg = 0.0;

  Complex value() const {
    return std::exp(log_abs) * Complex(std::cos(arg), std::sin(arg));
  }
  static LogComplex from_value(Complex v) {
    return LogComplex{std::log(std::abs(v)), std::arg(v)};
  }
  // value = v * exp(scale)
  static LogComplex from_scaled(Complex v, Complex scale);

  LogComplex operator*(const LogComplex& o) const {
    return LogComplex{log_abs + o.log_abs, arg + o.arg};
  }
  LogComplex operator/(const LogComplex& o) const {
    return LogComplex{log_abs - o.log_abs, arg - o.arg};
  }
  LogComplex inverse() const { return LogComplex{-log_abs, -arg}; }
};

struct ScatteringCoefficients {
  SurfacePoint point;
  Complex rp, rm;  // the roots used
  LogComplex t_minus, t_plus, r_minus, r_plus, d;

  Complex T_minus() const { return t_minus.value(); }
  Complex T_plus() const { return t_plus.value(); }
  Complex R_minus() const { return r_minus.value(); }
  Complex R_plus() const { return r_plus.value(); }
  Complex D() const { return d.value(); }

  // reference-Wronskian normalization: for the pure step at beta this equals
  // -4 i r+ r- exp(i beta (r- - r+)) / (r+ + r-); same zeros as D away from
  // the branch points
  LogComplex w_beta(double beta) const;
};

// closed forms for the pure step at beta
ScatteringCoefficients step_reference(double beta, const SurfacePoint& p,
                                      const StepLevels& lv);

// engine-backed coefficients; throws PoleError where D vanishes and
// BranchPointError at the projection branch points, where the expansion
// basis degenerates
ScatteringCoefficients scattering_coefficients(const Potential& V,
                                               const SurfacePoint& p,
                                               double ode_tol = 1e-10);

ScatteringCoefficients coefficients_from_jost(const JostPair& jp,
                                              const SurfacePoint& p);

// D only (single tail propagation; valid at branch points as well)
LogComplex jost_wronskian(const Potential& V, const SurfacePoint& p,
                          double ode_tol = 1e-10);

// Residuals of the nine surface identities relating the coefficients at p and
// at its omega images, each normalized by max(1, |lhs|, |rhs|).  Entries that
// cannot be evaluated because an evaluation point is a pole are skipped.
struct IdentityReport {
  std::array<double, 9> residual{};
  std::array<bool, 9> skipped{};
  double max_residual() const;
};

IdentityReport check_identities(const Potential& V, const SurfacePoint& p,
                                double ode_tol = 1e-10);

}  // namespace steplike

#endif
