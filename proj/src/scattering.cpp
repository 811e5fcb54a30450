#include "scattering.hpp"

#include <cmath>

#include "errors.hpp"

namespace steplike {

namespace {

double wrap_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a > kPi) a -= 2.0 * kPi;
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

LogComplex LogComplex::from_scaled(Complex v, Complex scale) {
  return LogComplex{std::log(std::abs(v)) + scale.real(),
                    wrap_pi(std::arg(v) + scale.imag())};
}

LogComplex ScatteringCoefficients::w_beta(double beta) const {
  const Complex ratio = -4.0 * rp * rm / ((rp + rm) * (rp + rm)) *
                        std::exp(Complex(0.0, 2.0 * beta) * (rm - rp));
  return d * LogComplex::from_value(ratio);
}

ScatteringCoefficients step_reference(double beta, const SurfacePoint& p,
                                      const StepLevels& lv) {
  const Complex rp = r_plus(p, lv);
  const Complex rm = r_minus(p, lv);
  const Complex sum = rp + rm;
  // r+^2 - r-^2 = V- - V+ != 0, so r+ = -r- cannot occur; r+ + r- = 0 would
  // need both roots zero
  if (std::abs(sum) == 0.0)
    throw BranchPointError("step_reference: r+ + r- = 0 cannot occur for V+ != V-");
  const Complex I(0.0, 1.0);
  const Complex phase = std::exp(I * beta * (rm - rp));

  ScatteringCoefficients c;
  c.point = p;
  c.rp = rp;
  c.rm = rm;
  c.t_minus = LogComplex::from_value(2.0 * rp / sum * phase);
  c.t_plus = LogComplex::from_value(2.0 * rm / sum * phase);
  c.r_minus =
      LogComplex::from_value((rp - rm) / sum * std::exp(-2.0 * I * rp * beta));
  c.r_plus =
      LogComplex::from_value((rm - rp) / sum * std::exp(2.0 * I * rm * beta));
  c.d = LogComplex::from_value(I * sum * std::exp(I * beta * (rp - rm)));
  return c;
}

namespace {

LogComplex wronskian_at(const ScaledState& a, const ScaledState& b) {
  const Complex w = a.f * b.df - a.df * b.f;
  return LogComplex::from_scaled(w, a.log_scale + b.log_scale);
}

}  // namespace

ScatteringCoefficients coefficients_from_jost(const JostPair& jp,
                                              const SurfacePoint& p) {
  const Complex rp = jp.rp, rm = jp.rm;
  if (std::abs(rp) < 1e-12 || std::abs(rm) < 1e-12)
    throw BranchPointError(
        "scattering_coefficients: expansion basis degenerates at a branch "
        "point (r+ or r- = 0); only the Wronskian D is defined there");

  const Complex I(0.0, 1.0);

  // f- at the right edge, expanded in exp(+-i r+ x)
  const ScaledState& fmr = jp.fminus_right;
  const Complex Ahat = (fmr.df + I * rp * fmr.f) / (2.0 * I * rp);
  const Complex Bhat = (I * rp * fmr.f - fmr.df) / (2.0 * I * rp);
  const double bscale = std::abs(fmr.df) + std::abs(rp * fmr.f);
  if (std::abs(Bhat) * std::abs(2.0 * rp) < 1e-13 * bscale)
    throw PoleError("scattering_coefficients: Jost Wronskian vanishes (pole)");
  const LogComplex A =
      LogComplex::from_scaled(Ahat, fmr.log_scale - I * rp * jp.x_right);
  const LogComplex B =
      LogComplex::from_scaled(Bhat, fmr.log_scale + I * rp * jp.x_right);

  // f+ at the left edge, expanded in exp(-+i r- x)
  const ScaledState& fpl = jp.fplus_left;
  const Complex Chat = (I * rm * fpl.f - fpl.df) / (2.0 * I * rm);
  const Complex Ehat = (fpl.df + I * rm * fpl.f) / (2.0 * I * rm);
  const LogComplex C =
      LogComplex::from_scaled(Chat, fpl.log_scale + I * rm * jp.x_left);
  const LogComplex E =
      LogComplex::from_scaled(Ehat, fpl.log_scale - I * rm * jp.x_left);

  ScatteringCoefficients c;
  c.point = p;
  c.rp = rp;
  c.rm = rm;
  c.t_minus = B.inverse();
  c.r_minus = A / B;
  c.t_plus = E.inverse();
  c.r_plus = C / E;
  c.d = LogComplex::from_value(2.0 * I * rp) * B;
  return c;
}

ScatteringCoefficients scattering_coefficients(const Potential& V,
                                               const SurfacePoint& p,
                                               double ode_tol) {
  return coefficients_from_jost(jost_pair(V, p, ode_tol), p);
}

LogComplex jost_wronskian(const Potential& V, const SurfacePoint& p,
                          double ode_tol) {
  // W[f-, f+] evaluated at the left edge, where f- is the exact tail form
  const JostPair jp = jost_pair(V, p, ode_tol);
  return wronskian_at(jp.fminus_left, jp.fplus_left);
}

double IdentityReport::max_residual() const {
  double m = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i)
    if (!skipped[i]) m = std::max(m, residual[i]);
  return m;
}

IdentityReport check_identities(const Potential& V, const SurfacePoint& p,
                                double ode_tol) {
  // coefficients at p and its deck images
  const SurfacePoint q[4] = {p, omega_plus(p), omega_minus(p), omega_pm(p)};
  ScatteringCoefficients c[4];
  bool pole[4] = {false, false, false, false};
  for (int i = 0; i < 4; ++i) {
    try {
      c[i] = scattering_coefficients(V, q[i], ode_tol);
    } catch (const PoleError&) {
      pole[i] = true;
    }
  }
  enum { P = 0, WP = 1, WM = 2, WPM = 3 };

  auto rel = [](Complex lhs, Complex rhs) {
    return std::abs(lhs - rhs) /
           std::max({1.0, std::abs(lhs), std::abs(rhs)});
  };

  IdentityReport rep;
  auto set = [&](int idx, std::initializer_list<int> needs, auto&& fn) {
    for (int n : needs)
      if (pole[n]) {
        rep.skipped[idx] = true;
        return;
      }
    rep.residual[idx] = fn();
  };

  const Complex rp = r_plus(p, V.levels());
  const Complex rm = r_minus(p, V.levels());

  // r- T-(z) = r+ T+(z)
  set(0, {P}, [&] { return rel(rm * c[P].T_minus(), rp * c[P].T_plus()); });
  // R-(w+ z) R-(z) = 1
  set(1, {P, WP},
      [&] { return rel(c[WP].R_minus() * c[P].R_minus(), Complex(1.0)); });
  // T+-(z) R+-(w-+ z) = T+-(w-+ z), both signs
  set(2, {P, WP, WM}, [&] {
    const double a =
        rel(c[P].T_plus() * c[WM].R_plus(), c[WM].T_plus());
    const double b =
        rel(c[P].T_minus() * c[WP].R_minus(), c[WP].T_minus());
    return std::max(a, b);
  });
  // -r- T-(z) R+(w+- z) = r+ R-(z) T+(w+- z)
  set(3, {P, WPM}, [&] {
    return rel(-rm * c[P].T_minus() * c[WPM].R_plus(),
               rp * c[P].R_minus() * c[WPM].T_plus());
  });
  // T-(w+- z) T+(z) + R-(w+- z) R-(z) = 1
  set(4, {P, WPM}, [&] {
    return rel(c[WPM].T_minus() * c[P].T_plus() +
                   c[WPM].R_minus() * c[P].R_minus(),
               Complex(1.0));
  });
  // T-(w+- z) T+(z) + R+(w+- z) R+(z) = 1
  set(5, {P, WPM}, [&] {
    return rel(c[WPM].T_minus() * c[P].T_plus() +
                   c[WPM].R_plus() * c[P].R_plus(),
               Complex(1.0));
  });
  // R+(w- z) R+(z) = 1
  set(6, {P, WM},
      [&] { return rel(c[WM].R_plus() * c[P].R_plus(), Complex(1.0)); });
  // -r- T-(z) T-(w- z) = -r+ R-(w- z) + r+ R-(z)
  set(7, {P, WM}, [&] {
    return rel(-rm * c[P].T_minus() * c[WM].T_minus(),
               -rp * c[WM].R_minus() + rp * c[P].R_minus());
  });
  // r+ T+(z) T+(w+ z) = r- R+(w+ z) - r- R+(z)
  set(8, {P, WP}, [&] {
    return rel(rp * c[P].T_plus() * c[WP].T_plus(),
               rm * c[WP].R_plus() - rm * c[P].R_plus());
  });
  return rep;
}

}  // namespace steplike
