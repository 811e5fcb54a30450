#ifndef STEPLIKE_ODE_HPP
#define STEPLIKE_ODE_HPP

// Adaptive Dormand-Prince 5(4) integration of the stationary equation
//   u'' = (V(x) - z) u
// with complex state (u, u').  The right-hand side is analytic in z, so the
// computed solution inherits analytic dependence on z and on the chosen root
// signs up to the integration tolerance.  The state is renormalized when it
// grows large; the accumulated factor is returned as a log so Jost solutions
// stay representable far from the real axis.

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "riemann.hpp"

namespace steplike {

struct OdeState {
  Complex u;
  Complex du;
  double log_scale = 0.0;  // true state = (u,du) * exp(log_scale)
};

// Integrates from x0 to x1 (either direction).  VFun: double -> double must
// be smooth on the open segment; callers split at kinks of V.
template <class VFun>
OdeState integrate_schrodinger(const VFun& V, Complex z, double x0, double x1,
                               OdeState y, double tol) {
  if (x0 == x1) return y;
  const double dir = (x1 > x0) ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);

  // wavelength-aware initial step
  const double k_mag = std::sqrt(std::abs(z) + std::abs(V(0.5 * (x0 + x1))) + 1.0);
  double h = dir * std::min(span, 0.1 / k_mag);

  const double atol = tol, rtol = tol;
  double x = x0;
  Complex k1u = y.du, k1v = (V(x) - z) * y.u;

  const int max_steps = 2000000;
  for (int step = 0; step < max_steps; ++step) {
    if ((x1 - x) * dir <= 0.0) return y;
    if (std::abs(h) > std::abs(x1 - x)) h = x1 - x;
    if (std::abs(h) < 1e-14 * (std::abs(x) + 1.0))
      throw NumericError("ode: step size underflow at x = " + std::to_string(x));

    const Complex u0 = y.u, v0 = y.du;
    auto f = [&](double xx, Complex uu, Complex vv, Complex& fu, Complex& fv) {
      fu = vv;
      fv = (V(xx) - z) * uu;
    };

    Complex k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, k7u, k7v;
    f(x + h / 5.0, u0 + h * (k1u / 5.0), v0 + h * (k1v / 5.0), k2u, k2v);
    f(x + 3.0 * h / 10.0, u0 + h * (3.0 / 40.0 * k1u + 9.0 / 40.0 * k2u),
      v0 + h * (3.0 / 40.0 * k1v + 9.0 / 40.0 * k2v), k3u, k3v);
    f(x + 4.0 * h / 5.0,
      u0 + h * (44.0 / 45.0 * k1u - 56.0 / 15.0 * k2u + 32.0 / 9.0 * k3u),
      v0 + h * (44.0 / 45.0 * k1v - 56.0 / 15.0 * k2v + 32.0 / 9.0 * k3v), k4u,
      k4v);
    f(x + 8.0 * h / 9.0,
      u0 + h * (19372.0 / 6561.0 * k1u - 25360.0 / 2187.0 * k2u +
                64448.0 / 6561.0 * k3u - 212.0 / 729.0 * k4u),
      v0 + h * (19372.0 / 6561.0 * k1v - 25360.0 / 2187.0 * k2v +
                64448.0 / 6561.0 * k3v - 212.0 / 729.0 * k4v),
      k5u, k5v);
    f(x + h,
      u0 + h * (9017.0 / 3168.0 * k1u - 355.0 / 33.0 * k2u +
                46732.0 / 5247.0 * k3u + 49.0 / 176.0 * k4u -
                5103.0 / 18656.0 * k5u),
      v0 + h * (9017.0 / 3168.0 * k1v - 355.0 / 33.0 * k2v +
                46732.0 / 5247.0 * k3v + 49.0 / 176.0 * k4v -
                5103.0 / 18656.0 * k5v),
      k6u, k6v);
    const Complex u1 = u0 + h * (35.0 / 384.0 * k1u + 500.0 / 1113.0 * k3u +
                                 125.0 / 192.0 * k4u - 2187.0 / 6784.0 * k5u +
                                 11.0 / 84.0 * k6u);
    const Complex v1 = v0 + h * (35.0 / 384.0 * k1v + 500.0 / 1113.0 * k3v +
                                 125.0 / 192.0 * k4v - 2187.0 / 6784.0 * k5v +
                                 11.0 / 84.0 * k6v);
    f(x + h, u1, v1, k7u, k7v);

    const Complex eu = h * (71.0 / 57600.0 * k1u - 71.0 / 16695.0 * k3u +
                            71.0 / 1920.0 * k4u - 17253.0 / 339200.0 * k5u +
                            22.0 / 525.0 * k6u - 1.0 / 40.0 * k7u);
    const Complex ev = h * (71.0 / 57600.0 * k1v - 71.0 / 16695.0 * k3v +
                            71.0 / 1920.0 * k4v - 17253.0 / 339200.0 * k5v +
                            22.0 / 525.0 * k6v - 1.0 / 40.0 * k7v);

    const double su = atol + rtol * std::max(std::abs(u0), std::abs(u1));
    const double sv = atol + rtol * std::max(std::abs(v0), std::abs(v1));
    const double err = std::sqrt(0.5 * (std::norm(eu / su) + std::norm(ev / sv)));

    if (err <= 1.0) {
      x += h;
      y.u = u1;
      y.du = v1;
      k1u = k7u;  // FSAL
      k1v = k7v;
      const double m = std::max(std::abs(y.u), std::abs(y.du));
      if (m > 1e120 || (m > 0.0 && m < 1e-120)) {
        y.u /= m;
        y.du /= m;
        k1u /= m;
        k1v /= m;
        y.log_scale += std::log(m);
      }
    }
    const double fac =
        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h *= fac;
  }
  throw NumericError("ode: step budget exhausted between x = " +
                     std::to_string(x0) + " and " + std::to_string(x1));
}

}  // namespace steplike

#endif
