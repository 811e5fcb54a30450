#include "jost.hpp"

#include <algorithm>
#include <cmath>

#include "ode.hpp"

namespace steplike {

namespace {

void renormalize(ScaledState& s) {
  const double m = std::max(std::abs(s.f), std::abs(s.df));
  if (m > 1e120 || (m > 0.0 && m < 1e-120)) {
    s.f /= m;
    s.df /= m;
    s.log_scale += std::log(m);
  }
}

}  // namespace

ScaledState propagate_layer(ScaledState s, Complex z, double v, double from,
                            double to) {
  const double h = to - from;
  if (h == 0.0) return s;
  const Complex mu2 = Complex(v, 0.0) - z;
  const Complex mu = std::sqrt(mu2);  // any branch; the matrix is even in mu
  const Complex m = mu * h;

  Complex c, s_over_mu, mu_s;  // cosh(m), sinh(m)/mu, mu*sinh(m)
  double sigma = 0.0;
  if (std::abs(m) < 1e-4) {
    const Complex m2 = m * m;
    c = 1.0 + m2 * (0.5 + m2 / 24.0);
    const Complex sh_over_m = 1.0 + m2 * (1.0 / 6.0 + m2 / 120.0);
    s_over_mu = h * sh_over_m;
    mu_s = mu2 * h * sh_over_m;
  } else {
    sigma = std::abs(m.real());
    const Complex ep = std::exp(m - sigma);
    const Complex em = std::exp(-m - sigma);
    c = 0.5 * (ep + em);
    const Complex sh = 0.5 * (ep - em);
    s_over_mu = sh / mu;
    mu_s = mu * sh;
  }

  ScaledState out;
  out.f = c * s.f + s_over_mu * s.df;
  out.df = mu_s * s.f + c * s.df;
  out.log_scale = s.log_scale + sigma;
  renormalize(out);
  return out;
}

JostPair transfer_matrix_jost(const PiecewiseConstantPotential& V,
                              const SurfacePoint& p) {
  const StepLevels& lv = V.levels();
  const Complex rp = r_plus(p, lv);
  const Complex rm = r_minus(p, lv);
  const auto& bp = V.breakpoints();
  const auto& vals = V.values();
  const double xl = bp.front();
  const double xr = bp.back();
  const Complex I(0.0, 1.0);

  JostPair jp;
  jp.x_left = xl;
  jp.x_right = xr;
  jp.rp = rp;
  jp.rm = rm;

  // f+ = exp(i r+ x) on the right tail; carry the phase/exponent as log scale
  ScaledState fp{Complex(1.0, 0.0), I * rp, I * rp * xr};
  jp.fplus_right = fp;
  for (std::size_t i = vals.size(); i-- > 0;)
    fp = propagate_layer(fp, p.z, vals[i], bp[i + 1], bp[i]);
  jp.fplus_left = fp;

  // f- = exp(-i r- x) on the left tail
  ScaledState fm{Complex(1.0, 0.0), -I * rm, -I * rm * xl};
  jp.fminus_left = fm;
  for (std::size_t i = 0; i < vals.size(); ++i)
    fm = propagate_layer(fm, p.z, vals[i], bp[i], bp[i + 1]);
  jp.fminus_right = fm;

  return jp;
}

namespace {

// integrate across [from, to] splitting at the kinks of V
OdeState integrate_between(const SmoothPerturbationPotential& V, Complex z,
                           double from, double to, OdeState y, double tol,
                           const std::vector<double>& knots) {
  auto vf = [&V](double x) { return V.value_at(x); };
  if (from == to) return y;
  std::vector<double> pts;
  pts.push_back(from);
  if (from < to) {
    for (double k : knots)
      if (k > from && k < to) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
  } else {
    for (double k : knots)
      if (k < from && k > to) pts.push_back(k);
    std::sort(pts.begin(), pts.end(), std::greater<double>());
  }
  pts.push_back(to);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    // evaluate V away from the jump at beta by integrating open subintervals
    auto piece = [&](double x) {
      const double mid = 0.5 * (pts[i - 1] + pts[i]);
      if (x == V.beta()) return V.value_at(mid < V.beta() ? std::nextafter(V.beta(), -1e300) : std::nextafter(V.beta(), 1e300));
      return vf(x);
    };
    y = integrate_schrodinger(piece, z, pts[i - 1], pts[i], y, tol);
  }
  return y;
}

ScaledState to_scaled(const OdeState& y, Complex extra_log) {
  return ScaledState{y.u, y.du, Complex(y.log_scale, 0.0) + extra_log};
}

}  // namespace

JostPair ode_jost(const SmoothPerturbationPotential& V, const SurfacePoint& p,
                  double tol) {
  if (!(tol > 0.0)) throw DomainError("ode_jost: tol must be positive");
  const StepLevels& lv = V.levels();
  const Complex rp = r_plus(p, lv);
  const Complex rm = r_minus(p, lv);
  const Complex I(0.0, 1.0);
  const double xl = V.left_edge();
  const double xr = V.right_edge();
  const std::vector<double> knots = V.knots();

  JostPair jp;
  jp.x_left = xl;
  jp.x_right = xr;
  jp.rp = rp;
  jp.rm = rm;

  OdeState fp{Complex(1.0, 0.0), I * rp, 0.0};
  jp.fplus_right = to_scaled(fp, I * rp * xr);
  fp = integrate_between(V, p.z, xr, xl, fp, tol, knots);
  jp.fplus_left = to_scaled(fp, I * rp * xr);

  OdeState fm{Complex(1.0, 0.0), -I * rm, 0.0};
  jp.fminus_left = to_scaled(fm, -I * rm * xl);
  fm = integrate_between(V, p.z, xl, xr, fm, tol, knots);
  jp.fminus_right = to_scaled(fm, -I * rm * xl);

  return jp;
}

JostPair jost_pair(const Potential& V, const SurfacePoint& p, double ode_tol) {
  if (V.piecewise()) return transfer_matrix_jost(V.as_piecewise(), p);
  return ode_jost(V.as_smooth(), p, ode_tol);
}

JostSamples ode_jost_samples(const SmoothPerturbationPotential& V,
                             const SurfacePoint& p, double tol,
                             std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const StepLevels& lv = V.levels();
  const Complex rp = r_plus(p, lv);
  const Complex rm = r_minus(p, lv);
  const Complex I(0.0, 1.0);
  const double xl = V.left_edge();
  const double xr = V.right_edge();
  const std::vector<double> knots = V.knots();

  JostSamples out;
  out.x = xs;
  out.fminus.resize(xs.size());
  out.fplus.resize(xs.size());

  OdeState fm{Complex(1.0, 0.0), -I * rm, 0.0};
  double at = xl;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fm = integrate_between(V, p.z, at, xs[i], fm, tol, knots);
    at = xs[i];
    out.fminus[i] = to_scaled(fm, -I * rm * xl);
  }

  OdeState fp{Complex(1.0, 0.0), I * rp, 0.0};
  at = xr;
  for (std::size_t i = xs.size(); i-- > 0;) {
    fp = integrate_between(V, p.z, at, xs[i], fp, tol, knots);
    at = xs[i];
    out.fplus[i] = to_scaled(fp, I * rp * xr);
  }
  return out;
}

}  // namespace steplike
