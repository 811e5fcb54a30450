#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "scattering.hpp"

namespace steplike {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(SheetSelect s) {
  switch (s) {
    case SheetSelect::pp: return "pp";
    case SheetSelect::pm: return "pm";
    case SheetSelect::mp: return "mp";
    case SheetSelect::mm: return "mm";
    case SheetSelect::mp_closure: return "mp_closure";
    case SheetSelect::thm13_sum: return "thm13_sum";
  }
  return "?";
}

std::vector<double> RGrid::radii() const {
  std::vector<double> rs;
  for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= ratio)
    rs.push_back(std::min(r, r_max));
  if (rs.empty() || rs.back() < r_max * (1.0 - 1e-12)) rs.push_back(r_max);
  return rs;
}

double affine_slope(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(xy.size());
  if (xy.size() < 2) throw DomainError("affine_slope: need at least 2 samples");
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw DomainError("affine_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

namespace {

bool selected(SheetSelect sel, const SheetSignature& sh) {
  switch (sel) {
    case SheetSelect::pp: return sh.s_plus > 0 && sh.s_minus > 0;
    case SheetSelect::pm: return sh.s_plus > 0 && sh.s_minus < 0;
    case SheetSelect::mp: return sh.s_plus < 0 && sh.s_minus > 0;
    case SheetSelect::mm: return sh.s_plus < 0 && sh.s_minus < 0;
    case SheetSelect::mp_closure: return sh.s_plus < 0 && sh.s_minus > 0;
    case SheetSelect::thm13_sum:
      return (sh.s_plus < 0 && sh.s_minus > 0) ||
             (sh.s_plus > 0 && sh.s_minus < 0);
  }
  return false;
}

bool counts_boundary(SheetSelect sel) {
  return sel == SheetSelect::mp_closure || sel == SheetSelect::thm13_sum;
}

}  // namespace

CountingReport counting_function(const std::vector<Resonance>& rs,
                                 SheetSelect sel, const RGrid& grid,
                                 double predicted_slope, double certified_r,
                                 const std::vector<BoundaryZero>& boundary) {
  CountingReport rep;
  rep.predicate = to_string(sel);
  rep.predicted_slope = predicted_slope;

  const std::vector<double> radii = grid.radii();
  if (!radii.empty() && radii.back() > certified_r * (1.0 + 1e-12))
    throw DomainError("counting_function: r = " + std::to_string(radii.back()) +
                      " beyond the certified search radius " +
                      std::to_string(certified_r));

  std::vector<std::pair<double, int>> jumps;  // (sqrt|Pi z_j|, multiplicity)
  for (const auto& res : rs)
    if (selected(sel, res.point.sheet))
      jumps.emplace_back(std::sqrt(std::abs(res.point.z)), res.multiplicity);
  if (counts_boundary(sel))
    for (const auto& b : boundary)
      if (b.on_axis)
        jumps.emplace_back(std::sqrt(std::abs(b.projection)), 2);

  for (double r : radii) {
    int n = 0;
    for (const auto& [rj, m] : jumps)
      if (rj <= r) n += m;
    rep.samples.emplace_back(r, double(n));
  }

  // Least squares of N over the top half of the r range, taken in the
  // continuum: for a staircase the integrals reduce to a weighted sum over
  // the jump radii, with weights vanishing at the window edges, so the fit
  // does not jitter when a single count crosses the boundary.
  const double b = radii.back();
  const double a = 0.5 * (radii.front() + b);
  const double W = b - a;
  if (!(W > 0.0)) throw DomainError("counting_function: degenerate r range");
  const double rbar = 0.5 * (a + b);
  double num = 0.0;
  for (const auto& [rj, m] : jumps) {
    if (rj <= a || rj >= b) continue;
    const double d = rj - rbar;
    num += double(m) * (0.25 * W * W - d * d) / 2.0;
  }
  rep.fitted_slope = num * 12.0 / (W * W * W);
  rep.relative_error =
      predicted_slope == 0.0
          ? std::abs(rep.fitted_slope)
          : std::abs(rep.fitted_slope - predicted_slope) /
                std::abs(predicted_slope);
  return rep;
}

std::string CountingReport::to_json() const {
  std::string s = "{\n  \"predicate\": \"" + predicate + "\",\n";
  s += "  \"predicted_slope\": " + fmt17(predicted_slope) + ",\n";
  s += "  \"fitted_slope\": " + fmt17(fitted_slope) + ",\n";
  s += "  \"relative_error\": " + fmt17(relative_error) + ",\n";
  s += "  \"samples\": [";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    s += "[" + fmt17(samples[i].first) + ", " + fmt17(samples[i].second) + "]";
    if (i + 1 < samples.size()) s += ", ";
  }
  s += "]\n}\n";
  return s;
}

IndicatorEstimate indicator_estimate(const Potential& V, IndicatorTarget t,
                                     double phi,
                                     const std::vector<double>& radii,
                                     double ode_tol) {
  if (!(phi > 0.0 && phi < kPi))
    throw DomainError("indicator_estimate: phi must lie in (0, pi)");
  if (radii.empty() || radii.front() < 10.0)
    throw DomainError("indicator_estimate: radii must start at >= 10");

  IndicatorEstimate est;
  est.phi = phi;
  const StepLevels& lv = V.levels();
  for (double r : radii) {
    const Complex k = r * Complex(std::cos(phi), std::sin(phi));
    try {
      const SurfacePoint p = from_k(k, lv);
      const ScatteringCoefficients c = scattering_coefficients(V, p, ode_tol);
      double la = 0.0;
      switch (t) {
        case IndicatorTarget::r_minus: la = c.r_minus.log_abs; break;
        case IndicatorTarget::r_plus: la = c.r_plus.log_abs; break;
        case IndicatorTarget::rr_product:
          la = (c.r_minus * c.r_plus).log_abs;
          break;
      }
      est.radii.push_back(r);
      est.log_ratio.push_back(la / r);
    } catch (const PoleError&) {
      ++est.skipped;  // isolated pole on the ray
    }
  }
  if (est.radii.empty())
    throw DomainError("indicator_estimate: no usable samples on the ray");

  // median over the top decade
  const double r_lo = est.radii.back() / 10.0;
  std::vector<double> tail;
  for (std::size_t i = 0; i < est.radii.size(); ++i)
    if (est.radii[i] >= r_lo) tail.push_back(est.log_ratio[i]);
  std::sort(tail.begin(), tail.end());
  est.h = tail[tail.size() / 2];
  return est;
}

std::string IndicatorEstimate::to_json() const {
  std::string s = "{\n  \"phi\": " + fmt17(phi) + ",\n  \"h\": " + fmt17(h) +
                  ",\n  \"skipped\": " + std::to_string(skipped) +
                  ",\n  \"samples\": [";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    s += "[" + fmt17(radii[i]) + ", " + fmt17(log_ratio[i]) + "]";
    if (i + 1 < radii.size()) s += ", ";
  }
  s += "]\n}\n";
  return s;
}

namespace {

// per-bin upper envelope of (log k, log v) samples, then affine fit
double envelope_slope(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 4) throw DomainError("envelope_slope: too few samples");
  const double x0 = samples.front().first;
  const double x1 = samples.back().first;
  const int nbins = std::max(4, int(samples.size()) / 6);
  std::vector<std::pair<double, double>> env;
  for (int b = 0; b < nbins; ++b) {
    const double lo = x0 + (x1 - x0) * b / nbins;
    const double hi = x0 + (x1 - x0) * (b + 1) / nbins;
    double best = -1e300, bx = 0.5 * (lo + hi);
    bool any = false;
    for (const auto& s : samples)
      if (s.first >= lo && s.first <= hi && s.second > best) {
        best = s.second;
        any = true;
      }
    if (any) env.emplace_back(bx, best);
  }
  return affine_slope(env);
}

}  // namespace

DecayFit t_decay_check(const Potential& V, double k_min, double k_max, int n,
                       double ode_tol) {
  DecayFit fit;
  std::vector<std::pair<double, double>> sm, sp;
  const StepLevels& lv = V.levels();
  for (int i = 0; i < n; ++i) {
    const double k = k_min * std::pow(k_max / k_min, double(i) / (n - 1));
    const SurfacePoint p = from_k(Complex(k, 0.0), lv);
    const ScatteringCoefficients c = scattering_coefficients(V, p, ode_tol);
    const double dm = std::abs(c.T_minus() - 1.0);
    const double dp = std::abs(c.T_plus() - 1.0);
    if (dm > 1e-14) sm.emplace_back(std::log(k), std::log(dm));
    if (dp > 1e-14) sp.emplace_back(std::log(k), std::log(dp));
  }
  fit.samples_t_minus = sm;
  fit.slope_t_minus = envelope_slope(sm);
  fit.slope_t_plus = envelope_slope(sp);
  fit.pass = fit.slope_t_minus <= -0.9 && fit.slope_t_plus <= -0.9;
  return fit;
}

StepReflectionReport step_reflection_asymptotics_check(
    const SmoothPerturbationPotential& V, double k_min, double k_max, int n,
    bool include_phase, double ode_tol) {
  StepReflectionReport rep;
  const StepLevels& lv = V.levels();
  const Potential pot(V);
  const double beta = V.beta();
  const Complex I(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const double k = k_min * std::pow(k_max / k_min, double(i) / (n - 1));
    const SurfacePoint p = from_k(Complex(k, 0.0), lv);
    const Complex rm = r_minus(p, lv);
    const ScatteringCoefficients c = scattering_coefficients(pot, p, ode_tol);
    const Complex phase_m =
        include_phase ? std::exp(-2.0 * I * k * beta) : Complex(1.0);
    const Complex phase_p =
        include_phase ? std::exp(2.0 * I * rm * beta) : Complex(1.0);
    const Complex step_m = (k - rm) / (k + rm) * phase_m;
    const Complex step_p = (rm - k) / (rm + k) * phase_p;
    rep.k.push_back(k);
    rep.err_minus.push_back(k * k * std::abs(c.R_minus() - step_m));
    rep.err_plus.push_back(k * k * std::abs(c.R_plus() - step_p));
  }
  rep.max_err_minus =
      *std::max_element(rep.err_minus.begin(), rep.err_minus.end());
  rep.max_err_plus =
      *std::max_element(rep.err_plus.begin(), rep.err_plus.end());

  // split the k range logarithmically; the tail-half envelope must drop
  const double k_split = std::sqrt(k_min * k_max);
  double front_m = 0, tail_m = 0, front_p = 0, tail_p = 0;
  for (std::size_t i = 0; i < rep.k.size(); ++i) {
    if (rep.k[i] <= k_split) {
      front_m = std::max(front_m, rep.err_minus[i]);
      front_p = std::max(front_p, rep.err_plus[i]);
    } else {
      tail_m = std::max(tail_m, rep.err_minus[i]);
      tail_p = std::max(tail_p, rep.err_plus[i]);
    }
  }
  // require genuine decay, not oscillation luck: the tail-half envelope
  // must drop by a clear margin
  rep.envelope_decreasing_minus = tail_m < 0.6 * front_m;
  rep.envelope_decreasing_plus = tail_p < 0.6 * front_p;
  return rep;
}

CarlemanReport carleman_sum(const std::vector<Resonance>& rs,
                            const StepLevels& lv,
                            const std::vector<double>& radii) {
  CarlemanReport rep;
  rep.radii = radii;
  for (double R : radii) {
    double s = 0.0;
    int skipped = 0;
    for (const auto& r : rs) {
      if (std::abs(r.point.z) > R * R) continue;
      const Complex rp = r_plus(r.point, lv);
      if (std::abs(rp) < 1e-9) {
        ++skipped;
        continue;
      }
      s += r.multiplicity * std::abs(rp.imag()) / std::norm(rp);
    }
    rep.partial.push_back(s);
    rep.skipped_branch = skipped;
  }
  return rep;
}

std::string CarlemanReport::to_json() const {
  std::string s = "{\n  \"samples\": [";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    s += "[" + fmt17(radii[i]) + ", " + fmt17(partial[i]) + "]";
    if (i + 1 < radii.size()) s += ", ";
  }
  s += "],\n  \"skipped_branch\": " + std::to_string(skipped_branch) + "\n}\n";
  return s;
}

}  // namespace steplike
