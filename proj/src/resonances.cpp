#include "resonances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <future>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "jost.hpp"

namespace steplike {

namespace {

double wrap_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a > kPi) a -= 2.0 * kPi;
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Complex log_diff(const LogComplex& a, const LogComplex& b) {
  return Complex(a.log_abs - b.log_abs, wrap_pi(a.arg - b.arg));
}

struct Key {
  std::uint64_t re, im;
  bool operator==(const Key&) const = default;
};
struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = std::hash<std::uint64_t>()(k.re);
    return h ^ (std::hash<std::uint64_t>()(k.im) + 0x9e3779b97f4a7c15ULL +
                (h << 6) + (h >> 2));
  }
};
Key make_key(Complex z) {
  Key k;
  double re = z.real(), im = z.imag();
  std::memcpy(&k.re, &re, 8);
  std::memcpy(&k.im, &im, 8);
  return k;
}

// (log f)'(z) from a two-point stencil off the contour; the direction is
// rotated 45 degrees from the tangent so samples on axis-parallel edges
// never land exactly on a branch cut
Complex dlog_eval(const LogFn& f, Complex z, Complex tangent, double h) {
  const Complex p = Complex(0.7071067811865476, 0.7071067811865476) * tangent * h;
  const LogComplex a = f(z + p);
  const LogComplex b = f(z - p);
  if (!std::isfinite(a.log_abs) || !std::isfinite(b.log_abs))
    throw ContourError("winding: |f| vanished next to the contour near z = (" +
                       std::to_string(z.real()) + ", " +
                       std::to_string(z.imag()) + ")");
  return log_diff(a, b) / (2.0 * p);
}

// adaptive Simpson integration of (log f)' over the straight segment [a,b]
Complex simpson_dlog(const LogFn& f, Complex a, Complex b, Complex tang,
                     Complex ga, Complex gm, Complex gb, double tol, int depth,
                     const WindingSettings& ws) {
  const Complex m = 0.5 * (a + b);
  const Complex d = b - a;
  const double h =
      std::min(ws.stencil_frac * 0.25 * std::abs(d), ws.max_stencil);
  if (!(h > 0.0))
    throw ContourError("winding: segment refinement underflow");
  const Complex g1 = dlog_eval(f, 0.5 * (a + m), tang, h);
  const Complex g2 = dlog_eval(f, 0.5 * (m + b), tang, h);
  const Complex whole = d / 6.0 * (ga + 4.0 * gm + gb);
  const Complex left = d / 12.0 * (ga + 4.0 * g1 + gm);
  const Complex right = d / 12.0 * (gm + 4.0 * g2 + gb);
  const Complex better = left + right;
  const double err = std::abs(better - whole);
  if (err <= 15.0 * tol) return better + (better - whole) / 15.0;
  if (depth >= ws.max_refine_depth)
    throw ContourError("winding: contour passes too close to a zero near z = (" +
                       std::to_string(m.real()) + ", " +
                       std::to_string(m.imag()) + ")");
  return simpson_dlog(f, a, m, tang, ga, g1, gm, 0.5 * tol, depth + 1, ws) +
         simpson_dlog(f, m, b, tang, gm, g2, gb, 0.5 * tol, depth + 1, ws);
}

}  // namespace

int winding_polyline(const LogFn& f, const std::vector<Complex>& corners,
                     const WindingSettings& ws) {
  const std::size_t n = corners.size();
  double perimeter = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    perimeter += std::abs(corners[(i + 1) % n] - corners[i]);

  Complex total(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = corners[i];
    const Complex b = corners[(i + 1) % n];
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    const Complex tang = (b - a) / len;
    const int panels = ws.min_panels_per_edge;
    const double tol_panel =
        ws.quad_tol * 2.0 * kPi * (len / perimeter) / double(panels);
    for (int p = 0; p < panels; ++p) {
      const Complex pa = a + (b - a) * (double(p) / panels);
      const Complex pb = a + (b - a) * (double(p + 1) / panels);
      const double h =
          std::min(ws.stencil_frac * 0.5 * std::abs(pb - pa), ws.max_stencil);
      const Complex ga = dlog_eval(f, pa, tang, h);
      const Complex gm = dlog_eval(f, 0.5 * (pa + pb), tang, h);
      const Complex gb = dlog_eval(f, pb, tang, h);
      total += simpson_dlog(f, pa, pb, tang, ga, gm, gb, tol_panel, 0, ws);
    }
  }

  const Complex w = total / Complex(0.0, 2.0 * kPi);
  const long wi = std::lround(w.real());
  if (std::abs(w - Complex(double(wi), 0.0)) > ws.integer_tol)
    throw ContourError("winding: argument-principle integral " +
                       std::to_string(w.real()) + " + " +
                       std::to_string(w.imag()) +
                       "i is not close to an integer");
  return int(wi);
}

int winding_rect(const LogFn& f, const Rect& r, const WindingSettings& ws) {
  if (r.empty()) return 0;
  return winding_polyline(
      f,
      {Complex(r.re0, r.im0), Complex(r.re1, r.im0), Complex(r.re1, r.im1),
       Complex(r.re0, r.im1)},
      ws);
}

int winding_circle(const LogFn& f, Complex center, double radius,
                   const WindingSettings& ws) {
  const int n0 = 16;
  std::vector<Complex> pts(n0);
  for (int i = 0; i < n0; ++i) {
    const double th = 2.0 * kPi * double(i) / n0;
    pts[i] = center + radius * Complex(std::cos(th), std::sin(th));
  }
  return winding_polyline(f, pts, ws);
}

Complex log_derivative(const LogFn& f, Complex z, double h) {
  const Complex ih(0.0, h);
  const Complex d1 = log_diff(f(z + h), f(z - h)) / (2.0 * h);
  const Complex d2 = log_diff(f(z + ih), f(z - ih)) / (2.0 * ih);
  return 0.5 * (d1 + d2);
}

Complex newton_refine(const LogFn& f, Complex z0, double tol, double scale) {
  Complex z = z0;
  double last_step = scale;
  for (int it = 0; it < 90; ++it) {
    // stencil step: tracks the Newton step down, floored at the spacing
    // below which z +- h is no longer resolved in double precision
    const double floor_h = 64.0 * 2.220446049250313e-16 * (std::abs(z) + 1.0);
    const double h =
        std::max(floor_h, std::min(0.05 * last_step, 1e-3 * scale));
    const Complex d = log_derivative(f, z, h);
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag()) ||
        std::abs(d) == 0.0)
      throw NumericError("newton: derivative of log f unusable");
    const Complex step = -1.0 / d;
    if (std::abs(step) > 4.0 * scale)
      throw NumericError("newton: left the trust region");
    z += step;
    last_step = std::abs(step);
    if (last_step <= std::max(tol, 2.0 * floor_h)) return z;
  }
  throw NumericError("newton: no convergence");
}

int ZeroSearchResult::claimed() const {
  int s = 0;
  for (const auto& z : zeros) s += z.multiplicity;
  for (const auto& u : unresolved) s += u.count;
  return s;
}

namespace {

// split fractions tried when a zero sits on a subdivision line
constexpr double kSplitFractions[4] = {0.5, 0.537, 0.4641, 0.5813};

struct BoxItem {
  Rect box;
  int w;
  int depth;
};

double circle_log_scale(const LogFn& f, Complex c, double r) {
  double m = -1e300;
  for (int i = 0; i < 8; ++i) {
    const double th = 2.0 * kPi * i / 8.0 + 0.3;
    m = std::max(m, f(c + r * Complex(std::cos(th), std::sin(th))).log_abs);
  }
  return m;
}

}  // namespace

namespace {

struct ItemOutcome {
  std::vector<FoundZero> zeros;
  std::vector<UnresolvedBox> unresolved;
  std::vector<BoxItem> children;
};

ItemOutcome process_box(const LogFn& f, const BoxItem& it,
                        const ZeroSearchOptions& opts, double min_box) {
  ItemOutcome out;
  if (it.w == 0) return out;

  if (it.w <= opts.newton_below) {
    try {
      const Complex z =
          newton_refine(f, it.box.center(), opts.tol, it.box.max_dim());
      if (it.box.contains(z)) {
        // certifying radius: grow out of the numerical noise ball around
        // the zero, shrink when the circle swallows a neighbour
        double r = std::max(64.0 * opts.tol, 3e-11 * (std::abs(z) + 1.0));
        double r_hi = 1.5 * it.box.max_dim();
        for (int attempt = 0; attempt < 12; ++attempt) {
          if (r >= r_hi) break;
          int m;
          try {
            m = winding_circle(f, z, r, opts.wind);
          } catch (const ContourError&) {
            r *= 5.0;  // contour unresolvable at this scale
            continue;
          }
          if (m == it.w) {
            FoundZero fz;
            fz.z = z;
            fz.multiplicity = m;
            fz.box = it.box;
            fz.certify_radius = r;
            // |f| at the zero against the scale of |f| a fixed relative
            // distance away, so the measure does not collapse with r
            const double r_scale = std::max(r, 1e-2 * (1.0 + std::abs(z)));
            fz.rel_residual =
                std::exp(f(z).log_abs - circle_log_scale(f, z, r_scale));
            out.zeros.push_back(fz);
            return out;
          }
          if (m > it.w) {
            r_hi = r;  // swallowed a neighbour
            r *= 0.25;
          } else {
            break;  // further zeros elsewhere in the box
          }
        }
      }
    } catch (const NumericError&) {
      // fall through to subdivision
    } catch (const ContourError&) {
      // stencil grazed a cut or a certifying contour failed; subdivide
    }
  }

  if (it.box.max_dim() < min_box || it.depth >= opts.max_depth) {
    out.unresolved.push_back({it.box, it.w});
    return out;
  }

  for (int attempt = 0; attempt < 4; ++attempt) {
    const double fx = kSplitFractions[attempt];
    const double fy = kSplitFractions[(attempt + 1) % 4];
    const double xm = it.box.re0 + fx * it.box.width();
    const double ym = it.box.im0 + fy * it.box.height();
    const Rect ch[4] = {
        {it.box.re0, xm, it.box.im0, ym},
        {xm, it.box.re1, it.box.im0, ym},
        {it.box.re0, xm, ym, it.box.im1},
        {xm, it.box.re1, ym, it.box.im1},
    };
    int w[4], sum = 0;
    try {
      for (int i = 0; i < 4; ++i) {
        w[i] = winding_rect(f, ch[i], opts.wind);
        sum += w[i];
      }
    } catch (const ContourError&) {
      continue;
    }
    if (sum != it.w) continue;  // a zero straddles the split cross
    for (int i = 0; i < 4; ++i)
      if (w[i] > 0) out.children.push_back({ch[i], w[i], it.depth + 1});
    return out;
  }
  out.unresolved.push_back({it.box, it.w});
  return out;
}

}  // namespace

ZeroSearchResult find_zeros(const LogFn& f, Rect region,
                            const ZeroSearchOptions& opts) {
  ZeroSearchResult res;
  if (region.empty()) {
    res.region = region;
    return res;
  }

  // nudge the outer contour inward until it resolves
  Rect reg = region;
  int outer = -1;
  for (int attempt = 0; attempt < 8 && outer < 0; ++attempt) {
    try {
      outer = winding_rect(f, reg, opts.wind);
    } catch (const ContourError&) {
      const double dx = std::max(reg.width() * 2e-9, 1e-300) * std::pow(32.0, attempt);
      const double dy = std::max(reg.height() * 2e-9, 1e-300) * std::pow(32.0, attempt);
      reg = Rect{reg.re0 + dx, reg.re1 - dx, reg.im0 + dy, reg.im1 - dy};
      if (reg.empty()) break;
    }
  }
  if (outer < 0)
    throw ContourError("find_zeros: region contour could not be certified");
  res.outer_winding = outer;
  res.region = reg;

  const double min_box =
      opts.min_box > 0.0 ? opts.min_box
                         : std::max(8.0 * opts.tol, reg.max_dim() * 1e-14);

  // breadth-first waves over disjoint boxes; waves can fan out to workers
  std::vector<BoxItem> frontier{{reg, outer, 0}};
  while (!frontier.empty()) {
    std::vector<ItemOutcome> outcomes(frontier.size());
    if (opts.threads > 1 && frontier.size() > 1) {
      std::vector<std::future<ItemOutcome>> fut;
      fut.reserve(frontier.size());
      for (const BoxItem& it : frontier)
        fut.push_back(std::async(std::launch::async, process_box, std::cref(f),
                                 it, std::cref(opts), min_box));
      for (std::size_t i = 0; i < fut.size(); ++i) outcomes[i] = fut[i].get();
    } else {
      for (std::size_t i = 0; i < frontier.size(); ++i)
        outcomes[i] = process_box(f, frontier[i], opts, min_box);
    }
    std::vector<BoxItem> next;
    for (const ItemOutcome& o : outcomes) {
      res.zeros.insert(res.zeros.end(), o.zeros.begin(), o.zeros.end());
      res.unresolved.insert(res.unresolved.end(), o.unresolved.begin(),
                            o.unresolved.end());
      next.insert(next.end(), o.children.begin(), o.children.end());
    }
    frontier = std::move(next);
  }

  // merge claims of the same zero from adjacent boxes
  std::sort(res.zeros.begin(), res.zeros.end(),
            [](const FoundZero& a, const FoundZero& b) {
              if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
              return a.z.imag() < b.z.imag();
            });
  const double eps = std::max(6.0 * opts.tol, reg.max_dim() * 1e-13);
  std::vector<FoundZero> merged;
  for (const auto& z : res.zeros) {
    if (!merged.empty() && std::abs(merged.back().z - z.z) <= eps) {
      merged.back().multiplicity += z.multiplicity;
      if (z.rel_residual < merged.back().rel_residual) {
        merged.back().z = z.z;
        merged.back().rel_residual = z.rel_residual;
      }
    } else {
      merged.push_back(z);
    }
  }
  res.zeros = std::move(merged);
  return res;
}

// --------------------------------------------------------------- resonances

LogFn make_wronskian_fn(const Potential& V, SheetSignature sheet,
                        double ode_tol) {
  struct State {
    std::unordered_map<Key, LogComplex, KeyHash> cache;
    std::mutex mu;
    Potential pot;
    explicit State(Potential p) : pot(std::move(p)) {}
  };
  auto st = std::make_shared<State>(V);
  return [st, sheet, ode_tol](Complex z) {
    const Key k = make_key(z);
    {
      std::lock_guard<std::mutex> lock(st->mu);
      auto it = st->cache.find(k);
      if (it != st->cache.end()) return it->second;
    }
    const SurfacePoint p{z, sheet, Side::none};
    LogComplex ld;
    try {
      ld = jost_wronskian(st->pot, p, ode_tol);
    } catch (const DomainError& e) {
      // a contour or stencil point grazed the cut; searches treat this as
      // contour geometry to retry, not as caller misuse
      throw ContourError(e.what());
    }
    std::lock_guard<std::mutex> lock(st->mu);
    st->cache.emplace(k, ld);
    return ld;
  };
}

namespace {

struct ClippedRegion {
  std::vector<Rect> parts;
  std::vector<Rect> excluded;
};

// keep contours off the cut [V+,inf): split the rectangle into a part left of
// V+ - eps and parts above/below the strip |Im z| < eps
ClippedRegion clip_region(const Rect& r, const StepLevels& lv, double eps) {
  ClippedRegion out;
  const double cut_start = lv.v_plus - eps;
  const bool touches =
      r.re1 > cut_start && r.im0 < eps && r.im1 > -eps;
  if (!touches) {
    if (!r.empty()) out.parts.push_back(r);
    return out;
  }
  if (r.re0 < cut_start)
    out.parts.push_back(Rect{r.re0, cut_start, r.im0, r.im1});
  const double lo = std::max(r.re0, cut_start);
  if (r.im1 > eps)
    out.parts.push_back(Rect{lo, r.re1, std::max(r.im0, eps), r.im1});
  if (r.im0 < -eps)
    out.parts.push_back(Rect{lo, r.re1, r.im0, std::min(r.im1, -eps)});
  out.excluded.push_back(
      Rect{lo, r.re1, std::max(r.im0, -eps), std::min(r.im1, eps)});
  std::erase_if(out.parts, [](const Rect& p) { return p.empty(); });
  return out;
}

}  // namespace

void sort_resonances(std::vector<Resonance>& rs) {
  std::sort(rs.begin(), rs.end(), [](const Resonance& a, const Resonance& b) {
    if (a.point.z.real() != b.point.z.real())
      return a.point.z.real() < b.point.z.real();
    if (a.point.z.imag() != b.point.z.imag())
      return a.point.z.imag() < b.point.z.imag();
    if (a.point.sheet.s_plus != b.point.sheet.s_plus)
      return a.point.sheet.s_plus < b.point.sheet.s_plus;
    return a.point.sheet.s_minus < b.point.sheet.s_minus;
  });
}

LocateResult locate(const Potential& V, const SearchRegion& region,
                    const LocateOptions& opts) {
  const StepLevels& lv = V.levels();
  const double eps = opts.branch_exclusion < 0.0 ? 1e-3 * lv.gap()
                                                 : opts.branch_exclusion;
  LocateResult out;
  out.sheet = region.sheet;
  out.request = region.rect;

  const ClippedRegion clipped = clip_region(region.rect, lv, eps);
  out.excluded = clipped.excluded;

  ZeroSearchOptions sopts = opts.search;
  sopts.tol = std::min(sopts.tol, opts.tol);
  sopts.threads = std::max(sopts.threads, opts.threads);
  // keep derivative stencils clear of the cut along [V+,inf)
  sopts.wind.max_stencil = std::min(sopts.wind.max_stencil, 0.4 * eps);

  auto run_part = [&](const Rect& part) {
    const LogFn fn = make_wronskian_fn(V, region.sheet, opts.ode_tol);
    return find_zeros(fn, part, sopts);
  };

  std::vector<ZeroSearchResult> results;
  for (const Rect& part : clipped.parts) results.push_back(run_part(part));

  for (const auto& r : results) {
    out.searched.push_back(r.region);
    out.outer_winding += r.outer_winding;
    for (const auto& z : r.zeros) {
      Resonance res;
      res.point = SurfacePoint{z.z, region.sheet, Side::none};
      res.multiplicity = z.multiplicity;
      res.rel_residual = z.rel_residual;
      res.box = z.box;
      out.resonances.push_back(res);
    }
    for (const auto& u : r.unresolved) out.unresolved.push_back(u);
  }
  sort_resonances(out.resonances);
  return out;
}

std::vector<double> eigenvalues(const Potential& V, double tol,
                                double ode_tol) {
  const StepLevels& lv = V.levels();
  const double eps = 1e-3 * lv.gap();

  double vmin = std::min(lv.v_plus, lv.v_minus);
  if (V.piecewise()) {
    for (double v : V.as_piecewise().values()) vmin = std::min(vmin, v);
  } else {
    const auto& sm = V.as_smooth();
    const double a = sm.left_edge(), b = sm.right_edge();
    for (int i = 0; i <= 512; ++i)
      vmin = std::min(vmin, sm.value_at(a + (b - a) * i / 512.0));
  }
  const double lo = vmin;
  const double hi = lv.v_plus - eps;
  if (!(lo < hi)) return {};

  const LogFn fn = make_wronskian_fn(V, SheetSignature{+1, +1}, ode_tol);
  // D is real on this segment; track its sign through the argument
  auto sign_at = [&](double x) {
    const LogComplex l = fn(Complex(x, 0.0));
    return std::cos(l.arg) >= 0.0 ? +1 : -1;
  };

  // levels cluster towards the well bottom with gaps ~ (pi/width)^2, so the
  // scan density follows depth * width^2
  const double width = V.support_hull().length();
  const double depth = hi - lo;
  const int n =
      std::max(800, int(std::min(2e5, 0.4 * depth * width * width + 100.0)));
  std::vector<double> roots;
  int prev = sign_at(lo);
  double xprev = lo;
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * double(i) / n;
    const int s = sign_at(x);
    if (s != prev) {
      double a = xprev, b = x;
      int sa = prev;
      for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        const double m = 0.5 * (a + b);
        const int sm = sign_at(m);
        if (sm == sa)
          a = m;
        else
          b = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = s;
    xprev = x;
  }

  // winding confirmation on a small circle around each root
  for (std::size_t i = 0; i < roots.size(); ++i) {
    double r = std::max(16.0 * tol, 1e-9);
    if (i > 0) r = std::min(r, 0.25 * (roots[i] - roots[i - 1]));
    if (i + 1 < roots.size()) r = std::min(r, 0.25 * (roots[i + 1] - roots[i]));
    r = std::min(r, 0.5 * (hi - roots[i]));
    const int w = winding_circle(fn, Complex(roots[i], 0.0), r);
    if (w != 1)
      throw NumericError(
          "eigenvalues: winding confirmation failed at z = " +
          std::to_string(roots[i]));
  }
  return roots;
}

std::vector<BoundaryZero> boundary_reflection_zeros(const Potential& V,
                                                    double k_lo, double k_hi,
                                                    int grid_points,
                                                    double strip,
                                                    double ode_tol) {
  const StepLevels& lv = V.levels();
  const double c = std::sqrt(lv.gap());
  if (k_lo <= c)
    throw DomainError("boundary_reflection_zeros: requires k_lo > sqrt(V- - V+)");

  // R- continued across the boundary: physical for Im k >= 0, sheet (-,-)
  // just below (both roots continue with negative imaginary part there)
  auto rminus_log = [&](Complex k) {
    SurfacePoint p;
    if (k.imag() >= 0.0)
      p = from_k(k, lv);
    else
      p = SurfacePoint{k * k + lv.v_plus, SheetSignature{-1, -1}, Side::none};
    return scattering_coefficients(V, p, ode_tol).r_minus;
  };
  LogFn fn = [&](Complex k) { return rminus_log(k); };

  std::vector<BoundaryZero> out;
  std::vector<double> lg(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double k = k_lo + (k_hi - k_lo) * double(i) / (grid_points - 1);
    lg[i] = fn(Complex(k, 0.0)).log_abs;
  }
  for (int i = 1; i + 1 < grid_points; ++i) {
    if (lg[i] < lg[i - 1] && lg[i] < lg[i + 1] &&
        lg[i] < std::min(lg[i - 1], lg[i + 1]) - 2.0) {
      const double k0 = k_lo + (k_hi - k_lo) * double(i) / (grid_points - 1);
      try {
        const Complex kz = newton_refine(fn, Complex(k0, 0.0), 1e-11, 0.5);
        if (std::abs(kz.real() - k0) < 2.0 * (k_hi - k_lo) / grid_points) {
          BoundaryZero bz;
          bz.k = kz;
          bz.projection = (kz * kz).real() + lv.v_plus;
          bz.on_axis = std::abs(kz.imag()) <= strip;
          out.push_back(bz);
        }
      } catch (const NumericError&) {
        // shallow dip, not a zero
      }
    }
  }
  return out;
}

std::vector<double> forbidden_band_scan(const Potential& V, int grid_points,
                                        double ode_tol) {
  const StepLevels& lv = V.levels();
  const double eps = 1e-3 * lv.gap();
  const double lo = lv.v_plus + 2.0 * eps;
  const double hi = lv.v_minus - 2.0 * eps;
  std::vector<double> hits;
  if (!(lo < hi)) return hits;
  const SheetSignature sheets[4] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
  for (const auto& sh : sheets) {
    std::vector<double> lg(grid_points);
    for (int i = 0; i < grid_points; ++i) {
      const double x = lo + (hi - lo) * double(i) / (grid_points - 1);
      const SurfacePoint p{Complex(x, 0.0), sh, Side::upper};
      lg[i] = jost_wronskian(V, p, ode_tol).log_abs;
    }
    std::vector<double> sorted = lg;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[sorted.size() / 2];
    for (int i = 1; i + 1 < grid_points; ++i)
      if (lg[i] < med - 10.0 && lg[i] < lg[i - 1] && lg[i] < lg[i + 1])
        hits.push_back(lo + (hi - lo) * double(i) / (grid_points - 1));
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

// ------------------------------------------------------------------- export

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string resonances_to_csv(const std::vector<Resonance>& rs,
                              const StepLevels& lv) {
  std::string out =
      "re_z,im_z,s_plus,s_minus,multiplicity,re_rplus,im_rplus,re_rminus,"
      "im_rminus,residual\n";
  for (const auto& r : rs) {
    const Complex rp = r_plus(r.point, lv);
    const Complex rm = r_minus(r.point, lv);
    out += fmt17(r.point.z.real()) + "," + fmt17(r.point.z.imag()) + "," +
           std::to_string(r.point.sheet.s_plus) + "," +
           std::to_string(r.point.sheet.s_minus) + "," +
           std::to_string(r.multiplicity) + "," + fmt17(rp.real()) + "," +
           fmt17(rp.imag()) + "," + fmt17(rm.real()) + "," + fmt17(rm.imag()) +
           "," + fmt17(r.rel_residual) + "\n";
  }
  return out;
}

std::vector<Resonance> resonances_from_csv(const std::string& csv,
                                           const StepLevels& lv) {
  (void)lv;
  std::vector<Resonance> out;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 10)
      throw DomainError("resonance CSV: expected 10 columns, got " +
                        std::to_string(v.size()));
    Resonance r;
    r.point.z = Complex(v[0], v[1]);
    r.point.sheet = SheetSignature{int(v[2]), int(v[3])};
    r.multiplicity = int(v[4]);
    r.rel_residual = v[9];
    out.push_back(r);
  }
  return out;
}

std::string locate_result_to_json(const LocateResult& res,
                                  const StepLevels& lv) {
  std::string s = "{\n  \"sheet\": \"" + res.sheet.name() + "\",\n";
  s += "  \"request\": [" + fmt17(res.request.re0) + ", " +
       fmt17(res.request.re1) + ", " + fmt17(res.request.im0) + ", " +
       fmt17(res.request.im1) + "],\n";
  s += "  \"outer_winding\": " + std::to_string(res.outer_winding) + ",\n";
  s += "  \"resonances\": [\n";
  for (std::size_t i = 0; i < res.resonances.size(); ++i) {
    const auto& r = res.resonances[i];
    const Complex rp = r_plus(r.point, lv);
    const Complex rm = r_minus(r.point, lv);
    s += "    {\"re_z\": " + fmt17(r.point.z.real()) +
         ", \"im_z\": " + fmt17(r.point.z.imag()) +
         ", \"s_plus\": " + std::to_string(r.point.sheet.s_plus) +
         ", \"s_minus\": " + std::to_string(r.point.sheet.s_minus) +
         ", \"multiplicity\": " + std::to_string(r.multiplicity) +
         ", \"re_rplus\": " + fmt17(rp.real()) +
         ", \"im_rplus\": " + fmt17(rp.imag()) +
         ", \"re_rminus\": " + fmt17(rm.real()) +
         ", \"im_rminus\": " + fmt17(rm.imag()) +
         ", \"residual\": " + fmt17(r.rel_residual) + "}";
    s += (i + 1 < res.resonances.size()) ? ",\n" : "\n";
  }
  s += "  ],\n  \"unresolved\": [";
  for (std::size_t i = 0; i < res.unresolved.size(); ++i) {
    const auto& u = res.unresolved[i];
    s += "{\"box\": [" + fmt17(u.box.re0) + ", " + fmt17(u.box.re1) + ", " +
         fmt17(u.box.im0) + ", " + fmt17(u.box.im1) +
         "], \"count\": " + std::to_string(u.count) + "}";
    if (i + 1 < res.unresolved.size()) s += ", ";
  }
  auto rect_list = [&](const std::vector<Rect>& rects) {
    std::string t;
    for (std::size_t i = 0; i < rects.size(); ++i) {
      t += "[" + fmt17(rects[i].re0) + ", " + fmt17(rects[i].re1) + ", " +
           fmt17(rects[i].im0) + ", " + fmt17(rects[i].im1) + "]";
      if (i + 1 < rects.size()) t += ", ";
    }
    return t;
  };
  s += "],\n  \"searched\": [" + rect_list(res.searched) + "],\n";
  s += "  \"excluded\": [" + rect_list(res.excluded) + "]\n}\n";
  return s;
}

}  // namespace steplike
