#include <doctest.h>

#include <algorithm>
#include <random>

#include "errors.hpp"
#include "resonances.hpp"
#include "scattering.hpp"

using namespace steplike;

namespace {

Potential step_potential() {
  return Potential(PiecewiseConstantPotential::pure_step(StepLevels(0.0, 1.0), 0.0));
}

Potential barrier_potential() {
  return Potential(
      PiecewiseConstantPotential(StepLevels(0.0, 4.0), {0.0, 1.0}, {8.0}));
}

// two interior layers: V- = 4 | 8 on (0,1/2) | 2 on (1/2,1) | V+ = 0
Potential two_layer_potential() {
  return Potential(PiecewiseConstantPotential(StepLevels(0.0, 4.0),
                                              {0.0, 0.5, 1.0}, {8.0, 2.0}));
}

// Independent closed-form Jost Wronskian for the two-layer potential via
// plane-wave amplitude matching at the interfaces (a different algebra from
// the library's state propagation).
Complex oracle_two_layer_D(Complex z, SheetSignature sh) {
  const StepLevels lv(0.0, 4.0);
  const SurfacePoint p{z, sh, Side::none};
  const Complex rp = r_plus(p, lv);
  const Complex rm = r_minus(p, lv);
  const double xs[3] = {0.0, 0.5, 1.0};
  const double vs[2] = {8.0, 2.0};
  const Complex I(0.0, 1.0);

  // f+ amplitudes (a, b) of a e^{i kappa x} + b e^{-i kappa x}, swept from
  // the right tail to the left tail
  Complex a(1.0, 0.0), b(0.0, 0.0);
  Complex kap_right = rp;
  for (int j = 1; j >= 0; --j) {
    const double x = xs[j + 1];
    const Complex kap = std::sqrt(z - vs[j]);
    const Complex ep = std::exp(I * kap_right * x);
    const Complex em = 1.0 / ep;
    const Complex q = kap_right / kap;
    const Complex an =
        0.5 * ((1.0 + q) * a * ep + (1.0 - q) * b * em) * std::exp(-I * kap * x);
    const Complex bn =
        0.5 * ((1.0 - q) * a * ep + (1.0 + q) * b * em) * std::exp(I * kap * x);
    a = an;
    b = bn;
    kap_right = kap;
  }
  {  // last interface into the left tail with the sheet-resolved r-
    const double x = xs[0];
    const Complex ep = std::exp(I * kap_right * x);
    const Complex em = 1.0 / ep;
    const Complex q = kap_right / rm;
    const Complex an =
        0.5 * ((1.0 + q) * a * ep + (1.0 - q) * b * em) * std::exp(-I * rm * x);
    a = an;
  }
  // f+ = a e^{i r- x} + ... on the left; W[e^{-i r- x}, f+] = 2 i r- a
  return 2.0 * I * rm * a;
}

// dense-grid |D| minima refined by Newton on the oracle
std::vector<Complex> oracle_zeros(SheetSignature sh, const Rect& box, int n) {
  LogFn fn = [sh](Complex z) {
    return LogComplex::from_value(oracle_two_layer_D(z, sh));
  };
  std::vector<std::vector<double>> lg(n + 1, std::vector<double>(n + 1));
  auto at = [&](int i, int j) {
    return Complex(box.re0 + box.width() * (i + 0.131) / n,
                   box.im0 + box.height() * (j + 0.377) / n);
  };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) lg[i][j] = fn(at(i, j)).log_abs;
  std::vector<Complex> out;
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      const double v = lg[i][j];
      if (v < lg[i - 1][j] && v < lg[i + 1][j] && v < lg[i][j - 1] &&
          v < lg[i][j + 1]) {
        try {
          const Complex zz =
              newton_refine(fn, at(i, j), 1e-12, box.max_dim() / n);
          if (box.contains(zz)) out.push_back(zz);
        } catch (const NumericError&) {
        }
      }
    }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Complex> ded;
  for (Complex z : out)
    if (ded.empty() || std::abs(ded.back() - z) > 1e-6) ded.push_back(z);
  return ded;
}

}  // namespace

TEST_CASE("zero search on a polynomial with a double root") {
  // direct check of the argument-principle machinery on a function whose
  // zero set and multiplicities are exact: (z-a)^2 (z-b) (z-c)
  const Complex a(0.8, -0.6), b(-1.4, 0.9), c(2.0, 2.0);
  LogFn f = [&](Complex z) {
    return LogComplex::from_value((z - a) * (z - a) * (z - b) * (z - c));
  };
  ZeroSearchOptions zo;
  zo.tol = 1e-12;
  const auto res = find_zeros(f, Rect{-4.0, 4.0, -4.0, 4.0}, zo);
  CHECK(res.outer_winding == 4);
  CHECK(res.unresolved.empty());
  REQUIRE(res.zeros.size() == 3);
  for (const auto& z : res.zeros) {
    if (std::abs(z.z - a) < 1e-9) CHECK(z.multiplicity == 2);
    else if (std::abs(z.z - b) < 1e-9) CHECK(z.multiplicity == 1);
    else if (std::abs(z.z - c) < 1e-9) CHECK(z.multiplicity == 1);
    else FAIL("unexpected zero");
  }
  CHECK(res.claimed() == res.outer_winding);

  // winding of a circle around the double root alone counts two
  CHECK(winding_circle(f, a, 0.3) == 2);
  // a function with a jump across the contour is rejected, not miscounted
  LogFn cut = [](Complex z) { return LogComplex::from_value(sqrt_upper(z)); };
  CHECK_THROWS_AS(winding_rect(cut, Rect{0.5, 2.0, -1.0, 1.0}),
                  ContourError);
}

TEST_CASE("pure step carries no zeros on any sheet") {
  const Potential v = step_potential();
  const SheetSignature sheets[4] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
  for (const auto& sh : sheets) {
    const auto res = locate(v, SearchRegion{sh, Rect{-500, 500, -500, 500}});
    CHECK(res.outer_winding == 0);
    CHECK(res.resonances.empty());
    CHECK(res.unresolved.empty());
  }
}

TEST_CASE("winding around the bound states matches bisection") {
  const Potential well(
      PiecewiseConstantPotential(StepLevels(0.0, 1.0), {0.0, 1.0}, {-5.0}));
  const auto ev = eigenvalues(well, 1e-11);
  REQUIRE(ev.size() == 1);
  const auto fn = make_wronskian_fn(well, SheetSignature{+1, +1}, 1e-10);
  // contour around the real segment (-5, 0), kept off the threshold
  const int w = winding_rect(fn, Rect{-5.0, -0.02, -1.0, 1.0});
  CHECK(w == int(ev.size()));
  // a contour around one located zero counts exactly one
  CHECK(winding_circle(fn, Complex(ev[0], 0.0), 0.5) == 1);

  const Potential deep(
      PiecewiseConstantPotential(StepLevels(0.0, 1.0), {0.0, 1.0}, {-30.0}));
  const auto ev2 = eigenvalues(deep, 1e-11);
  REQUIRE(ev2.size() == 2);
  const auto fn2 = make_wronskian_fn(deep, SheetSignature{+1, +1}, 1e-10);
  CHECK(winding_rect(fn2, Rect{-29.9, -1.0, -1.0, 1.0}) == 2);
}

TEST_CASE("eigenvalues: count grows with depth, all real below V+") {
  const StepLevels lv(0.0, 1.0);
  CHECK(eigenvalues(step_potential(), 1e-11).empty());
  std::size_t prev = 0;
  for (double depth : {-5.0, -30.0, -80.0}) {
    const Potential w(
        PiecewiseConstantPotential(lv, {0.0, 1.0}, {depth}));
    const auto ev = eigenvalues(w, 1e-11);
    CHECK(ev.size() >= prev);
    prev = ev.size();
    for (double e : ev) {
      CHECK(e < lv.v_plus);
      CHECK(e > depth);
    }
  }
  CHECK(prev == 3);
}

TEST_CASE("two-layer zeros match the independent oracle") {
  const Potential v = two_layer_potential();
  const Rect box{-400.0, 400.0, -400.0, 400.0};
  LocateOptions lo;
  lo.tol = 1e-10;
  const auto res = locate(v, SearchRegion{SheetSignature{-1, -1}, box}, lo);
  CHECK(res.unresolved.empty());

  int claimed = 0;
  for (const auto& r : res.resonances) claimed += r.multiplicity;
  CHECK(claimed == res.outer_winding);

  const auto oracle = oracle_zeros(SheetSignature{-1, -1}, box, 420);
  REQUIRE(oracle.size() == res.resonances.size());
  for (const auto& r : res.resonances) {
    double best = 1e300;
    for (Complex z : oracle) best = std::min(best, std::abs(z - r.point.z));
    CHECK(best <= 1e-8);
    CHECK(r.multiplicity == 1);
    CHECK(r.rel_residual < 1e-3);
  }
}

TEST_CASE("conjugation symmetry of the zero multiset") {
  const Potential v = two_layer_potential();
  const auto res = locate(
      v, SearchRegion{SheetSignature{-1, -1}, Rect{-300, 300, -300, 300}});
  for (const auto& r : res.resonances) {
    double best = 1e300;
    for (const auto& s : res.resonances)
      if (s.point.sheet == r.point.sheet)
        best = std::min(best, std::abs(s.point.z - std::conj(r.point.z)));
    CHECK(best < 1e-7);
  }
}

TEST_CASE("halving the tolerance leaves the multiset fixed") {
  const Potential v = two_layer_potential();
  const Rect box{-200.0, 200.0, -200.0, 200.0};
  LocateOptions fine, coarse;
  coarse.tol = 2e-8;
  fine.tol = 1e-8;
  const auto a = locate(v, SearchRegion{SheetSignature{-1, -1}, box}, coarse);
  const auto b = locate(v, SearchRegion{SheetSignature{-1, -1}, box}, fine);
  REQUIRE(a.resonances.size() == b.resonances.size());
  for (std::size_t i = 0; i < a.resonances.size(); ++i) {
    CHECK(std::abs(a.resonances[i].point.z - b.resonances[i].point.z) <
          coarse.tol);
    CHECK(a.resonances[i].multiplicity == b.resonances[i].multiplicity);
  }
}

TEST_CASE("pole-of-coefficient equivalence on each nonphysical sheet") {
  const Potential v = two_layer_potential();
  const double ode_tol = 1e-10;

  // zeros of D on a sheet must match zeros of the reciprocal coefficient
  // at the physical image point, in position and multiplicity
  struct Route {
    SheetSignature sheet;
    LogFn reciprocal;
  };
  const Route routes[3] = {
      {SheetSignature{-1, +1},
       [&](Complex z) {  // poles of R- <-> zeros of R- at the w+ image
         const SurfacePoint q{z, SheetSignature{+1, +1}, Side::none};
         return scattering_coefficients(v, q, ode_tol).r_minus;
       }},
      {SheetSignature{+1, -1},
       [&](Complex z) {  // poles of R+ <-> zeros of R+ at the w- image
         const SurfacePoint q{z, SheetSignature{+1, +1}, Side::none};
         return scattering_coefficients(v, q, ode_tol).r_plus;
       }},
      {SheetSignature{-1, -1},
       [&](Complex z) {  // poles of R-R+ - T-T+ <-> zeros at the w+- image
         const SurfacePoint q{z, SheetSignature{+1, +1}, Side::none};
         const auto c = scattering_coefficients(v, q, ode_tol);
         return LogComplex::from_value(c.R_minus() * c.R_plus() -
                                       c.T_minus() * c.T_plus());
       }},
  };

  for (const auto& route : routes) {
    const auto res = locate(
        v, SearchRegion{route.sheet, Rect{-250, 250, -250, 250}});
    REQUIRE(res.unresolved.empty());
    std::vector<FoundZero> coeff_zeros;
    for (const Rect& part : res.searched) {
      ZeroSearchOptions zo;
      zo.tol = 1e-10;
      zo.wind.max_stencil = 1e-3;
      const auto zr = find_zeros(route.reciprocal, part, zo);
      CHECK(zr.unresolved.empty());
      coeff_zeros.insert(coeff_zeros.end(), zr.zeros.begin(), zr.zeros.end());
    }
    REQUIRE(coeff_zeros.size() == res.resonances.size());
    for (const auto& r : res.resonances) {
      double best = 1e300;
      int mult = 0;
      for (const auto& z : coeff_zeros)
        if (std::abs(z.z - r.point.z) < best) {
          best = std::abs(z.z - r.point.z);
          mult = z.multiplicity;
        }
      CHECK(best <= 1e-8);
      CHECK(mult == r.multiplicity);
    }
  }
}

TEST_CASE("unresolved boxes are reported, not dropped") {
  // a simple zero, with both Newton and subdivision forbidden
  LogFn f = [](Complex z) {
    return LogComplex::from_value(z - Complex(0.3, 0.2));
  };
  ZeroSearchOptions zo;
  zo.newton_below = 0;
  zo.max_depth = 0;
  const auto res = find_zeros(f, Rect{-1.0, 1.0, -1.0, 1.0}, zo);
  CHECK(res.zeros.empty());
  REQUIRE(res.unresolved.size() == 1);
  CHECK(res.unresolved[0].count == 1);
  CHECK(res.claimed() == res.outer_winding);
}

TEST_CASE("completeness holds across random staircases") {
  std::mt19937_64 rng(186282);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const double vp = -1.0 + 2.0 * u(rng);
    const double vm = vp + 1.0 + 3.0 * u(rng);
    const int layers = 1 + int(3.0 * u(rng));
    std::vector<double> bp;
    for (int i = 0; i <= layers; ++i)
      bp.push_back(-1.0 + 2.0 * (double(i) + 0.8 * u(rng)) / (layers + 1));
    std::vector<double> vals;
    for (int i = 0; i < layers; ++i) vals.push_back(-6.0 + 14.0 * u(rng));
    const Potential pot(
        PiecewiseConstantPotential(StepLevels(vp, vm), bp, vals));

    const SheetSignature sheets[3] = {{-1, -1}, {-1, +1}, {+1, -1}};
    for (const auto& sh : sheets) {
      const auto res =
          locate(pot, SearchRegion{sh, Rect{-150, 150, -150, 150}});
      int claimed = 0;
      for (const auto& r : res.resonances) claimed += r.multiplicity;
      for (const auto& b : res.unresolved) claimed += b.count;
      CHECK(claimed == res.outer_winding);
      CHECK(res.unresolved.empty());
      for (const auto& r : res.resonances) CHECK(r.rel_residual < 1e-3);
    }
  }
}

TEST_CASE("no zeros flagged in the forbidden band") {
  CHECK(forbidden_band_scan(step_potential(), 400).empty());
  CHECK(forbidden_band_scan(barrier_potential(), 400).empty());
  CHECK(forbidden_band_scan(two_layer_potential(), 400).empty());
}

TEST_CASE("boundary reflection scan stays quiet for the barrier") {
  const auto zeros =
      boundary_reflection_zeros(barrier_potential(), 2.5, 20.0, 600);
  for (const auto& b : zeros) CHECK_FALSE(b.on_axis);
}

TEST_CASE("CSV export round trip and determinism") {
  const Potential v = two_layer_potential();
  const Rect box{-200.0, 200.0, -200.0, 200.0};
  const auto a = locate(v, SearchRegion{SheetSignature{-1, -1}, box});
  const auto b = locate(v, SearchRegion{SheetSignature{-1, -1}, box});
  const std::string csv_a = resonances_to_csv(a.resonances, v.levels());
  const std::string csv_b = resonances_to_csv(b.resonances, v.levels());
  CHECK(csv_a == csv_b);  // byte-identical across runs

  const auto back = resonances_from_csv(csv_a, v.levels());
  REQUIRE(back.size() == a.resonances.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].point.z == a.resonances[i].point.z);
    CHECK(back[i].point.sheet == a.resonances[i].point.sheet);
    CHECK(back[i].multiplicity == a.resonances[i].multiplicity);
  }

  const std::string js = locate_result_to_json(a, v.levels());
  CHECK(js.find("\"outer_winding\"") != std::string::npos);
}

TEST_CASE("threaded search returns the same list") {
  const Potential v = two_layer_potential();
  const Rect box{-150.0, 150.0, -150.0, 150.0};
  LocateOptions serial, parallel;
  parallel.threads = 3;
  const auto a = locate(v, SearchRegion{SheetSignature{-1, -1}, box}, serial);
  const auto b = locate(v, SearchRegion{SheetSignature{-1, -1}, box}, parallel);
  CHECK(resonances_to_csv(a.resonances, v.levels()) ==
        resonances_to_csv(b.resonances, v.levels()));
}
