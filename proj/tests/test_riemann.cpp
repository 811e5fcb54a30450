#include <doctest.h>

#include <random>

#include "riemann.hpp"

using namespace steplike;

namespace {

const StepLevels kLv(0.0, 1.0);

SurfacePoint pt(Complex z, int sp, int sm, Side side = Side::none) {
  return SurfacePoint{z, SheetSignature{sp, sm}, side};
}

}  // namespace

TEST_CASE("step levels require v_plus < v_minus") {
  CHECK_THROWS_AS(StepLevels(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(StepLevels(2.0, 1.0), DomainError);
  CHECK(StepLevels(-3.0, 0.5).gap() == doctest::Approx(3.5));
}

TEST_CASE("roots at reference points") {
  // z = 2 on the boundary of the physical sheet, upper side
  const SurfacePoint p = pt({2.0, 0.0}, +1, +1, Side::upper);
  CHECK(r_plus(p, kLv).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(r_plus(p, kLv).imag() == 0.0);
  CHECK(r_minus(p, kLv) == Complex(1.0, 0.0));

  // z = 0.5 sits between the thresholds: r+ real boundary value, r- upper
  const SurfacePoint q = pt({0.5, 0.0}, +1, +1, Side::upper);
  CHECK(r_plus(q, kLv).real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(r_minus(q, kLv).real() == doctest::Approx(0.0));
  CHECK(r_minus(q, kLv).imag() == doctest::Approx(std::sqrt(0.5)));

  // lower-side boundary value negates r+
  const SurfacePoint ql = pt({0.5, 0.0}, +1, +1, Side::lower);
  CHECK(r_plus(ql, kLv).real() == doctest::Approx(-std::sqrt(0.5)));
}

TEST_CASE("boundary tag is required exactly on cuts") {
  CHECK_THROWS_AS(r_plus(pt({2.0, 0.0}, +1, +1), kLv), DomainError);
  CHECK_THROWS_AS(r_plus(pt({3.0, 1.0}, +1, +1, Side::upper), kLv),
                  DomainError);
  CHECK_NOTHROW(r_plus(pt({-1.0, 0.0}, +1, +1), kLv));  // below both cuts
}

TEST_CASE("sheet-sign consistency on random off-cut points") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ux(-30.0, 30.0);
  std::uniform_real_distribution<double> uy(0.01, 30.0);
  const SheetSignature sheets[4] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
  for (const auto& sh : sheets) {
    for (int i = 0; i < 10000; ++i) {
      const double sgn = (i % 2) ? 1.0 : -1.0;
      const SurfacePoint p = pt({ux(rng), sgn * uy(rng)}, sh.s_plus, sh.s_minus);
      const Complex rp = r_plus(p, kLv);
      const Complex rm = r_minus(p, kLv);
      REQUIRE(rp.imag() * sh.s_plus > 0.0);
      REQUIRE(rm.imag() * sh.s_minus > 0.0);
      // r+^2 - r-^2 = V- - V+
      REQUIRE(std::abs(rp * rp - rm * rm - Complex(kLv.gap())) < 1e-13);
    }
  }
}

TEST_CASE("deck transformations") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    Complex z(u(rng), u(rng));
    if (std::abs(z.imag()) < 1e-3) z += Complex(0.0, 0.5);
    const SurfacePoint p = pt(z, (i & 1) ? 1 : -1, (i & 2) ? 1 : -1);

    CHECK(omega_pm(omega_pm(p)) == p);
    CHECK(omega_plus(omega_plus(p)) == p);
    CHECK(omega_minus(omega_minus(p)) == p);
    CHECK(omega_plus(omega_minus(p)) == omega_pm(p));
    CHECK(omega_minus(omega_plus(p)) == omega_pm(p));

    CHECK(r_plus(omega_plus(p), kLv) == -r_plus(p, kLv));
    CHECK(r_minus(omega_plus(p), kLv) == r_minus(p, kLv));
    CHECK(r_minus(omega_minus(p), kLv) == -r_minus(p, kLv));
    CHECK(r_plus(omega_pm(p), kLv) == -r_plus(p, kLv));
    CHECK(r_minus(omega_pm(p), kLv) == -r_minus(p, kLv));

    CHECK(omega_plus(p).z == p.z);  // projection unchanged
  }
}

TEST_CASE("deck maps negate boundary values on cuts") {
  const SurfacePoint p = pt({2.0, 0.0}, +1, +1, Side::upper);
  CHECK(r_plus(omega_plus(p), kLv) == -r_plus(p, kLv));
  CHECK(r_minus(omega_plus(p), kLv) == r_minus(p, kLv));
  CHECK(r_minus(omega_pm(p), kLv) == -r_minus(p, kLv));
}

TEST_CASE("from_k") {
  // k = i: projection V+ - 1 on the bound-state half line
  const SurfacePoint b = from_k(Complex(0.0, 1.0), kLv);
  CHECK(b.z == Complex(-1.0, 0.0));
  CHECK(b.sheet.physical());
  CHECK(b.side == Side::none);

  // k = 3: z = 9, boundary from above, r- = sqrt(8)
  const SurfacePoint p = from_k(Complex(3.0, 0.0), kLv);
  CHECK(p.z == Complex(9.0, 0.0));
  CHECK(p.side == Side::upper);
  CHECK(r_plus(p, kLv) == Complex(3.0, 0.0));
  CHECK(r_minus(p, kLv).real() == doctest::Approx(std::sqrt(8.0)));

  // negative real k lands on the lower side, with r+ = k still
  const SurfacePoint m = from_k(Complex(-3.0, 0.0), kLv);
  CHECK(m.side == Side::lower);
  CHECK(r_plus(m, kLv) == Complex(-3.0, 0.0));

  CHECK_THROWS_AS(from_k(Complex(1.0, -0.1), kLv), DomainError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 8.0);
  for (int i = 0; i < 100; ++i) {
    const Complex k(u(rng) - 4.0, u(rng));
    const SurfacePoint q = from_k(k, kLv);
    CHECK(std::abs(r_plus(q, kLv) - k) < 1e-12 * (1.0 + std::abs(k)));
  }
}

TEST_CASE("conjugate point negates-and-conjugates the roots") {
  const SurfacePoint p = pt({3.7, 2.1}, -1, +1);
  const SurfacePoint q = conjugate_point(p);
  CHECK(q.z == std::conj(p.z));
  CHECK(q.sheet == p.sheet);
  CHECK(std::abs(r_plus(q, kLv) + std::conj(r_plus(p, kLv))) < 1e-14);
  CHECK(std::abs(r_minus(q, kLv) + std::conj(r_minus(p, kLv))) < 1e-14);
}

TEST_CASE("branch point proximity") {
  CHECK(near_branch_point({0.0005, 0.0}, kLv, 1e-3));
  CHECK(near_branch_point({1.0, 0.0005}, kLv, 1e-3));
  CHECK_FALSE(near_branch_point({0.5, 0.0}, kLv, 1e-3));
}

TEST_CASE("sheet names") {
  CHECK(SheetSignature{+1, +1}.name() == "pp");
  CHECK(SheetSignature{-1, +1}.name() == "mp");
  CHECK(SheetSignature::parse("pm") == SheetSignature{+1, -1});
  CHECK_THROWS_AS(SheetSignature::parse("xx"), DomainError);
}
