#include "riemann.hpp"

#include <cmath>

namespace steplike {

SheetSignature SheetSignature::parse(const std::string& s) {
  if (s.size() != 2 || (s[0] != 'p' && s[0] != 'm') ||
      (s[1] != 'p' && s[1] != 'm'))
    throw DomainError("SheetSignature: expected one of pp, pm, mp, mm, got '" +
                      s + "'");
  return SheetSignature{s[0] == 'p' ? +1 : -1, s[1] == 'p' ? +1 : -1};
}

Complex sqrt_upper(Complex w) {
  // std::sqrt cuts along (-inf,0] and returns Re >= 0, so i*sqrt(-w) has the
  // cut along [0,inf) and lands in the closed upper half plane.
  const Complex s = std::sqrt(-w);
  return Complex(-s.imag(), s.real());
}

bool on_cut_plus(Complex z, const StepLevels& lv) {
  return z.imag() == 0.0 && z.real() >= lv.v_plus;
}

bool on_cut_minus(Complex z, const StepLevels& lv) {
  return z.imag() == 0.0 && z.real() >= lv.v_minus;
}

bool on_any_cut(Complex z, const StepLevels& lv) {
  return on_cut_plus(z, lv);  // [V+,inf) contains [V-,inf)
}

void validate_point(const SurfacePoint& p, const StepLevels& lv) {
  const bool cut = on_any_cut(p.z, lv);
  if (cut && p.side == Side::none)
    throw DomainError(
        "SurfacePoint: z lies on a branch cut but no boundary side is set "
        "(z = " +
        std::to_string(p.z.real()) + ")");
  if (!cut && p.side != Side::none)
    throw DomainError(
        "SurfacePoint: boundary side set but z is not on a branch cut");
}

namespace {

Complex root_at(Complex z, double level, int sign, Side side) {
  const Complex w = z - level;
  if (w.imag() == 0.0 && w.real() >= 0.0) {
    // on this root's cut: boundary value from the tagged side
    const double r = std::sqrt(w.real());
    return Complex(sign * (side == Side::lower ? -r : r), 0.0);
  }
  return double(sign) * sqrt_upper(w);
}

}  // namespace

Complex r_plus(const SurfacePoint& p, const StepLevels& lv) {
  validate_point(p, lv);
  return root_at(p.z, lv.v_plus, p.sheet.s_plus, p.side);
}

Complex r_minus(const SurfacePoint& p, const StepLevels& lv) {
  validate_point(p, lv);
  return root_at(p.z, lv.v_minus, p.sheet.s_minus, p.side);
}

SurfacePoint omega_plus(SurfacePoint p) {
  p.sheet.s_plus = -p.sheet.s_plus;
  return p;
}

SurfacePoint omega_minus(SurfacePoint p) {
  p.sheet.s_minus = -p.sheet.s_minus;
  return p;
}

SurfacePoint omega_pm(SurfacePoint p) {
  p.sheet.s_plus = -p.sheet.s_plus;
  p.sheet.s_minus = -p.sheet.s_minus;
  return p;
}

SurfacePoint from_k(Complex k, const StepLevels& lv) {
  if (k.imag() < 0.0)
    throw DomainError("from_k: requires Im k >= 0");
  SurfacePoint p;
  p.sheet = SheetSignature{+1, +1};
  if (k.imag() == 0.0) {
    const double t = k.real();
    p.z = Complex(t * t + lv.v_plus, 0.0);
    // limit of z(k) from Im k > 0 approaches the cut from above for t > 0
    // and from below for t < 0
    if (on_any_cut(p.z, lv)) p.side = (t >= 0.0 ? Side::upper : Side::lower);
    return p;
  }
  p.z = k * k + lv.v_plus;
  // Im k > 0: the projection is real only for k on the imaginary axis, where
  // it stays strictly below V+, so no cut tag is needed.
  return p;
}

SurfacePoint conjugate_point(SurfacePoint p) {
  p.z = std::conj(p.z);
  if (p.side != Side::none)
    p.side = (p.side == Side::upper) ? Side::lower : Side::upper;
  return p;
}

bool near_branch_point(Complex z, const StepLevels& lv, double radius) {
  return std::abs(z - Complex(lv.v_plus, 0.0)) < radius ||
         std::abs(z - Complex(lv.v_minus, 0.0)) < radius;
}

}  // namespace steplike
