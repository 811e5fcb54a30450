#ifndef STEPLIKE_RIEMANN_HPP
#define STEPLIKE_RIEMANN_HPP

// Four-sheeted energy surface for a steplike potential with tails V- (left)
// and V+ (right), V+ < V-.  A sheet is addressed by the pair of signs of
// Im r+ and Im r-, where r±(z) = (z - V±)^{1/2} is taken with the branch that
// maps C \ [0,inf) into the open upper half plane.  Points on the cuts
// [V+,inf), [V-,inf) carry an explicit tag saying from which half plane the
// boundary value is taken, so cut values are exact rather than eps-shifted.

#include <complex>
#include <stdexcept>
#include <string>

namespace steplike {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StepLevels {
  double v_plus;
  double v_minus;

  StepLevels(double vp, double vm) : v_plus(vp), v_minus(vm) {
    if (!(vp < vm))
      throw DomainError("StepLevels: requires v_plus < v_minus, got v_plus=" +
                        std::to_string(vp) + ", v_minus=" + std::to_string(vm));
  }
  double gap() const { return v_minus - v_plus; }
};

// First sign = sign of Im r+, second = sign of Im r-.  (+,+) is the physical
// sheet, on which the resolvent is bounded.
struct SheetSignature {
  int s_plus = +1;
  int s_minus = +1;

  bool physical() const { return s_plus > 0 && s_minus > 0; }
  bool operator==(const SheetSignature&) const = default;

  // two-letter name, 'p'/'m' for the signs of Im r+ and Im r-
  std::string name() const {
    std::string s;
    s += (s_plus > 0 ? 'p' : 'm');
    s += (s_minus > 0 ? 'p' : 'm');
    return s;
  }
  static SheetSignature parse(const std::string& s);
};

enum class Side : int { none = 0, upper = +1, lower = -1 };

struct SurfacePoint {
  Complex z;
  SheetSignature sheet;
  Side side = Side::none;  // set iff z lies on a branch cut

  bool operator==(const SurfacePoint&) const = default;
};

// Principal root with the cut along [0,inf): maps C \ [0,inf) to the open
// upper half plane.  On the cut the upper-side limit is +sqrt(w), the lower
// -sqrt(w); callers on the cut must go through boundary-tagged points.
Complex sqrt_upper(Complex w);

bool on_cut_plus(Complex z, const StepLevels& lv);
bool on_cut_minus(Complex z, const StepLevels& lv);
bool on_any_cut(Complex z, const StepLevels& lv);

// Throws DomainError unless `side` is set exactly when z lies on a cut.
void validate_point(const SurfacePoint& p, const StepLevels& lv);

Complex r_plus(const SurfacePoint& p, const StepLevels& lv);
Complex r_minus(const SurfacePoint& p, const StepLevels& lv);

// Deck transformations: flip the sign of r+, of r-, or of both.  The
// projection and the cut tag are unchanged; with the sign-pair representation
// the flips negate the corresponding boundary values as required.
SurfacePoint omega_plus(SurfacePoint p);
SurfacePoint omega_minus(SurfacePoint p);
SurfacePoint omega_pm(SurfacePoint p);

// Physical-sheet point with r+(p) = k, i.e. projection k^2 + V+.  For real k
// the boundary value is the limit from Im k > 0, which lands on the upper
// side of the cut for k > 0 and on the lower side for k < 0.
SurfacePoint from_k(Complex k, const StepLevels& lv);

// For real potentials, coefficients at conjugate_point(p) are the complex
// conjugates of the coefficients at p (same sheet signature, reflected
// projection; on a cut the boundary side flips).
SurfacePoint conjugate_point(SurfacePoint p);

bool near_branch_point(Complex z, const StepLevels& lv, double radius);

}  // namespace steplike

#endif
