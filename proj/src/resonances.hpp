#ifndef STEPLIKE_RESONANCES_HPP
#define STEPLIKE_RESONANCES_HPP

// Argument-principle zero search for the Jost Wronskian D on a chosen sheet.
// Winding numbers are obtained from the total increment of log D along a
// contour, sampled adaptively until each segment carries a small, unambiguous
// phase step; rectangles with positive count are subdivided quadtree-style,
// zeros are polished by Newton iterations on (log D)', and every reported
// zero carries a certifying contour whose winding equals its multiplicity.
//
// Contours must stay off the branch cuts: the locate() wrapper clips the
// requested rectangle against the cut [V+,inf) and the branch-point
// exclusion disks, and records the skipped windows.

#include <functional>
#include <string>
#include <vector>

#include "potential.hpp"
#include "riemann.hpp"
#include "scattering.hpp"

namespace steplike {

struct Rect {
  double re0 = 0.0, re1 = 0.0, im0 = 0.0, im1 = 0.0;

  double width() const { return re1 - re0; }
  double height() const { return im1 - im0; }
  double max_dim() const { return std::max(width(), height()); }
  double min_dim() const { return std::min(width(), height()); }
  Complex center() const {
    return Complex(0.5 * (re0 + re1), 0.5 * (im0 + im1));
  }
  bool contains(Complex z) const {
    return z.real() >= re0 && z.real() <= re1 && z.imag() >= im0 &&
           z.imag() <= im1;
  }
  bool empty() const { return !(re0 < re1) || !(im0 < im1); }
};

using LogFn = std::function<LogComplex(Complex)>;

struct WindingSettings {
  double quad_tol = 0.015;     // winding-number error target (turns)
  int min_panels_per_edge = 4; // initial Simpson panels per polyline edge
  double stencil_frac = 0.08;  // derivative stencil as a fraction of panel
  double max_stencil = 1e300;  // absolute stencil cap (keep off nearby cuts)
  int max_refine_depth = 40;
  double integer_tol = 0.2;    // reject if further than this from an integer
};

// Winding number of f along the closed polyline / rectangle / circle, from
// adaptive Simpson quadrature of (log f)'.  The derivative comes from a
// two-point stencil perpendicular to the contour, so a rapid but smooth
// phase drift along the contour cannot alias.  Throws ContourError when the
// contour cannot be resolved (zero on or very near it) or the integral is
// not close to an integer multiple of 2 pi i.
int winding_polyline(const LogFn& f, const std::vector<Complex>& corners,
                     const WindingSettings& ws = {});
int winding_rect(const LogFn& f, const Rect& r, const WindingSettings& ws = {});
int winding_circle(const LogFn& f, Complex center, double radius,
                   const WindingSettings& ws = {});

// derivative of log f via a 4-point cross stencil (error O(h^4))
Complex log_derivative(const LogFn& f, Complex z, double h);

// Newton iterations on 1/(log f)'; returns the refined zero or throws
// NumericError when the iteration leaves the trust region or stalls
Complex newton_refine(const LogFn& f, Complex z0, double tol, double scale);

struct FoundZero {
  Complex z;
  int multiplicity = 1;
  double rel_residual = 0.0;  // |f(z)| relative to |f| on the certifying circle
  Rect box;                   // owning box of the final claim
  double certify_radius = 0.0;
};

struct UnresolvedBox {
  Rect box;
  int count = 0;
};

struct ZeroSearchOptions {
  double tol = 1e-9;
  int newton_below = 6;     // try Newton when the box count is at most this
  double min_box = 0.0;     // absolute floor for box size (0: derive from tol)
  int max_depth = 64;
  int threads = 1;          // workers over disjoint boxes of one wave
  WindingSettings wind;
};

struct ZeroSearchResult {
  std::vector<FoundZero> zeros;
  std::vector<UnresolvedBox> unresolved;
  int outer_winding = 0;
  Rect region;  // possibly nudged inward from the request

  int claimed() const;
};

// all zeros of an analytic f inside the rectangle
ZeroSearchResult find_zeros(const LogFn& f, Rect region,
                            const ZeroSearchOptions& opts = {});

// ------------------------------------------------------------- resonances

struct SearchRegion {
  SheetSignature sheet;
  Rect rect;
};

struct Resonance {
  SurfacePoint point;  // refined projection + sheet
  int multiplicity = 1;
  double rel_residual = 0.0;
  Rect box;
};

struct LocateOptions {
  double tol = 1e-9;
  double ode_tol = 1e-10;
  // exclusion radius around the projection branch points V+-; also the
  // half-width of the skipped strip along the cut [V+,inf).
  // negative: use 1e-3 * (v_minus - v_plus)
  double branch_exclusion = -1.0;
  ZeroSearchOptions search;
  int threads = 1;  // box-level workers; results are sorted, so the
                    // schedule does not affect the output
};

struct LocateResult {
  SheetSignature sheet;
  Rect request;
  std::vector<Resonance> resonances;
  std::vector<UnresolvedBox> unresolved;
  std::vector<Rect> searched;  // open subrectangles actually certified
  std::vector<Rect> excluded;  // cut strip / branch windows skipped
  int outer_winding = 0;       // sum over searched subrectangles
};

// caching evaluator of log D(z) on a fixed sheet
LogFn make_wronskian_fn(const Potential& V, SheetSignature sheet,
                        double ode_tol);

LocateResult locate(const Potential& V, const SearchRegion& region,
                    const LocateOptions& opts = {});

// physical-sheet zeros of D on the real axis below V+ (bound states), by
// sign-change bisection of the real-valued D plus winding confirmation
std::vector<double> eigenvalues(const Potential& V, double tol = 1e-10,
                                double ode_tol = 1e-10);

// Zeros of the boundary reflection coefficient R-(z(k)) within a thin strip
// along real k (they mark resonances on the closure boundary between sheets
// with opposite root signs, projection above V-).  Rare; reported flagged.
struct BoundaryZero {
  Complex k;
  double projection;
  bool on_axis = false;  // |Im k| below the strip tolerance
};
std::vector<BoundaryZero> boundary_reflection_zeros(const Potential& V,
                                                    double k_lo, double k_hi,
                                                    int grid_points,
                                                    double strip = 1e-8,
                                                    double ode_tol = 1e-10);

// loud guard: |D| minima scanned along the boundary segment (V+, V-], where
// no poles may occur; any hit is returned for reporting, never silently kept
std::vector<double> forbidden_band_scan(const Potential& V, int grid_points,
                                        double ode_tol = 1e-10);

std::string resonances_to_csv(const std::vector<Resonance>& rs,
                              const StepLevels& lv);
std::vector<Resonance> resonances_from_csv(const std::string& csv,
                                           const StepLevels& lv);
std::string locate_result_to_json(const LocateResult& res,
                                  const StepLevels& lv);

// deterministic order: by (Re z, Im z, sheet)
void sort_resonances(std::vector<Resonance>& rs);

}  // namespace steplike

#endif
