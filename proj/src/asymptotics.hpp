#ifndef STEPLIKE_ASYMPTOTICS_HPP
#define STEPLIKE_ASYMPTOTICS_HPP

// Empirical counting functions N(r) per sheet with slope fits against the
// predicted linear laws, indicator-function (directional exponential type)
// estimation, large-k decay checks of the coefficients, and the Carleman
// sum whose convergence controls the product formulas on the inverse side.

#include <string>
#include <vector>

#include "potential.hpp"
#include "resonances.hpp"

namespace steplike {

// counting sets by root-sign signature; *_closure includes the boundary
enum class SheetSelect { pp, pm, mp, mm, mp_closure, thm13_sum };
std::string to_string(SheetSelect s);

struct RGrid {
  double r_min = 2.0;
  double r_max = 30.0;
  double ratio = 1.15;  // geometric spacing
  std::vector<double> radii() const;
};

struct CountingReport {
  std::string predicate;
  std::vector<std::pair<double, double>> samples;  // (r, N(r))
  double fitted_slope = 0.0;
  double predicted_slope = 0.0;
  double relative_error = 0.0;
  std::string to_json() const;
};

// affine least squares y ~ s x + c, returns s
double affine_slope(const std::vector<std::pair<double, double>>& xy);

// N(r) = #{ |Pi(z_j)| <= r^2, sheet selected }, counted with multiplicity;
// the fit uses the upper half of the r range (small r is all bias in an
// o(r) statement).  Radii beyond certified_r are refused.  Boundary zeros
// enter the closure counts; each detected one stands for the pair of
// boundary points exchanged by conjugation.
CountingReport counting_function(const std::vector<Resonance>& rs,
                                 SheetSelect sel, const RGrid& grid,
                                 double predicted_slope, double certified_r,
                                 const std::vector<BoundaryZero>& boundary = {});

enum class IndicatorTarget { r_minus, r_plus, rr_product };

struct IndicatorEstimate {
  double phi = 0.0;
  std::vector<double> radii;
  std::vector<double> log_ratio;  // log|F(r e^{i phi})| / r
  double h = 0.0;                 // tail-median estimate of the indicator
  int skipped = 0;                // samples dropped next to poles
  std::string to_json() const;
};

// log-modulus growth of the chosen coefficient along the physical-sheet ray
// k = r e^{i phi}; h is the median of the top-decade samples
IndicatorEstimate indicator_estimate(const Potential& V, IndicatorTarget t,
                                     double phi, const std::vector<double>& radii,
                                     double ode_tol = 1e-10);

struct DecayFit {
  double slope_t_minus = 0.0;
  double slope_t_plus = 0.0;
  bool pass = false;  // both slopes <= -0.9
  std::vector<std::pair<double, double>> samples_t_minus;  // (log k, log|T- - 1|)
};

// log-log decay of |T+- - 1| along the boundary-physical ray, fitted on
// per-bin upper envelopes so oscillation nulls do not drag the fit
DecayFit t_decay_check(const Potential& V, double k_min, double k_max, int n,
                       double ode_tol = 1e-10);

struct StepReflectionReport {
  std::vector<double> k;
  std::vector<double> err_minus;  // k^2 |R- - step formula|
  std::vector<double> err_plus;
  double max_err_minus = 0.0;
  double max_err_plus = 0.0;
  bool envelope_decreasing_minus = false;  // tail-half max below front-half max
  bool envelope_decreasing_plus = false;
};

// Checks the large-k reduction of the reflection coefficients to the pure
// step forms: R- ~ ((k-r-)/(k+r-)) e^{-2 i k beta},
//             R+ ~ ((r- - k)/(r- + k)) e^{2 i r- beta}.
// include_phase=false drops the translation phase (ablation handle).
StepReflectionReport step_reflection_asymptotics_check(
    const SmoothPerturbationPotential& V, double k_min, double k_max, int n,
    bool include_phase = true, double ode_tol = 1e-10);

struct CarlemanReport {
  std::vector<double> radii;     // R
  std::vector<double> partial;   // S(R) = sum over |Pi z_j| <= R^2
  int skipped_branch = 0;        // terms with r+(z_j) = 0 excluded
  std::string to_json() const;
};

// partial sums of |Im r+(z_j)| / |r+(z_j)|^2 over the located resonances
CarlemanReport carleman_sum(const std::vector<Resonance>& rs,
                            const StepLevels& lv,
                            const std::vector<double>& radii);

}  // namespace steplike

#endif
