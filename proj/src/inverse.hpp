#ifndef STEPLIKE_INVERSE_HPP
#define STEPLIKE_INVERSE_HPP

// Inverse-side formulas: recovery of |R-| on the boundary of the physical
// sheet from the transmission product, truncated Weierstrass-type products
// over the resonance set for R-(z)R-(w-(z)) and T-(z)T-(w-(z)) as functions
// of k = r+(z), and the case analysis fixing the real multiple left free by
// the product representation.
//
// Round-trip mode validates every formula against forward data generated by
// the engines; resonance-only mode reconstructs from a located resonance
// set, with accuracy limited by the truncation radius K and reported, not
// guaranteed.

#include <string>
#include <vector>

#include "potential.hpp"
#include "resonances.hpp"
#include "scattering.hpp"

namespace steplike {

// rho solving 1/rho - rho = f, the "+" root: always in (0, 1]
double modulus_from_f(double f);

struct BoundaryTrace {
  std::vector<double> z;  // real projections, > V-
  std::vector<Complex> t_minus, t_minus_pm;  // T-(z), T-(w+-(z))
  std::vector<Complex> r_minus, r_minus_pm;  // R-(z), R-(w+-(z))
  std::vector<Complex> rp, rm;               // roots r+(z), r-(z)
};

// engine data on the boundary of the physical sheet (upper side)
BoundaryTrace forward_boundary_trace(const Potential& V,
                                     const std::vector<double>& grid,
                                     double ode_tol = 1e-10);

// f(z) = | (r-/r+) T-(z) T-(w+-(z)) / R-(w+-(z)) |; entries where
// R-(w+-(z)) vanishes are flagged as poles of f (rho = 0 there)
struct FValues {
  std::vector<double> f;
  std::vector<bool> pole;
};
FValues f_from_forward(const BoundaryTrace& trace);

struct FactorizationParams {
  Complex gamma1{1.0, 0.0};
  Complex delta1{0.0, 0.0};
  Complex gamma2{1.0, 0.0};
  Complex delta2{0.0, 0.0};
  int alpha_plus = 2;  // vanishing order of T-(z)T-(w-(z)) at r+ = 0
};

// conjugate-paired truncated products over the located resonances with
// |r+(z_j)| <= K and Pi(z_j) != V+:
//   product_R2: prod (r+(z_j)+k)/(r+(z_j)-k)        [for R-(z)R-(w-(z))]
//   product_T2: prod 1/(1 - k/r+(z_j))              [for T-(z)T-(w-(z))]
// Factors are grouped into (z_j, conj z_j) pairs so partial products stay
// magnitude-stable; the grouped value is independent of input order.
LogComplex truncated_product_R2(const std::vector<Resonance>& rs,
                                const StepLevels& lv, double K,
                                const FactorizationParams& par, Complex k);
LogComplex truncated_product_T2(const std::vector<Resonance>& rs,
                                const StepLevels& lv, double K,
                                const FactorizationParams& par, Complex k);

// gamma/delta from forward data along the positive imaginary k axis, where
// both products are real for real potentials; delta comes out purely
// imaginary, as conjugation symmetry requires
FactorizationParams fit_params_roundtrip(const Potential& V,
                                         const std::vector<Resonance>& rs,
                                         double K, double t_lo = 1.0,
                                         double t_hi = 3.0, int n = 9,
                                         double ode_tol = 1e-10);

// determination from the resonance data alone: delta from the translation gauge (hull
// center), gamma from branch-point membership
FactorizationParams params_resonance_only(const Potential& V,
                                          const std::vector<Resonance>& rs,
                                          bool branch_resonance);

enum class RecoveryMode { roundtrip, resonance_only };

struct RecoveryReport {
  RecoveryMode mode;
  double K = 0.0;
  std::vector<double> z;
  std::vector<double> rho;            // recovered |R-|
  std::vector<double> arg_recovered;  // recovered arg R-
  double max_modulus_error = 0.0;     // vs forward |R-|
  double max_full_error = 0.0;        // vs forward R-
  int phase_jumps = 0;  // adjacent recovered-phase steps > pi/2 (grid too coarse)
  std::string to_json() const;
};

// |R-| from the f-formula and arg R- from the phase of the transmission
// product, assembled and compared against the forward truth on the grid
RecoveryReport recover_R_minus_on_boundary(const Potential& V,
                                           const std::vector<Resonance>& rs,
                                           RecoveryMode mode, double K,
                                           const std::vector<double>& grid,
                                           double ode_tol = 1e-10);

struct NormalizationReport {
  bool branch_resonance = false;  // a point over V+ carries a pole
  double branch_limit = 0.0;      // lim -r- T- T-(w-)/r+ near r+ = 0
  bool apriori_beta_form = false; // V declared as step-plus-C0-perturbation
  double large_k_constant = 0.0;  // |T- T-(w+)| |V+-V-| / (4 k^2) at large k
  double sign_ratio = 0.0;        // T+(z0)/T+(w-(z0)), real
  bool sign_criterion_ok = false;
  std::string conclusion;
};

// which of the three uniqueness criteria applies, with the measured
// normalization constants; never guesses when none applies
NormalizationReport normalization_case_analysis(const Potential& V,
                                                const std::vector<Resonance>& rs,
                                                double ode_tol = 1e-10);

}  // namespace steplike

#endif
