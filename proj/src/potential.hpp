#ifndef STEPLIKE_POTENTIAL_HPP
#define STEPLIKE_POTENTIAL_HPP

// Steplike potentials: V == V- far left, V == V+ far right, V+ < V-.
// Two concrete models share one interface:
//   * PiecewiseConstantPotential -- exact staircase, handled by transfer
//     matrices layer by layer;
//   * SmoothPerturbationPotential -- reference step at beta plus a continuous
//     compactly supported perturbation p, handled by the ODE engine (or by
//     controlled discretization into a staircase).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "riemann.hpp"

namespace steplike {

struct SupportHull {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
  double center() const { return 0.5 * (a + b); }
};

class PiecewiseConstantPotential {
 public:
  // breakpoints x0 < ... < xn; values v1..vn on the gaps between them;
  // V- on (-inf,x0), V+ on (xn,inf).  n = 0 is the pure step at x0.
  PiecewiseConstantPotential(StepLevels levels, std::vector<double> breakpoints,
                             std::vector<double> values);

  static PiecewiseConstantPotential pure_step(StepLevels levels, double beta) {
    return PiecewiseConstantPotential(levels, {beta}, {});
  }

  const StepLevels& levels() const { return levels_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  bool pure_step() const { return values_.empty(); }

  double value_at(double x) const;
  // smallest interval outside of which V is constant at its tails; spurious
  // breakpoints with equal values on both sides do not count
  SupportHull support_hull() const;

  PiecewiseConstantPotential translated(double c) const;

 private:
  StepLevels levels_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// p(x) = amplitude * cos^2(pi (x-center) / (2 half_width)) on
// [center-half_width, center+half_width], zero outside.  Continuous with
// bounded derivative.
struct BumpPerturbation {
  double amplitude = 0.0;
  double center = 0.0;
  double half_width = 1.0;

  double operator()(double x) const;
  double max_abs_derivative() const;
  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
};

// continuous piecewise-linear interpolation through (xs, ps); ps must vanish
// at both ends so the perturbation is compactly supported
struct TablePerturbation {
  std::vector<double> xs;
  std::vector<double> ps;

  double operator()(double x) const;
  double max_abs_derivative() const;
  double lo() const { return xs.front(); }
  double hi() const { return xs.back(); }
};

class SmoothPerturbationPotential {
 public:
  using Perturbation = std::variant<BumpPerturbation, TablePerturbation>;

  SmoothPerturbationPotential(StepLevels levels, double beta, Perturbation p);

  const StepLevels& levels() const { return levels_; }
  double beta() const { return beta_; }
  const Perturbation& perturbation() const { return p_; }

  double p_at(double x) const;
  double value_at(double x) const;
  double max_abs_p_derivative() const;

  // hull of supp p; [0,0]-width at beta when p vanishes identically
  SupportHull p_hull() const;
  double b1() const;  // half-width: p supported in [-b1, b1]
  SupportHull support_hull() const;

  // edges of the region where V differs from its tails, and interior points
  // where V' jumps (integration must not step across these)
  double left_edge() const;
  double right_edge() const;
  std::vector<double> knots() const;

  SmoothPerturbationPotential translated(double c) const;

 private:
  StepLevels levels_;
  double beta_;
  Perturbation p_;
};

class Potential {
 public:
  using Model =
      std::variant<PiecewiseConstantPotential, SmoothPerturbationPotential>;

  explicit Potential(PiecewiseConstantPotential v) : model_(std::move(v)) {}
  explicit Potential(SmoothPerturbationPotential v) : model_(std::move(v)) {}

  const Model& model() const { return model_; }
  bool piecewise() const {
    return std::holds_alternative<PiecewiseConstantPotential>(model_);
  }
  const PiecewiseConstantPotential& as_piecewise() const {
    return std::get<PiecewiseConstantPotential>(model_);
  }
  const SmoothPerturbationPotential& as_smooth() const {
    return std::get<SmoothPerturbationPotential>(model_);
  }

  const StepLevels& levels() const;
  double value_at(double x) const;
  SupportHull support_hull() const;
  Potential translated(double c) const;

  // JSON document, either
  //   {"v_minus":..,"v_plus":..,"breakpoints":[..],"values":[..]}
  // or
  //   {"v_minus":..,"v_plus":..,"beta":..,"perturbation":{"kind":"bump",
  //    "amplitude":..,"center":..,"half_width":..}}
  // or with "kind":"table","xs":[..],"ps":[..].
  // Throws DomainError naming the offending field.
  static Potential from_json_text(const std::string& text);
  static Potential from_file(const std::string& path);
  std::string to_json_text() const;

 private:
  Model model_;
};

// midpoint-sampled staircase on the perturbation support, with the step at
// beta kept exact; sup-norm model error <= max|p'| * cell_width / 2
PiecewiseConstantPotential discretize(const SmoothPerturbationPotential& v,
                                      int n_layers);
double discretize_sup_error_bound(const SmoothPerturbationPotential& v,
                                  int n_layers);

}  // namespace steplike

#endif
