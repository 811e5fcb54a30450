#ifndef STEPLIKE_JOST_HPP
#define STEPLIKE_JOST_HPP

// Jost solutions for a steplike potential at a point of the energy surface:
//   f+  ==  exp( i r+ x) exactly on the right tail,
//   f-  ==  exp(-i r- x) exactly on the left tail.
// Values are carried in scaled form (vector times exp(log_scale)) so that
// propagation stays finite for |z| up to ~1e6 and deep into the complex
// plane.  Interior layers use the exact constant-coefficient fundamental
// matrix written in functions even in the layer root, so propagation is
// single-valued in z; the sheet enters only through the tail seeds.

#include <vector>

#include "errors.hpp"
#include "potential.hpp"
#include "riemann.hpp"

namespace steplike {

struct ScaledState {
  Complex f;
  Complex df;
  Complex log_scale;  // true (f, f') = (f, df) * exp(log_scale)
};

struct JostPair {
  double x_left;   // left tail edge (f- seeded here)
  double x_right;  // right tail edge (f+ seeded here)
  ScaledState fminus_left, fminus_right;
  ScaledState fplus_left, fplus_right;
  Complex rp, rm;  // sheet-resolved roots r+(p), r-(p)
};

// exact layer propagation of (f, f') across [from, to] with constant
// potential value v; returns the scaled state
ScaledState propagate_layer(ScaledState s, Complex z, double v, double from,
                            double to);

JostPair transfer_matrix_jost(const PiecewiseConstantPotential& V,
                              const SurfacePoint& p);

JostPair ode_jost(const SmoothPerturbationPotential& V, const SurfacePoint& p,
                  double tol);

JostPair jost_pair(const Potential& V, const SurfacePoint& p, double ode_tol);

// f- and f+ states at the requested interior positions (sorted ascending),
// for Wronskian-drift and engine-consistency checks
struct JostSamples {
  std::vector<double> x;
  std::vector<ScaledState> fminus;
  std::vector<ScaledState> fplus;
};
JostSamples ode_jost_samples(const SmoothPerturbationPotential& V,
                             const SurfacePoint& p, double tol,
                             std::vector<double> xs);

}  // namespace steplike

#endif
