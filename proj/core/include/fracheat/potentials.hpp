#pragma once

#include <span>

#include "fracheat/fields.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat::potentials {

using quadrature::QuadratureSpec;

/// Slab Omega = R^n x (a, b).
struct SlabRegion {
  double a = 0.0;
  double b = 1.0;

  void validate() const;
};

/// J_alpha f (x,t): space-time convolution of f with Phi_alpha.  The lower
/// time limit is quad.time_origin, justified by the catalog invariant
/// f = 0 for t <= 0.
double j_alpha(const fields::Field& f, int n, double alpha,
               std::span<const double> x, double t,
               const QuadratureSpec& quad = {});

/// Scaled potential J_{alpha,a,b} f.  a = 0 dispatches to riemann_liouville,
/// b = 0 to riesz; both zero is rejected.
double j_scaled(const fields::Field& f, int n, double alpha, double a, double b,
                std::span<const double> x, double t,
                const QuadratureSpec& quad = {});

/// Truncated potential V_{alpha,Omega} f with Omega = R^n x (slab.a, slab.b);
/// requires t in (slab.a, slab.b).
double v_alpha(const fields::Field& f, int n, double alpha,
               const SlabRegion& slab, std::span<const double> x, double t,
               const QuadratureSpec& quad = {});

/// Riemann-Liouville integral of f in t of order alpha (base point
/// quad.time_origin, exploiting f = 0 below it).
double riemann_liouville(const fields::Field& f, double alpha,
                         std::span<const double> x, double t,
                         const QuadratureSpec& quad = {});

/// Riesz potential of f in x of order alpha; requires 0 < 2*alpha < n.
/// Supported for radial field structures (the catalog); +infinity for
/// x-independent fields with a nonzero slice.
double riesz(const fields::Field& f, int n, double alpha,
             std::span<const double> x, double t,
             const QuadratureSpec& quad = {});

/// int f(xi, tau) Phi_1(x - xi, s) dxi: the spatial heat mass of the time
/// slice tau at scale s.  Exposed because the Marchaud inverse reuses it.
double spatial_heat_mass(const fields::Field& f, int n,
                         std::span<const double> x, double tau, double s,
                         const QuadratureSpec& quad = {});

}  // namespace fracheat::potentials
