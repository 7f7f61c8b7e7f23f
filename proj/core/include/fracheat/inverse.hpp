#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracheat/fields.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat::inverse {

/// Controls for the approximate inverse J_eps^-alpha.
struct InverseSpec {
  int l = 2;             // difference order, must exceed alpha
  double eps = 1e-2;     // lower cutoff of the tau integral
  quadrature::QuadratureSpec quad{};
  double tau_max = -1.0; // tau truncation; <= 0 means automatic: the integral
                         // beyond tau = t - (u's vanishing time) is evaluated
                         // in closed form, so no truncation error remains
  double y_radius = 8.0; // Gaussian-weighted y window

  void validate(double alpha) const;
};

using SpaceTimeFn = std::function<double(std::span<const double>, double)>;

/// (Delta^l_{y,tau} u)(x,t) = sum_k (-1)^k C(l,k) u(x - y sqrt(k tau), t - k tau).
double marchaud_difference(const SpaceTimeFn& u, int l, std::span<const double> y,
                           double tau, std::span<const double> x, double t);
double marchaud_difference(const fields::Field& u, int l, std::span<const double> y,
                           double tau, std::span<const double> x, double t);

/// A(alpha, l) = int_0^inf s^(-1-alpha) (1 - e^-s)^l ds, for l > alpha.
double marchaud_a_integral(double alpha, int l);

/// Normalizing constant C(n, alpha, l) = [ (4 pi)^(n/2) A(alpha, l) ]^-1,
/// the unique constant making J_eps^-alpha (J_alpha f) -> f on the Fourier
/// side (the Gaussian y-integral contributes (4 pi)^(n/2) e^(-k tau |xi|^2),
/// the binomial sum telescopes to (1 - e^(-tau z))^l, and the tau integral
/// then normalizes to A(alpha,l) z^alpha).
double marchaud_constant(int n, double alpha, int l);

/// J_eps^-alpha u(x,t).  When u = J_alpha f and eps -> 0 this recovers f at
/// continuity points.  u must vanish for t below its support_time_begin.
double j_inverse(const fields::Field& u, int n, double alpha,
                 const InverseSpec& spec, std::span<const double> x, double t);

struct InverseScan {
  std::vector<double> eps;
  std::vector<double> values;
  double extrapolated = 0.0;  // two-point Richardson at rate min(1, l - alpha)
  double assumed_rate = 0.0;
  double empirical_rate = 0.0;  // from the last three scan values
};

/// Evaluates j_inverse along the dyadic sequence eps, eps/2, ..., applying
/// Richardson extrapolation with the assumed O(eps^min(1, l-alpha)) error.
InverseScan j_inverse_scan(const fields::Field& u, int n, double alpha,
                           InverseSpec spec, std::span<const double> x, double t,
                           int levels);

}  // namespace fracheat::inverse
