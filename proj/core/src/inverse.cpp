#include "fracheat/inverse.hpp"

#include <cmath>
#include <stdexcept>

#include "fracheat/potentials.hpp"
#include "fracheat/special.hpp"

namespace fracheat::inverse {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double binom(int l, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (l - k + i) / i;
  return v;
}

}  // namespace

void InverseSpec::validate(double alpha) const {
  if (l < 1) throw std::invalid_argument("InverseSpec: l must be >= 1");
  if (!(l > alpha)) throw std::domain_error("InverseSpec: requires l > alpha");
  if (!(eps > 0.0)) throw std::invalid_argument("InverseSpec: eps must be > 0");
  if (!(y_radius > 0.0))
    throw std::invalid_argument("InverseSpec: y_radius must be > 0");
  quad.validate();
}

double marchaud_difference(const SpaceTimeFn& u, int l, std::span<const double> y,
                           double tau, std::span<const double> x, double t) {
  if (l < 1) throw std::invalid_argument("marchaud_difference: l must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("marchaud_difference: tau must be > 0");
  const std::size_t n = x.size();
  if (y.size() != n) throw std::invalid_argument("marchaud_difference: dim mismatch");
  double shifted[8];
  if (n > 8) throw std::invalid_argument("marchaud_difference: dimension too large");
  double acc = 0.0;
  for (int k = 0; k <= l; ++k) {
    const double root = std::sqrt(k * tau);
    for (std::size_t d = 0; d < n; ++d) shifted[d] = x[d] - y[d] * root;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binom(l, k) * u({shifted, n}, t - k * tau);
  }
  return acc;
}

double marchaud_difference(const fields::Field& u, int l, std::span<const double> y,
                           double tau, std::span<const double> x, double t) {
  return marchaud_difference(
      [&](std::span<const double> xx, double tt) { return u.eval(xx, tt); }, l, y,
      tau, x, t);
}

double marchaud_a_integral(double alpha, int l) {
  if (!(l > alpha) || !(alpha > 0.0))
    throw std::domain_error("marchaud_a_integral: requires 0 < alpha < l");
  auto f = [&](double s) {
    return std::pow(s, -1.0 - alpha) * std::pow(-std::expm1(-s), l);
  };
  // integrand ~ s^(l-1-alpha) near 0
  const double sing = l - 1.0 - alpha;
  auto r1 = quadrature::integrate_endpoint_power(f, 0.0, 1.0, sing, 0.0, 1e-14,
                                                 1e-12, 2048);
  const double L = 50.0;
  auto r2 = quadrature::integrate(f, 1.0, L, 1e-14, 1e-12, 2048);
  // beyond L the bracket is 1 up to l*e^-L
  const double tail = std::pow(L, -alpha) / alpha;
  return r1.value + r2.value + tail;
}

double marchaud_constant(int n, double alpha, int l) {
  if (n < 1) throw std::invalid_argument("marchaud_constant: n must be >= 1");
  if (!(l > alpha)) throw std::domain_error("marchaud_constant: requires l > alpha");
  return 1.0 / (std::pow(4.0 * kPi, 0.5 * n) * marchaud_a_integral(alpha, l));
}

namespace {

// (4 pi)^(-n/2) * int e^(-|y|^2/4) (Delta^l u)(x,t) dy: the k-th stencil term
// is the heat mass of the slice t - k*tau at scale k*tau.
double gaussian_difference(const fields::Field& u, int n, int l,
                           std::span<const double> x, double t, double tau,
                           const quadrature::QuadratureSpec& quad) {
  double acc = u.eval(x, t);
  for (int k = 1; k <= l; ++k) {
    const double slice_t = t - k * tau;
    double mass = 0.0;
    if (slice_t > u.node().support_time_begin())
      mass = potentials::spatial_heat_mass(u, n, x, slice_t, k * tau, quad);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binom(l, k) * mass;
  }
  return acc;
}

}  // namespace

double j_inverse(const fields::Field& u, int n, double alpha,
                 const InverseSpec& spec, std::span<const double> x, double t) {
  spec.validate(alpha);
  const double C = marchaud_constant(n, alpha, spec.l);
  const double gauss_norm = std::pow(4.0 * kPi, 0.5 * n);

  // |y| <= y_radius corresponds to a spatial window of y_radius*sqrt(k tau)
  // around x; expressed through the heat-mass machinery's sigma window
  quadrature::QuadratureSpec quad = spec.quad;
  quad.spatial_tail_sigmas =
      std::max(4.0, spec.y_radius / std::sqrt(2.0));

  const double u_here = u.eval(x, t);
  const double zero_before = u.node().support_time_begin();
  const double tau_star = t - zero_before;  // all k >= 1 terms vanish beyond

  if (tau_star <= spec.eps) {
    // only the k = 0 term survives on (eps, inf)
    return C * gauss_norm * u_here * std::pow(spec.eps, -alpha) / alpha;
  }

  double upper = tau_star;
  bool truncated = false;
  if (spec.tau_max > 0.0 && spec.tau_max < tau_star) {
    upper = std::max(spec.eps, spec.tau_max);
    truncated = true;
  }

  auto integrand = [&](double tk) {
    return std::pow(tk, -1.0 - alpha) *
           gaussian_difference(u, n, spec.l, x, t, tk, quad);
  };

  // geometric dyadic panels [eps 2^m, eps 2^(m+1)] matching the integrand decay
  quadrature::QuadResult total;
  double lo = spec.eps;
  int guard = 0;
  while (lo < upper && ++guard < 400) {
    const double hi = std::min(2.0 * lo, upper);
    total += quadrature::integrate(integrand, lo, hi, quad.abs_tol, quad.rel_tol,
                                   quad.max_panels / 16);
    lo = hi;
  }

  // exact remainder: beyond tau_star only u(x,t) remains in the difference
  double tail = gauss_norm * u_here * std::pow(tau_star, -alpha) / alpha;
  if (truncated) {
    // skipped band (upper, tau_star): bound by the integrand size at the cut
    const double band = std::abs(gaussian_difference(u, n, spec.l, x, t, upper, quad)) *
                        (std::pow(upper, -alpha) - std::pow(tau_star, -alpha)) / alpha;
    total.error += band;
  }
  quadrature::require_converged(total, quad, "j_inverse");
  return C * (total.value + tail);
}

InverseScan j_inverse_scan(const fields::Field& u, int n, double alpha,
                           InverseSpec spec, std::span<const double> x, double t,
                           int levels) {
  if (levels < 2) throw std::invalid_argument("j_inverse_scan: need >= 2 levels");
  InverseScan scan;
  scan.assumed_rate = std::min(1.0, spec.l - alpha);
  for (int j = 0; j < levels; ++j) {
    scan.eps.push_back(spec.eps);
    scan.values.push_back(j_inverse(u, n, alpha, spec, x, t));
    spec.eps *= 0.5;
  }
  const double k2 = std::pow(2.0, scan.assumed_rate);
  const std::size_t m = scan.values.size();
  scan.extrapolated = (k2 * scan.values[m - 1] - scan.values[m - 2]) / (k2 - 1.0);
  if (m >= 3) {
    const double d1 = scan.values[m - 2] - scan.values[m - 3];
    const double d2 = scan.values[m - 1] - scan.values[m - 2];
    if (d2 != 0.0 && d1 / d2 > 0.0) scan.empirical_rate = std::log2(d1 / d2);
  }
  return scan;
}

}  // namespace fracheat::inverse
