#pragma once

namespace fracheat::special {

/// ln Gamma(x) for x > 0 (Lanczos approximation, Godfrey coefficient set).
/// Relative accuracy better than 1e-13 over the positive axis.
double log_gamma(double x);

/// Gamma(x) for x > 0.
double gamma_fn(double x);

/// Regularized lower incomplete gamma P(a,x) and its complement Q(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Sharp constant M(alpha, lambda) = Gamma(al/(1-l)+1) / Gamma(a+al/(1-l)+1),
/// the coefficient of the optimal pointwise bound in the subcritical regime.
/// Requires alpha > 0 and lambda in (0,1).
double sharp_constant(double alpha, double lambda);

/// Mbar = Gamma(alpha+1) * M(alpha, lambda).
double mbar_constant(double alpha, double lambda);

/// Riesz normalization gamma(n, alpha) = 4^alpha pi^(n/2) Gamma(alpha) /
/// Gamma(n/2 - alpha).  Requires 0 < 2*alpha < n.
double riesz_constant(int n, double alpha);

/// G(n, c, R) = pi^(-n/2) * integral of exp(-|z|^2) over the ball |z - c*e1| < R.
/// Strictly decreasing in c, increasing in R, with values in (0, 1).
/// R may be +infinity (returns 1).
double offset_gaussian_mass(int n, double c, double R);

/// dG/dR of offset_gaussian_mass: the Gaussian mass density of the sphere
/// |z - c*e1| = R.
double offset_gaussian_ring(int n, double c, double R);

/// Heat-ball mass: integral of Phi_1(x - xi, s) over |xi| < R for |x| = dist.
/// Equals G(n, dist/sqrt(4s), R/sqrt(4s)).  Requires s > 0; R may be +infinity.
double heat_ball_mass(int n, double dist, double s, double R);

/// d/dr of heat_ball_mass in the ball radius: the heat-kernel mass density of
/// the sphere |xi| = r seen from distance `dist` at time s.
double heat_ball_ring(int n, double dist, double s, double r);

}  // namespace fracheat::special
