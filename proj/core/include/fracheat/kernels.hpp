#pragma once

#include <complex>
#include <span>

namespace fracheat::kernels {

/// Identifies a member of the scaled kernel family
///   Phi_{alpha,a,b}(x,t) = a^-n b^-1 Phi_alpha(x/a, t/b).
/// a = b = 1 is the unscaled kernel.
struct KernelParams {
  int n = 1;
  double alpha = 1.0;
  double a = 1.0;
  double b = 1.0;

  void validate() const;
};

/// Phi_alpha(x,t) = t^(alpha-1)/Gamma(alpha) (4 pi t)^(-n/2) exp(-|x|^2/(4t))
/// for t > 0 and exactly 0 for t <= 0.
double phi(const KernelParams& params, std::span<const double> x, double t);
double phi_radial(int n, double alpha, double dist, double t);

/// Scaled kernel; requires a > 0 and b > 0 (the degenerate limits are owned
/// by the potential operators, not evaluated pointwise).
double phi_scaled(const KernelParams& params, std::span<const double> x, double t);
double phi_scaled_radial(int n, double alpha, double a, double b, double dist,
                         double t);

/// Fourier symbol (|y|^2 - i s)^(-alpha), principal branch.  The base has
/// nonnegative real part, so no branch-cut crossing occurs.
std::complex<double> symbol(int n, double alpha, std::span<const double> y,
                            double s);
std::complex<double> symbol_from_norm(double alpha, double y_norm_sq, double s);

/// Spatial Fourier transform of Phi_alpha(.,t):
///   t^(alpha-1)/Gamma(alpha) * exp(-t |y|^2),  t > 0.
double spatial_fourier_phi(int n, double alpha, std::span<const double> y,
                           double t);

/// || Phi_alpha chi_{R^n x (0,dt)} ||_{L^r} by the closed form
///   [ Gamma(alpha)^-r (4pi)^(n(1-r)/2) r^(-n/2) dt^(E+1)/(E+1) ]^(1/r)
/// with E = r(alpha-1-n/2) + n/2.  Requires E > -1 (integrability) and r >= 1.
double phi_lr_norm(int n, double alpha, double r, double dt);

}  // namespace fracheat::kernels
