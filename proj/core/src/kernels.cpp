#include "fracheat/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "fracheat/special.hpp"

namespace fracheat::kernels {

namespace {
constexpr double kLn4Pi = 2.53102424696929153324550696747336;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}
}  // namespace

void KernelParams::validate() const {
  if (n < 1) throw std::invalid_argument("KernelParams: n must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("KernelParams: alpha must be > 0");
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("KernelParams: scales must be >= 0");
  if (a == 0.0 && b == 0.0)
    throw std::invalid_argument("KernelParams: a and b cannot both vanish");
}

double phi_radial(int n, double alpha, double dist, double t) {
  if (t <= 0.0) return 0.0;
  // single exponentiation in log space to survive small t / large |x|
  const double log_value = (alpha - 1.0) * std::log(t) - special::log_gamma(alpha) -
                           0.5 * n * (kLn4Pi + std::log(t)) -
                           dist * dist / (4.0 * t);
  return std::exp(log_value);
}

double phi(const KernelParams& params, std::span<const double> x, double t) {
  params.validate();
  return phi_radial(params.n, params.alpha, std::sqrt(norm2(x)), t);
}

double phi_scaled_radial(int n, double alpha, double a, double b, double dist,
                         double t) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("phi_scaled: a and b must be > 0 pointwise");
  return std::pow(a, -n) / b * phi_radial(n, alpha, dist / a, t / b);
}

double phi_scaled(const KernelParams& params, std::span<const double> x,
                  double t) {
  params.validate();
  return phi_scaled_radial(params.n, params.alpha, params.a, params.b,
                           std::sqrt(norm2(x)), t);
}

std::complex<double> symbol_from_norm(double alpha, double y_norm_sq, double s) {
  if (y_norm_sq == 0.0 && s == 0.0)
    throw std::domain_error("symbol: undefined at y = 0, s = 0");
  return std::pow(std::complex<double>(y_norm_sq, -s),
                  std::complex<double>(-alpha, 0.0));
}

std::complex<double> symbol(int n, double alpha, std::span<const double> y,
                            double s) {
  (void)n;
  return symbol_from_norm(alpha, norm2(y), s);
}

double spatial_fourier_phi(int n, double alpha, std::span<const double> y,
                           double t) {
  (void)n;
  if (!(t > 0.0)) throw std::domain_error("spatial_fourier_phi: t must be > 0");
  return std::exp((alpha - 1.0) * std::log(t) - special::log_gamma(alpha) -
                  t * norm2(y));
}

double phi_lr_norm(int n, double alpha, double r, double dt) {
  if (!(r >= 1.0)) throw std::domain_error("phi_lr_norm: r must be >= 1");
  if (!(dt > 0.0)) throw std::domain_error("phi_lr_norm: dt must be > 0");
  if (!(alpha > 0.0)) throw std::domain_error("phi_lr_norm: alpha must be > 0");
  const double e = r * (alpha - 1.0 - 0.5 * n) + 0.5 * n;
  if (!(e > -1.0))
    throw std::domain_error("phi_lr_norm: integrability requires r(alpha-1-n/2)+n/2 > -1");
  const double log_norm_r = -r * special::log_gamma(alpha) +
                            0.5 * n * (1.0 - r) * kLn4Pi -
                            0.5 * n * std::log(r) + (e + 1.0) * std::log(dt) -
                            std::log(e + 1.0);
  return std::exp(log_norm_r / r);
}

}  // namespace fracheat::kernels
