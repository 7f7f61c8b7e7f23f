#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracheat/fields.hpp"
#include "fracheat/potentials.hpp"
#include "fracheat/special.hpp"

namespace fracheat::fields {

namespace {

double region_threshold(int n, double p, double lambda) {
  return 0.5 * (n + 2.0) / p * (1.0 - 1.0 / lambda);
}

void require_region_c(int n, double p, double lambda, double alpha,
                      const char* what) {
  if (!(lambda > 1.0) || !(alpha > 0.0) ||
      !(alpha < region_threshold(n, p, lambda)))
    throw std::domain_error(std::string(what) +
                            ": (lambda, alpha) must lie in region C for (n, p)");
}

struct SetSample {
  std::vector<std::array<double, 2>> points;  // (x1, t), radial points x >= 0
};

// 64 x 64 sample of a backward-paraboloid set {|x| < sqrt(T-s), s in (s_lo, s_hi)}
SetSample sample_backward_set(double T, double s_lo, double s_hi) {
  SetSample out;
  constexpr int kGrid = 64;
  out.points.reserve(kGrid * kGrid);
  for (int i = 0; i < kGrid; ++i) {
    const double s = s_lo + (i + 0.5) / kGrid * (s_hi - s_lo);
    const double rad = std::sqrt(T - s);
    for (int j = 0; j < kGrid; ++j) {
      const double u = (j + 0.5) / kGrid;
      out.points.push_back({u * rad, s});
    }
  }
  return out;
}

// 64 x 64 sample of the paraboloid set {|x| < sqrt(t), t in (t_lo, t_hi)},
// geometric in t to cover several scales
SetSample sample_paraboloid_set(double t_lo, double t_hi) {
  SetSample out;
  constexpr int kGrid = 64;
  out.points.reserve(kGrid * kGrid);
  const double lr = std::log(t_hi / t_lo);
  for (int i = 0; i < kGrid; ++i) {
    const double t = t_lo * std::exp((i + 0.5) / kGrid * lr);
    const double rad = std::sqrt(t);
    for (int j = 0; j < kGrid; ++j) {
      const double u = (j + 0.5) / kGrid;
      out.points.push_back({u * rad, t});
    }
  }
  return out;
}

// sup over the sample of num(x,t) / (J_alpha den (x,t))^lambda
double ratio_sup(const Field& num, const Field& den, int n, double alpha,
                 double lambda, const SetSample& sample,
                 const quadrature::QuadratureSpec& quad) {
  double sup = 0.0;
  for (const auto& pt : sample.points) {
    const double f = num.eval({&pt[0], 1}, pt[1]);
    if (f == 0.0) continue;
    const double j = potentials::j_alpha(den, n, alpha, {&pt[0], 1}, pt[1], quad);
    if (!(j > 0.0)) return fields::kInf;
    sup = std::max(sup, f / std::pow(j, lambda));
  }
  return sup;
}

}  // namespace

BlowupFamily make_blowup_small_time(int n, double p, double lambda, double alpha,
                                    double q, int terms,
                                    const quadrature::QuadratureSpec& quad_in) {
  require_region_c(n, p, lambda, alpha, "make_blowup_small_time");
  if (!(q > p))
    throw std::domain_error("make_blowup_small_time: requires q > p");
  if (!(alpha < 0.5 * (n + 2.0) / q * (1.0 - 1.0 / lambda)))
    throw std::domain_error(
        "make_blowup_small_time: q too large (requires alpha < (n+2)/(2q)(1-1/lambda))");
  if (terms < 1)
    throw std::invalid_argument("make_blowup_small_time: need >= 1 term");

  quadrature::QuadratureSpec quad = quad_in;
  quad.rel_tol = std::max(quad.rel_tol, 1e-6);  // sup scans need speed, not digits

  const double r = 0.5 * (n + 2.0) / q;
  const double gamma = 0.5 * (n + 2.0) / p - r;  // > 0 because q > p
  BlowupFamily fam;
  fam.base = make_paraboloid_power(n, p, gamma, /*truncated=*/true);
  fam.small_time = true;
  fam.q = q;
  fam.n = n;
  fam.p = p;
  fam.lambda = lambda;
  fam.alpha = alpha;

  // global constant of f0 <= C (J f0)^lambda over the truncated paraboloid
  const SetSample omega0 = sample_paraboloid_set(1e-3, 0.999);
  const double c_star = ratio_sup(fam.base, fam.base, n, alpha, lambda, omega0, quad);
  if (!(c_star < fields::kInf))
    throw std::runtime_error("make_blowup_small_time: base ratio unbounded on sample");

  // greedy T selection: shrink by 2 until the proof's sup conditions hold
  double T = 0.499;
  const auto conditions_hold = [&](double Tj) {
    const Field fj = make_backward_paraboloid(n, p, gamma, 0.5 * Tj, Tj);
    const SetSample omega_j = sample_backward_set(Tj, 0.5 * Tj, Tj);
    const SetSample omega_plus = sample_backward_set(Tj, 0.75 * Tj, Tj);
    const SetSample omega_minus = sample_backward_set(Tj, 0.5 * Tj, 0.75 * Tj);
    if (!(ratio_sup(fam.base, fam.base, n, alpha, lambda, omega_j, quad) < 1.0))
      return false;
    if (!(ratio_sup(fj, fj, n, alpha, lambda, omega_plus, quad) < 1.0))
      return false;
    if (!(ratio_sup(fj, fam.base, n, alpha, lambda, omega_minus, quad) < 0.5))
      return false;
    return true;
  };
  int guard = 0;
  while (!conditions_hold(T)) {
    T *= 0.5;
    if (++guard > 200)
      throw std::runtime_error("make_blowup_small_time: T search exhausted");
  }

  for (int j = 0; j < terms; ++j) {
    fam.T_seq.push_back(T);
    fam.t_seq.push_back(0.5 * T);
    fam.terms.push_back(make_backward_paraboloid(n, p, gamma, 0.5 * T, T));
    if (j + 1 < terms && !conditions_hold(0.2 * T))
      throw std::runtime_error("make_blowup_small_time: condition lost while shrinking");
    T *= 0.2;  // T_{j+1} < T_j / 4
  }

  // theta^(lambda-1) >= C/K turns f <= C (J f)^lambda into a K-subsolution
  const double c_glob = std::max(1.0, c_star);
  fam.amplitude = std::pow(1.1 * c_glob / fam.K, 1.0 / (lambda - 1.0));
  return fam;
}

BlowupFamily make_blowup_large_time(int n, double p, double lambda, double alpha,
                                    int terms,
                                    const quadrature::QuadratureSpec& quad_in) {
  require_region_c(n, p, lambda, alpha, "make_blowup_large_time");
  if (terms < 1)
    throw std::invalid_argument("make_blowup_large_time: need >= 1 term");

  quadrature::QuadratureSpec quad = quad_in;
  quad.rel_tol = std::max(quad.rel_tol, 1e-6);

  // unique gamma with lambda = ((n+2)/(2p) - gamma) / ((n+2)/(2p) - alpha - gamma)
  const double half = 0.5 * (n + 2.0) / p;
  const double gamma = half - lambda * alpha / (lambda - 1.0);
  if (!(gamma > 0.0 && gamma < half - alpha))
    throw std::domain_error(
        "make_blowup_large_time: gamma fell outside (0, (n+2)/(2p) - alpha)");

  BlowupFamily fam;
  fam.base = make_paraboloid_power(n, p, gamma, /*truncated=*/false);
  fam.small_time = false;
  fam.q = 0.5 * (n + 2.0) / alpha * (1.0 - 1.0 / lambda);
  fam.n = n;
  fam.p = p;
  fam.lambda = lambda;
  fam.alpha = alpha;

  // the exponent identity makes both component ratios T-invariant; estimate
  // their constants once
  const SetSample omega0 = sample_paraboloid_set(0.5, 64.0);
  const double c0 = ratio_sup(fam.base, fam.base, n, alpha, lambda, omega0, quad);
  const Field f_ref = make_backward_paraboloid(n, p, gamma, 2.0, 4.0);
  const SetSample omega_plus = sample_backward_set(4.0, 3.0, 4.0);
  const double c_plus = ratio_sup(f_ref, f_ref, n, alpha, lambda, omega_plus, quad);
  if (!(c0 < fields::kInf && c_plus < fields::kInf))
    throw std::runtime_error("make_blowup_large_time: ratio unbounded on sample");

  double T = 4.0;
  for (int j = 0; j < terms; ++j) {
    fam.T_seq.push_back(T);
    fam.t_seq.push_back(0.5 * T);
    fam.terms.push_back(make_backward_paraboloid(n, p, gamma, 0.5 * T, T));
    T *= 4.0;
  }

  const double e = half - gamma;
  const double c_minus = (1.0 + std::pow(3.0, e)) * c0;
  const double c_glob = std::max({1.0, std::max(c0, c_plus), c_minus});
  fam.amplitude = std::pow(1.1 * c_glob / fam.K, 1.0 / (lambda - 1.0));
  return fam;
}

}  // namespace fracheat::fields
