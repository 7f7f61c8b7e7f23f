#include "fracheat/special.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace fracheat::special {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640562;

// Godfrey's 15-term Lanczos coefficients for g = 607/128.
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5};

double log_gamma_lanczos(double x) {
  // valid for x >= 0.5
  double sum = kLanczos[0];
  for (int k = 1; k < 15; ++k) sum += kLanczos[k] / (x + k - 1.0);
  const double base = x + kLanczosG - 0.5;
  return kLnSqrt2Pi + (x - 0.5) * std::log(base) - base + std::log(sum);
}

// Lower incomplete gamma by series, P(a,x) for x < a+1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Upper incomplete gamma by continued fraction (modified Lentz), x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

// CDF of the noncentral chi-square with k dof and noncentrality nu at x,
// as a Poisson(nu/2)-mixture of central chi-square CDFs.  Summation starts at
// the Poisson mode and expands outward with O(1) term recurrences.
double noncentral_chisq_cdf(double k, double nu, double x) {
  if (x <= 0.0) return 0.0;
  const double mu = 0.5 * nu;
  if (mu < 1e-14) return gamma_p(0.5 * k, 0.5 * x);
  const double xh = 0.5 * x;
  const long j0 = static_cast<long>(mu);
  const double a0 = 0.5 * k + j0;

  const double logw0 = -mu + j0 * std::log(mu) - log_gamma(j0 + 1.0);
  const double w0 = std::exp(logw0);
  const double p0 = gamma_p(a0, xh);
  // T(a) = xh^a e^-xh / Gamma(a+1), the step between successive P values
  const double logt0 = a0 * std::log(xh) - xh - log_gamma(a0 + 1.0);
  const double t0 = std::exp(logt0);

  double total = w0 * p0;
  double weight_seen = w0;

  // upward sweep: j0+1, j0+2, ...
  double w = w0, p = p0, t = t0;
  for (long j = j0 + 1; j < j0 + 4000000; ++j) {
    w *= mu / j;
    p -= t;                       // P(a+1,x) = P(a,x) - T(a)
    t *= xh / (a0 + (j - j0));    // T(a+1) = T(a)*x/(a+1)
    if (p < 0.0) p = 0.0;
    total += w * p;
    weight_seen += w;
    if (w < 1e-18 && j > j0 + 2) break;
  }
  // downward sweep: j0-1, ..., 0
  w = w0;
  p = p0;
  t = t0;
  for (long j = j0; j >= 1; --j) {
    w *= j / mu;
    t *= (a0 - (j0 - j + 1) + 1.0) / xh;  // T(a-1) = T(a)*a/x
    p += t;                               // P(a-1,x) = P(a,x) + T(a-1)
    if (p > 1.0) p = 1.0;
    total += w * p;
    weight_seen += w;
    if (w < 1e-18 && weight_seen > 1.0 - 1e-15) break;
  }
  return std::min(1.0, std::max(0.0, total));
}

// pdf of the noncentral chi-square, same mixture structure.
double noncentral_chisq_pdf(double k, double nu, double x) {
  if (x <= 0.0) return 0.0;
  const double mu = 0.5 * nu;
  const double xh = 0.5 * x;
  auto central_logpdf = [&](double dof) {
    const double ah = 0.5 * dof;
    return (ah - 1.0) * std::log(xh) - xh - log_gamma(ah) - std::log(2.0);
  };
  if (mu < 1e-14) return std::exp(central_logpdf(k));
  const long j0 = static_cast<long>(mu);
  const double logw0 = -mu + j0 * std::log(mu) - log_gamma(j0 + 1.0);
  double w = std::exp(logw0);
  double f = std::exp(central_logpdf(k + 2.0 * j0));
  double total = w * f;
  // pdf ratio between dof k+2(j+1) and k+2j: xh / (k/2 + j)
  double wu = w, fu = f;
  for (long j = j0 + 1; j < j0 + 4000000; ++j) {
    wu *= mu / j;
    fu *= xh / (0.5 * k + (j - 1));
    total += wu * fu;
    if (wu < 1e-18 * (1.0 + total) && j > j0 + 2) break;
  }
  double wd = w, fd = f;
  for (long j = j0; j >= 1; --j) {
    wd *= j / mu;
    fd *= (0.5 * k + (j - 1)) / xh;
    total += wd * fd;
    if (wd < 1e-18 * (1.0 + total)) break;
  }
  return total;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be > 0");
  if (x >= 0.5) return log_gamma_lanczos(x);
  // reflection keeps full accuracy near 0
  return std::log(kPi / std::sin(kPi * x)) - log_gamma_lanczos(1.0 - x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be > 0");
  if (x < 0.0) throw std::domain_error("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: a must be > 0");
  if (x < 0.0) throw std::domain_error("gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

namespace {

// Constants are cheap but reused heavily by the analysis layer; memoize by
// exact parameter tuple behind a mutex.
template <typename Key>
class Memo {
 public:
  template <typename F>
  double get(const Key& key, F&& compute) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const double value = compute();
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, value);
    return value;
  }

 private:
  std::mutex mu_;
  std::map<Key, double> cache_;
};

}  // namespace

double sharp_constant(double alpha, double lambda) {
  if (!(alpha > 0.0)) throw std::domain_error("sharp_constant: alpha must be > 0");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("sharp_constant: lambda must be in (0,1)");
  static Memo<std::pair<double, double>> memo;
  return memo.get({alpha, lambda}, [&] {
    const double e = alpha * lambda / (1.0 - lambda);
    return std::exp(log_gamma(e + 1.0) - log_gamma(alpha + e + 1.0));
  });
}

double mbar_constant(double alpha, double lambda) {
  return gamma_fn(alpha + 1.0) * sharp_constant(alpha, lambda);
}

double riesz_constant(int n, double alpha) {
  if (n < 1) throw std::domain_error("riesz_constant: n must be >= 1");
  if (!(alpha > 0.0 && 2.0 * alpha < n))
    throw std::domain_error("riesz_constant: requires 0 < 2*alpha < n");
  static Memo<std::pair<int, double>> memo;
  return memo.get({n, alpha}, [&] {
    return std::exp(alpha * std::log(4.0) + 0.5 * n * std::log(kPi) +
                    log_gamma(alpha) - log_gamma(0.5 * n - alpha));
  });
}

double offset_gaussian_mass(int n, double c, double R) {
  if (n < 1) throw std::domain_error("offset_gaussian_mass: n must be >= 1");
  if (c < 0.0) throw std::domain_error("offset_gaussian_mass: c must be >= 0");
  if (R <= 0.0) return 0.0;
  if (std::isinf(R)) return 1.0;
  if (n == 1) return 0.5 * (std::erf(R + c) + std::erf(R - c));
  // the event |Z - c e1| < R with density pi^(-n/2) e^{-|z|^2} is, after
  // scaling W = sqrt(2) Z, a noncentral chi-square tail:
  //   G = F_{chi'2(n, 2c^2)}(2 R^2)
  if (c - R >= 9.0) return 0.0;  // mass below e^-81
  if (c == 0.0) return gamma_p(0.5 * n, R * R);
  const double lo = R - c;
  if (lo > 0.0) {
    // complement bound: |Z - c e1| >= R forces |Z| >= R - c
    const double comp = gamma_q(0.5 * n, lo * lo);
    if (comp < 1e-17) return 1.0 - comp;
  }
  return noncentral_chisq_cdf(n, 2.0 * c * c, 2.0 * R * R);
}

double offset_gaussian_ring(int n, double c, double R) {
  if (n < 1) throw std::domain_error("offset_gaussian_ring: n must be >= 1");
  if (R <= 0.0) return 0.0;
  if (n == 1) {
    const double s = std::exp(-(R - c) * (R - c)) + std::exp(-(R + c) * (R + c));
    return s / std::sqrt(kPi);
  }
  if (std::abs(R - c) >= 9.0) return 0.0;  // density below e^-81
  // dG/dR = f_{chi'2(n, 2c^2)}(2R^2) * 4R
  return 4.0 * R * noncentral_chisq_pdf(n, 2.0 * c * c, 2.0 * R * R);
}

double heat_ball_mass(int n, double dist, double s, double R) {
  if (!(s > 0.0)) throw std::domain_error("heat_ball_mass: s must be > 0");
  if (dist < 0.0) throw std::domain_error("heat_ball_mass: dist must be >= 0");
  if (std::isinf(R)) return 1.0;
  const double scale = std::sqrt(4.0 * s);
  return offset_gaussian_mass(n, dist / scale, R / scale);
}

double heat_ball_ring(int n, double dist, double s, double r) {
  if (!(s > 0.0)) throw std::domain_error("heat_ball_ring: s must be > 0");
  if (r <= 0.0) return 0.0;
  const double scale = std::sqrt(4.0 * s);
  if (n == 1) {
    const double a = (r - dist) / scale;
    const double b = (r + dist) / scale;
    return (std::exp(-a * a) + std::exp(-b * b)) / (scale * std::sqrt(kPi));
  }
  if (n == 3) {
    // closed form for the spherical shell mass of an isotropic Gaussian
    const double a = (r - dist) / scale;
    const double b = (r + dist) / scale;
    if (dist < 1e-12 * (r + 1.0)) {
      const double z = r / scale;
      return 4.0 * z * z * std::exp(-z * z) / (scale * std::sqrt(kPi));
    }
    return r / (dist * scale * std::sqrt(kPi)) * (std::exp(-a * a) - std::exp(-b * b));
  }
  return offset_gaussian_ring(n, dist / scale, r / scale) / scale;
}

}  // namespace fracheat::special
