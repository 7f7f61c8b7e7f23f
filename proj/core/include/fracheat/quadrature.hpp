#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracheat {

/// Thrown when an adaptive integral could not reach the requested tolerance
/// within its panel budget.  Carries the best value obtained and the achieved
/// error estimate so callers can inspect how far off the result is.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double value, double error_estimate)
      : std::runtime_error(what), value_(value), error_estimate_(error_estimate) {}

  double value() const { return value_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

namespace quadrature {

enum class SingularityMode { substitution, gauss_jacobi };

/// Controls for every numerical integral in the library.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_panels = 4096;
  SingularityMode singularity_mode = SingularityMode::substitution;
  double spatial_tail_sigmas = 8.0;
  double time_origin = 0.0;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;   // accumulated error estimate
  long evaluations = 0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& other) {
    value += other.value;
    error += other.error;
    evaluations += other.evaluations;
    converged = converged && other.converged;
    return *this;
  }
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G7,K15) on [a,b].  Subdivision is a deterministic
/// depth-first bisection, so results are independent of evaluation order.
QuadResult integrate(const Integrand& f, double a, double b, double abs_tol,
                     double rel_tol, int max_panels);

/// Integrates f over [a,b] when f behaves like (x-a)^sl * smooth near a and
/// (b-x)^sr * smooth near b with sl, sr > -1.  Exponent 0 means no special
/// behaviour at that end.  Non-integer exponents are removed by the power
/// substitution u = (x-a)^(1+sl) (resp. mirrored), after which the panel is
/// handed to the adaptive rule.
QuadResult integrate_endpoint_power(const Integrand& f, double a, double b,
                                    double sl, double sr, double abs_tol,
                                    double rel_tol, int max_panels);

/// Gauss-Jacobi rule for the weighted integral
///     int_a^b (b-x)^(beta-1) g(x) dx,  beta > 0.
/// The order is doubled until two successive estimates agree to tolerance.
QuadResult integrate_gauss_jacobi(const Integrand& g, double a, double b,
                                  double beta, double abs_tol, double rel_tol);

/// Gauss-Jacobi nodes/weights on [0,1] for weight (1-u)^(beta-1).
void gauss_jacobi_rule(int m, double beta, std::vector<double>& nodes,
                       std::vector<double>& weights);

/// Adaptive Simpson with forced panel boundaries at `breaks` (used for the
/// tensor quadrature over sampled-field grid hulls).
QuadResult integrate_simpson(const Integrand& f, double a, double b,
                             const std::vector<double>& breaks, double abs_tol,
                             double rel_tol, int max_panels);

/// Raises ToleranceError if the result did not converge to the spec's
/// tolerances.  `what` names the failing integral.
void require_converged(const QuadResult& r, const QuadratureSpec& spec,
                       const std::string& what);

}  // namespace quadrature
}  // namespace fracheat
