#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracheat/fields.hpp"
#include "fracheat/potentials.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat::analysis {

enum class RegionLabel { A, B, C, D };

const char* to_string(RegionLabel label);

/// Exact rational for boundary-safe region classification.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

/// Critical curve alpha = (n+2)/(2p) (1 - 1/lambda).
double region_threshold(double lambda, double p, int n);

/// Region of (lambda, alpha) for given (p, n):
///   B: 0 < lambda < 1; A: lambda >= 1 and alpha above the curve;
///   C: lambda > 1 and alpha below; D: lambda > 1 and alpha on the curve
/// (detected within a 1e-12 relative band for floating inputs).
RegionLabel classify(double lambda, double alpha, double p, int n);

/// Exact-rational classification (the D curve is hit exactly).
RegionLabel classify_exact(const Rational& lambda, const Rational& alpha,
                           const Rational& p, int n);

/// Optimal sup bounds of the subcritical regime on R^n x (0, b):
///   bound_f  = K^(1/(1-l)) (M b^a)^(l/(1-l)),
///   bound_jf = K^(1/(1-l)) (M b^a)^(1/(1-l)).
struct SupBounds {
  double bound_f;
  double bound_jf;
};
SupBounds sup_bounds(double K, double lambda, double alpha, double b);

/// gamma_1 = 1, gamma_{j+1} = (Mbar gamma_j)^lambda; limit Mbar^(l/(1-l)).
struct GammaSequence {
  std::vector<double> values;
  double limit;
};
GammaSequence gamma_sequence(double alpha, double lambda, int j_max);

// --- reports -----------------------------------------------------------------

struct ReportEntry {
  std::string check;
  std::string param_json;
  double measured = 0.0;
  double reference = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<ReportEntry> entries;

  /// pass iff |measured - reference| <= tol * max(1, |reference|)
  void add_close(std::string check, std::string params, double measured,
                 double reference, double tol);
  /// pass iff measured <= reference + tol * max(1, |reference|)
  void add_upper(std::string check, std::string params, double measured,
                 double reference, double tol);
  /// explicitly judged entry
  void add_flag(std::string check, std::string params, double measured,
                double reference, double tol, bool pass);

  bool all_pass() const;
  std::size_t failures() const;
  /// CSV with header check,param_json,measured,reference,tol,pass
  void write_csv(std::ostream& out) const;
};

/// Small JSON object builder for report parameter columns.
std::string json_params(
    std::initializer_list<std::pair<const char*, double>> kv);

// --- checks -------------------------------------------------------------------

struct SpaceTimePoint {
  std::vector<double> x;
  double t;
};

/// Checks 0 <= f and f <= K (J_alpha f)^lambda + tol at each sample point.
Report verify_subsolution(const fields::Field& f, int n, double K, double lambda,
                          double alpha, std::span<const SpaceTimePoint> points,
                          const quadrature::QuadratureSpec& quad = {},
                          double tol = 1e-6);

/// Parabolic box R = {|x| < sqrt(t_j), t_j < t < 2 t_j}.
struct ParabolicBox {
  double t_j;
};

struct BoxNorm {
  double value = 0.0;
  bool infinite = false;
  std::string certificate;  // analytic exponent test when infinite
  double error = 0.0;
};

/// L^q norm over the box; +infinity is certified analytically when a
/// backward-paraboloid component has exponent >= (n+2)/(2q) blowing up inside
/// the box (q = infinity uses the sup exponent test instead).
BoxNorm box_norm(const fields::Field& f, int n, double q, const ParabolicBox& box,
                 const quadrature::QuadratureSpec& quad = {});
BoxNorm box_norm(const fields::Field& f, int n, double q,
                 const potentials::SlabRegion& slab, double x_extent,
                 const quadrature::QuadratureSpec& quad = {});

enum class LimitMode { time_limit, space_limit };

/// For each parameter value (a or b) computes the max deviation from the
/// Riemann-Liouville resp. Riesz limit operator over the sample points and
/// reports the scan with a monotone-decrease verdict.
Report limit_scan(const fields::Field& f, int n, double alpha, LimitMode mode,
                  std::span<const double> params,
                  std::span<const SpaceTimePoint> points,
                  const quadrature::QuadratureSpec& quad = {},
                  double final_tol = 1e-3);

// --- Picard iteration ----------------------------------------------------------

struct PicardGrid {
  double x_max = 4.0;
  int nx = 17;        // spatial samples in [-x_max, x_max]
  double t_max = 1.0;
  int nt = 64;        // time samples in (0, t_max]
};

struct PicardResult {
  std::vector<double> sup_values;  // grid sup of each iterate
  fields::Field final_field;
  bool diverged = false;
};

/// Iterates f_{k+1} = K (J_alpha f_k)^lambda on the grid.  x-independent
/// initial fields iterate exactly on the time axis (piecewise-linear closed
/// form); general fields go through the sampled-field machinery.
PicardResult picard(const fields::Field& f0, int n, double K, double lambda,
                    double alpha, const PicardGrid& grid, int iters,
                    const quadrature::QuadratureSpec& quad = {});

}  // namespace fracheat::analysis
