#pragma once

#include <atomic>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracheat/quadrature.hpp"

namespace fracheat::fields {

/// How a field depends on x; the potential operators pick their spatial
/// reduction from this.
enum class SpatialStructure {
  time_only,          // f(x,t) = h(t)
  radial_indicator,   // f(x,t) = h(t) * chi_{|x| < rho(t)}
  radial_profile,     // f(x,t) = w(|x|, t) with w smooth in |x|
  sampled,            // multilinear interpolation on a tensor grid
  piecewise_constant, // cell-constant on a 1-D tensor grid (test fields)
  sum,                // pointwise sum of children
};

class Field;

constexpr double kInf = std::numeric_limits<double>::infinity();

class FieldNode {
 public:
  virtual ~FieldNode() = default;

  /// Spatial dimension the field was built for; 0 means x-independent.
  virtual int dim() const = 0;
  virtual SpatialStructure structure() const = 0;
  virtual double eval(std::span<const double> x, double t) const = 0;
  /// Field-grammar form of this node (round-trips through parse_field).
  virtual std::string describe() const = 0;

  /// Value as a function of r = |x| (radial kinds only).
  virtual double radial_value(double r, double t) const;
  /// h(t) for time_only / radial_indicator nodes.
  virtual double time_profile(double t) const;
  /// Indicator radius rho(t); +inf for time_only.
  virtual double radius(double t) const { return kInf; }

  /// Times where the profile has a jump, kink or power-law endpoint.
  virtual void time_breakpoints(std::vector<double>& out) const { out.push_back(0.0); }
  /// Power sigma with h(t) ~ (t - bp)^sigma as t -> bp+ (0 when regular).
  virtual double time_power_right(double bp) const { (void)bp; return 0.0; }
  /// Power sigma with h(t) ~ (bp - t)^sigma as t -> bp- (0 when regular).
  virtual double time_power_left(double bp) const { (void)bp; return 0.0; }
  /// The field vanishes outside [support_time_begin, support_time_end].
  virtual double support_time_begin() const { return 0.0; }
  virtual double support_time_end() const { return kInf; }
  /// Radius beyond which the field vanishes or is negligible at time t.
  virtual double radial_extent(double t) const { (void)t; return kInf; }

  virtual const std::vector<Field>* children() const { return nullptr; }

  /// Exact spatial convolution with the heat kernel at scale s, i.e.
  /// int f(xi, tau) Phi_1(x - xi, s) dxi, for nodes that know a closed form.
  virtual bool has_exact_heat_mass() const { return false; }
  virtual double exact_heat_mass(std::span<const double> x, double tau,
                                 double s) const;
};

/// Value-semantic handle to an immutable field.
class Field {
 public:
  explicit Field(std::shared_ptr<const FieldNode> node) : node_(std::move(node)) {}

  double eval(std::span<const double> x, double t) const { return node_->eval(x, t); }
  double operator()(double x1, double t) const { return node_->eval({&x1, 1}, t); }
  const FieldNode& node() const { return *node_; }
  std::string describe() const { return node_->describe(); }

 private:
  std::shared_ptr<const FieldNode> node_;
};

// --- catalog constructors -------------------------------------------------

/// g(t) = (M t^alpha)^(lambda/(1-lambda)) chi_{t>0}, the self-similar fixed
/// point of f -> (J_alpha f)^lambda.  Requires lambda in (0,1).
Field make_exact_solution(double alpha, double lambda);

/// g_delta(t) = psi_delta(t) g(t) with psi the smooth cut running 1 -> 0 over
/// [1, 1+delta].
Field make_mollified_exact(double alpha, double lambda, double delta);

/// Parameters realized by the tilted construction (selected automatically).
struct TiltedParams {
  double delta;
  double gamma_w;
  double eps;
  double N;
  double K;
};

/// f(x,t) = K^(1/(1-l)) phi(eps x) (N/M)^(l/(1-l)) g_delta(t) with
/// phi(x) = exp(-(sqrt(1+|x|^2)-1)); delta, gamma_w, eps are chosen so that
/// 0 <= f <= K (J_alpha f)^lambda.  Requires 0 < N < M(alpha, lambda).
Field make_tilted_exact(double alpha, double lambda, double N, double K,
                        int n = 1);
TiltedParams tilted_params(const Field& field);

/// f0(x,t) = t^(gamma - (n+2)/(2p)) chi_{|x|^2 < t}, optionally cut to t < 1.
Field make_paraboloid_power(int n, double p, double gamma_exp,
                            bool truncated = false);

/// f(x,t) = (T-t)^(gamma - (n+2)/(2p)) chi_{t0 < t < T, |x| < sqrt(T-t)}.
Field make_backward_paraboloid(int n, double p, double gamma_exp, double t0,
                               double T);

/// L * g(t) chi_{|x|^2 < t} with L chosen from the heat-ball lower bound so
/// that 0 <= f <= (J_alpha f)^lambda.
Field make_indicator_similarity(int n, double alpha, double lambda);
/// The N realized by make_indicator_similarity in f >= (N t^alpha)^(l/(1-l)).
double indicator_similarity_N(int n, double alpha, double lambda);

Field make_sum(std::vector<Field> children);
Field make_scaled(Field child, double amplitude);

/// Remark-style rescaling: f(x,t) = K^(1/(1-l)) T^(al/(1-l)) child(x/sqrt(T), t/T).
/// Maps subsolutions with constant 1 to subsolutions with constant K.
Field rescale(Field child, double K, double lambda, double alpha, double T);

/// exp(-|x|^2) s(t) with s a C^inf bump on (0,1), peak value 1 at t = 1/2.
Field make_smooth_bump(int n);
/// chi_{t>0} (x-independent test stub).
Field make_unit_step();
Field make_zero(int n);

// --- sampled fields -------------------------------------------------------

struct SampledGrid {
  int n = 1;
  std::vector<std::vector<double>> x_axes;  // n strictly increasing axes
  std::vector<double> t_axis;               // strictly increasing
  std::vector<double> values;               // x1-major, t fastest

  std::size_t index(std::span<const std::size_t> ix, std::size_t it) const;
  void validate() const;
};

Field make_sampled(SampledGrid grid);
/// Number of evaluations that fell outside the grid hull (diagnostic).
long sampled_out_of_hull_count(const Field& field);

SampledGrid read_sampled_csv(const std::string& path);
void write_sampled_csv(const SampledGrid& grid, const std::string& path);

/// Samples any field onto a tensor grid (used to freeze J_alpha f as data).
SampledGrid sample_field(const Field& field, const std::vector<double>& x_axis,
                         const std::vector<double>& t_axis);

// --- piecewise-constant test fields (n = 1) -------------------------------

Field make_piecewise_constant(std::vector<double> x_edges,
                              std::vector<double> t_edges,
                              std::vector<double> values);  // values[ix*nt + it]

/// x-independent field given by linear interpolation of (t_axis, values);
/// zero outside the axis range.  Used by the Picard iteration.
Field make_time_sampled(std::vector<double> t_axis, std::vector<double> values);

// --- blow-up families ------------------------------------------------------

struct BlowupFamily {
  Field base = make_zero(1);  // f_0
  std::vector<Field> terms;   // f_j
  std::vector<double> T_seq;  // T_j
  std::vector<double> t_seq;  // t_j = T_j / 2
  bool small_time = true;
  double q = 0.0;             // norm exponent whose box norms blow up
  double amplitude = 1.0;     // final scaling making the family a K-subsolution
  int n = 1;
  double p = 1.0, lambda = 2.0, alpha = 0.5, K = 1.0;

  /// amplitude * (f_0 + sum_j f_j)
  Field field() const;
};

/// Small-time blow-up family: T_j+1 = T_j/4, T_j < 1/2, greedy selection of
/// T_1 until the proof's sup conditions hold on a 64x64 sample of each set.
/// Requires (lambda, alpha) in region C for (n, p) and
/// alpha < (n+2)/(2q) (1 - 1/lambda).
BlowupFamily make_blowup_small_time(int n, double p, double lambda, double alpha,
                                    double q, int terms,
                                    const quadrature::QuadratureSpec& quad = {});

/// Large-time family with gamma = (n+2)/(2p) - lambda*alpha/(lambda-1) and
/// T_j+1 = 4 T_j, T_1 > 2.  The blow-up exponent is
/// q0 = (n+2)/(2 alpha) (1 - 1/lambda).
BlowupFamily make_blowup_large_time(int n, double p, double lambda, double alpha,
                                    int terms,
                                    const quadrature::QuadratureSpec& quad = {});

// --- structural metadata ------------------------------------------------------

/// Power-law data used by box-norm divergence certificates.
struct PowerLawInfo {
  enum class Kind { paraboloid, backward };
  Kind kind;
  int n;
  double exponent;  // f ~ t^-exponent (t -> 0+) resp. (T-t)^-exponent (t -> T-)
  double t0 = 0.0;  // backward support start
  double T = kInf;  // backward blow-up time / paraboloid truncation
  double amplitude = 1.0;
};

/// Returns the power-law structure of a (possibly amplitude-scaled)
/// ParaboloidPower or BackwardParaboloid field; nullopt otherwise.
std::optional<PowerLawInfo> power_law_info(const Field& field);

// --- closed-form norms ------------------------------------------------------

/// Exact L^p norm over R^n x (t_lo, t_hi) for ParaboloidPower,
/// BackwardParaboloid and IndicatorSimilarity (one-dimensional reduced
/// integral); +inf when the reduced exponent is <= 0.
double closed_form_lp_norm(const Field& field, double p, double t_lo,
                           double t_hi);

// --- grammar ----------------------------------------------------------------

/// Parses the plain-text field grammar, e.g. "exact(alpha=1,lambda=0.5)",
/// "sum(F1;F2)", "rescale(F,K=2,T=4)", "sampled(path.csv)".
Field parse_field(const std::string& text);

/// Parses "blowup_small(...)" / "blowup_large(...)" into the full family
/// (T_j sequence and certificates included); nullopt for other field specs.
std::optional<BlowupFamily> parse_blowup_family(const std::string& text);

}  // namespace fracheat::fields
