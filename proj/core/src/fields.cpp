#include "fracheat/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fracheat/special.hpp"

namespace fracheat::fields {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double norm_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double unit_ball_volume(int n) {
  return std::exp(0.5 * n * std::log(kPi) - special::log_gamma(0.5 * n + 1.0));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// g(t) = (M t^alpha)^(lambda/(1-lambda)) for t > 0
double exact_g(double alpha, double lambda, double t) {
  if (t <= 0.0) return 0.0;
  const double q = lambda / (1.0 - lambda);
  const double M = special::sharp_constant(alpha, lambda);
  return std::exp(q * (std::log(M) + alpha * std::log(t)));
}

// smooth cut running 1 -> 0 over [1, 1+delta]
double psi_delta(double delta, double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 1.0 + delta) return 0.0;
  const double s = (t - 1.0) / delta;
  const double a = std::exp(-1.0 / (1.0 - s));
  const double b = std::exp(-1.0 / s);
  return a / (a + b);
}

}  // namespace

double FieldNode::radial_value(double r, double t) const {
  switch (structure()) {
    case SpatialStructure::time_only:
      return time_profile(t);
    case SpatialStructure::radial_indicator:
      return r < radius(t) ? time_profile(t) : 0.0;
    default:
      throw std::logic_error("radial_value: field is not radial");
  }
}

double FieldNode::time_profile(double) const {
  throw std::logic_error("time_profile: field has no time-only decomposition");
}

double FieldNode::exact_heat_mass(std::span<const double>, double, double) const {
  throw std::logic_error("exact_heat_mass: no closed form for this field");
}

// --- exact solution ---------------------------------------------------------

namespace {

class ExactSolutionNode final : public FieldNode {
 public:
  ExactSolutionNode(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
      throw std::domain_error("make_exact_solution: lambda must be in (0,1)");
    if (!(alpha > 0.0))
      throw std::domain_error("make_exact_solution: alpha must be > 0");
  }

  int dim() const override { return 0; }
  SpatialStructure structure() const override { return SpatialStructure::time_only; }
  double eval(std::span<const double>, double t) const override {
    return exact_g(alpha_, lambda_, t);
  }
  double time_profile(double t) const override { return exact_g(alpha_, lambda_, t); }
  double time_power_right(double bp) const override {
    return bp == 0.0 ? alpha_ * lambda_ / (1.0 - lambda_) : 0.0;
  }
  std::string describe() const override {
    return "exact(alpha=" + fmt(alpha_) + ",lambda=" + fmt(lambda_) + ")";
  }

  double alpha_, lambda_;
};

class MollifiedExactNode final : public FieldNode {
 public:
  MollifiedExactNode(double alpha, double lambda, double delta)
      : alpha_(alpha), lambda_(lambda), delta_(delta) {
    if (!(lambda > 0.0 && lambda < 1.0))
      throw std::domain_error("make_mollified_exact: lambda must be in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
      throw std::domain_error("make_mollified_exact: delta must be in (0,1)");
  }

  int dim() const override { return 0; }
  SpatialStructure structure() const override { return SpatialStructure::time_only; }
  double eval(std::span<const double>, double t) const override { return time_profile(t); }
  double time_profile(double t) const override {
    return psi_delta(delta_, t) * exact_g(alpha_, lambda_, t);
  }
  void time_breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), {0.0, 1.0, 1.0 + delta_});
  }
  double time_power_right(double bp) const override {
    return bp == 0.0 ? alpha_ * lambda_ / (1.0 - lambda_) : 0.0;
  }
  double support_time_end() const override { return 1.0 + delta_; }
  std::string describe() const override {
    return "mollified(alpha=" + fmt(alpha_) + ",lambda=" + fmt(lambda_) +
           ",delta=" + fmt(delta_) + ")";
  }

  double alpha_, lambda_, delta_;
};

class TiltedExactNode final : public FieldNode {
 public:
  TiltedExactNode(int n, double alpha, double lambda, TiltedParams params)
      : n_(n), alpha_(alpha), lambda_(lambda), params_(params) {
    const double q = lambda / (1.0 - lambda);
    const double M = special::sharp_constant(alpha, lambda);
    amp_ = std::pow(params_.K, 1.0 / (1.0 - lambda)) * std::pow(params_.N / M, q);
  }

  int dim() const override { return n_; }
  SpatialStructure structure() const override { return SpatialStructure::radial_profile; }
  double eval(std::span<const double> x, double t) const override {
    return radial_value(norm_of(x), t);
  }
  double radial_value(double r, double t) const override {
    if (t <= 0.0) return 0.0;
    const double er = params_.eps * r;
    const double tilt = std::exp(1.0 - std::sqrt(1.0 + er * er));
    return amp_ * tilt * psi_delta(params_.delta, t) * exact_g(alpha_, lambda_, t);
  }
  void time_breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), {0.0, 1.0, 1.0 + params_.delta});
  }
  double time_power_right(double bp) const override {
    return bp == 0.0 ? alpha_ * lambda_ / (1.0 - lambda_) : 0.0;
  }
  double support_time_end() const override { return 1.0 + params_.delta; }
  double radial_extent(double) const override {
    return (1.0 + 45.0) / params_.eps;  // e^(1-sqrt(1+e^2 r^2)) < 1e-19 beyond
  }
  std::string describe() const override {
    return "tilted(alpha=" + fmt(alpha_) + ",lambda=" + fmt(lambda_) +
           ",N=" + fmt(params_.N) + ",K=" + fmt(params_.K) + ")";
  }

  int n_;
  double alpha_, lambda_, amp_;
  TiltedParams params_;
};

class ParaboloidPowerNode final : public FieldNode {
 public:
  ParaboloidPowerNode(int n, double p, double gamma_exp, bool truncated)
      : n_(n), p_(p), gamma_(gamma_exp), truncated_(truncated) {
    if (!(gamma_exp > 0.0))
      throw std::domain_error("make_paraboloid_power: gamma must be > 0");
    if (!(p >= 1.0)) throw std::domain_error("make_paraboloid_power: p must be >= 1");
    if (n < 1) throw std::domain_error("make_paraboloid_power: n must be >= 1");
    exponent_ = gamma_ - 0.5 * (n_ + 2.0) / p_;
  }

  int dim() const override { return n_; }
  SpatialStructure structure() const override {
    return SpatialStructure::radial_indicator;
  }
  double eval(std::span<const double> x, double t) const override {
    return radial_value(norm_of(x), t);
  }
  double time_profile(double t) const override {
    if (t <= 0.0 || (truncated_ && t >= 1.0)) return 0.0;
    return std::pow(t, exponent_);
  }
  double radius(double t) const override { return t > 0.0 ? std::sqrt(t) : 0.0; }
  double radial_extent(double t) const override { return radius(t); }
  void time_breakpoints(std::vector<double>& out) const override {
    out.push_back(0.0);
    if (truncated_) out.push_back(1.0);
  }
  double time_power_right(double bp) const override {
    return bp == 0.0 ? exponent_ : 0.0;
  }
  double support_time_end() const override { return truncated_ ? 1.0 : kInf; }
  std::string describe() const override {
    std::string s = "paraboloid(n=" + std::to_string(n_) + ",p=" + fmt(p_) +
                    ",gamma=" + fmt(gamma_);
    if (truncated_) s += ",tmax=1";
    return s + ")";
  }

  int n_;
  double p_, gamma_, exponent_;
  bool truncated_;
};

class BackwardParaboloidNode final : public FieldNode {
 public:
  BackwardParaboloidNode(int n, double p, double gamma_exp, double t0, double T)
      : n_(n), p_(p), gamma_(gamma_exp), t0_(t0), T_(T) {
    if (!(t0 >= 0.0 && t0 < T))
      throw std::domain_error("make_backward_paraboloid: requires 0 <= t0 < T");
    if (n < 1) throw std::domain_error("make_backward_paraboloid: n must be >= 1");
    exponent_ = 0.5 * (n_ + 2.0) / p_ - gamma_;  // f = (T-t)^-exponent_
  }

  int dim() const override { return n_; }
  SpatialStructure structure() const override {
    return SpatialStructure::radial_indicator;
  }
  double eval(std::span<const double> x, double t) const override {
    return radial_value(norm_of(x), t);
  }
  double time_profile(double t) const override {
    if (t <= t0_ || t >= T_) return 0.0;
    return std::pow(T_ - t, -exponent_);
  }
  double radius(double t) const override {
    return (t > t0_ && t < T_) ? std::sqrt(T_ - t) : 0.0;
  }
  double radial_extent(double t) const override { return radius(t); }
  void time_breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), {t0_, T_});
  }
  double time_power_left(double bp) const override {
    return bp == T_ ? -exponent_ : 0.0;
  }
  double support_time_begin() const override { return t0_; }
  double support_time_end() const override { return T_; }
  std::string describe() const override {
    return "backward(n=" + std::to_string(n_) + ",p=" + fmt(p_) +
           ",gamma=" + fmt(gamma_) + ",t0=" + fmt(t0_) + ",T=" + fmt(T_) + ")";
  }

  int n_;
  double p_, gamma_, t0_, T_, exponent_;
};

class IndicatorSimilarityNode final : public FieldNode {
 public:
  IndicatorSimilarityNode(int n, double alpha, double lambda, double L)
      : n_(n), alpha_(alpha), lambda_(lambda), L_(L) {}

  int dim() const override { return n_; }
  SpatialStructure structure() const override {
    return SpatialStructure::radial_indicator;
  }
  double eval(std::span<const double> x, double t) const override {
    return radial_value(norm_of(x), t);
  }
  double time_profile(double t) const override {
    return L_ * exact_g(alpha_, lambda_, t);
  }
  double radius(double t) const override { return t > 0.0 ? std::sqrt(t) : 0.0; }
  double radial_extent(double t) const override { return radius(t); }
  double time_power_right(double bp) const override {
    return bp == 0.0 ? alpha_ * lambda_ / (1.0 - lambda_) : 0.0;
  }
  std::string describe() const override {
    return "indsim(n=" + std::to_string(n_) + ",alpha=" + fmt(alpha_) +
           ",lambda=" + fmt(lambda_) + ")";
  }

  int n_;
  double alpha_, lambda_, L_;
};

class SumNode final : public FieldNode {
 public:
  explicit SumNode(std::vector<Field> children) : children_(std::move(children)) {
    if (children_.empty()) throw std::invalid_argument("make_sum: no children");
  }

  int dim() const override {
    int d = 0;
    for (const auto& c : children_) d = std::max(d, c.node().dim());
    return d;
  }
  SpatialStructure structure() const override { return SpatialStructure::sum; }
  double eval(std::span<const double> x, double t) const override {
    double s = 0.0;
    for (const auto& c : children_) s += c.eval(x, t);
    return s;
  }
  void time_breakpoints(std::vector<double>& out) const override {
    for (const auto& c : children_) c.node().time_breakpoints(out);
  }
  double support_time_begin() const override {
    double s = kInf;
    for (const auto& c : children_) s = std::min(s, c.node().support_time_begin());
    return s;
  }
  double support_time_end() const override {
    double s = 0.0;
    for (const auto& c : children_) s = std::max(s, c.node().support_time_end());
    return s;
  }
  double radial_extent(double t) const override {
    double s = 0.0;
    for (const auto& c : children_) s = std::max(s, c.node().radial_extent(t));
    return s;
  }
  const std::vector<Field>* children() const override { return &children_; }
  std::string describe() const override {
    std::string s = "sum(";
    for (std::size_t i = 0; i < children_.size(); ++i) {
      if (i) s += ";";
      s += children_[i].describe();
    }
    return s + ")";
  }

  std::vector<Field> children_;
};

class ScaledNode final : public FieldNode {
 public:
  ScaledNode(Field child, double amplitude)
      : child_(std::move(child)), amp_(amplitude) {}

  int dim() const override { return child_.node().dim(); }
  SpatialStructure structure() const override { return child_.node().structure(); }
  double eval(std::span<const double> x, double t) const override {
    return amp_ * child_.eval(x, t);
  }
  double radial_value(double r, double t) const override {
    return amp_ * child_.node().radial_value(r, t);
  }
  double time_profile(double t) const override {
    return amp_ * child_.node().time_profile(t);
  }
  double radius(double t) const override { return child_.node().radius(t); }
  void time_breakpoints(std::vector<double>& out) const override {
    child_.node().time_breakpoints(out);
  }
  double time_power_right(double bp) const override {
    return child_.node().time_power_right(bp);
  }
  double time_power_left(double bp) const override {
    return child_.node().time_power_left(bp);
  }
  double support_time_begin() const override {
    return child_.node().support_time_begin();
  }
  double support_time_end() const override { return child_.node().support_time_end(); }
  double radial_extent(double t) const override {
    return child_.node().radial_extent(t);
  }
  bool has_exact_heat_mass() const override {
    return child_.node().has_exact_heat_mass();
  }
  double exact_heat_mass(std::span<const double> x, double tau,
                         double s) const override {
    return amp_ * child_.node().exact_heat_mass(x, tau, s);
  }
  std::string describe() const override {
    return "scaled(" + child_.describe() + ",c=" + fmt(amp_) + ")";
  }

  Field child_;
  double amp_;
};

class RescaledNode final : public FieldNode {
 public:
  RescaledNode(Field child, double K, double lambda, double alpha, double T)
      : child_(std::move(child)), K_(K), lambda_(lambda), alpha_(alpha), T_(T) {
    if (lambda == 1.0) throw std::domain_error("rescale: lambda must differ from 1");
    if (!(T > 0.0)) throw std::domain_error("rescale: T must be > 0");
    if (!(K > 0.0)) throw std::domain_error("rescale: K must be > 0");
    amp_ = std::pow(K, 1.0 / (1.0 - lambda)) *
           std::pow(T, alpha * lambda / (1.0 - lambda));
    sqrt_T_ = std::sqrt(T);
  }

  int dim() const override { return child_.node().dim(); }
  SpatialStructure structure() const override { return child_.node().structure(); }
  double eval(std::span<const double> x, double t) const override {
    double buf[8];
    const std::size_t n = x.size();
    if (n > 8) throw std::invalid_argument("rescale: dimension too large");
    for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] / sqrt_T_;
    return amp_ * child_.eval({buf, n}, t / T_);
  }
  double radial_value(double r, double t) const override {
    return amp_ * child_.node().radial_value(r / sqrt_T_, t / T_);
  }
  double time_profile(double t) const override {
    return amp_ * child_.node().time_profile(t / T_);
  }
  double radius(double t) const override {
    return sqrt_T_ * child_.node().radius(t / T_);
  }
  void time_breakpoints(std::vector<double>& out) const override {
    std::vector<double> inner;
    child_.node().time_breakpoints(inner);
    for (double b : inner) out.push_back(T_ * b);
  }
  double time_power_right(double bp) const override {
    return child_.node().time_power_right(bp / T_);
  }
  double time_power_left(double bp) const override {
    return child_.node().time_power_left(bp / T_);
  }
  double support_time_begin() const override {
    return T_ * child_.node().support_time_begin();
  }
  double support_time_end() const override {
    return T_ * child_.node().support_time_end();
  }
  double radial_extent(double t) const override {
    return sqrt_T_ * child_.node().radial_extent(t / T_);
  }
  bool has_exact_heat_mass() const override {
    return child_.node().has_exact_heat_mass();
  }
  double exact_heat_mass(std::span<const double> x, double tau,
                         double s) const override {
    double buf[8];
    const std::size_t n = x.size();
    if (n > 8) throw std::invalid_argument("rescale: dimension too large");
    for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] / sqrt_T_;
    return amp_ * child_.node().exact_heat_mass({buf, n}, tau / T_, s / T_);
  }
  std::string describe() const override {
    return "rescale(" + child_.describe() + ",K=" + fmt(K_) + ",T=" + fmt(T_) +
           ",lambda=" + fmt(lambda_) + ",alpha=" + fmt(alpha_) + ")";
  }

  Field child_;
  double K_, lambda_, alpha_, T_, amp_, sqrt_T_;
};

class SmoothBumpNode final : public FieldNode {
 public:
  explicit SmoothBumpNode(int n) : n_(n) {
    if (n < 1) throw std::domain_error("make_smooth_bump: n must be >= 1");
  }

  static double time_bump(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(4.0 - 1.0 / (t * (1.0 - t)));
  }

  int dim() const override { return n_; }
  SpatialStructure structure() const override { return SpatialStructure::radial_profile; }
  double eval(std::span<const double> x, double t) const override {
    return radial_value(norm_of(x), t);
  }
  double radial_value(double r, double t) const override {
    return std::exp(-r * r) * time_bump(t);
  }
  void time_breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), {0.0, 1.0});
  }
  double support_time_end() const override { return 1.0; }
  double radial_extent(double) const override { return 7.0; }  // e^-49 beyond
  bool has_exact_heat_mass() const override { return true; }
  double exact_heat_mass(std::span<const double> x, double tau,
                         double s) const override {
    // Gaussian-Gaussian convolution: widths add per axis
    const double st = time_bump(tau);
    if (st == 0.0) return 0.0;
    double x2 = 0.0;
    for (double v : x) x2 += v * v;
    const double denom = 1.0 + 4.0 * s;
    return st * std::pow(denom, -0.5 * n_) * std::exp(-x2 / denom);
  }
  std::string describe() const override { return "bump(n=" + std::to_string(n_) + ")"; }

  int n_;
};

class UnitStepNode final : public FieldNode {
 public:
  int dim() const override { return 0; }
  SpatialStructure structure() const override { return SpatialStructure::time_only; }
  double eval(std::span<const double>, double t) const override {
    return t > 0.0 ? 1.0 : 0.0;
  }
  double time_profile(double t) const override { return t > 0.0 ? 1.0 : 0.0; }
  std::string describe() const override { return "step()"; }
};

class ZeroNode final : public FieldNode {
 public:
  explicit ZeroNode(int n) : n_(n) {}
  int dim() const override { return n_; }
  SpatialStructure structure() const override { return SpatialStructure::time_only; }
  double eval(std::span<const double>, double) const override { return 0.0; }
  double time_profile(double) const override { return 0.0; }
  double support_time_end() const override { return 0.0; }
  std::string describe() const override { return "zero()"; }
  int n_;
};

}  // namespace

// --- sampled ----------------------------------------------------------------

std::size_t SampledGrid::index(std::span<const std::size_t> ix,
                               std::size_t it) const {
  std::size_t idx = 0;
  for (int d = 0; d < n; ++d) idx = idx * x_axes[d].size() + ix[d];
  return idx * t_axis.size() + it;
}

void SampledGrid::validate() const {
  if (n < 1 || static_cast<int>(x_axes.size()) != n)
    throw std::invalid_argument("SampledGrid: axis count must equal n");
  std::size_t expect = t_axis.size();
  for (const auto& ax : x_axes) {
    if (ax.size() < 2) throw std::invalid_argument("SampledGrid: axes need >= 2 points");
    if (!std::is_sorted(ax.begin(), ax.end()))
      throw std::invalid_argument("SampledGrid: axes must be increasing");
    expect *= ax.size();
  }
  if (t_axis.size() < 2 || !std::is_sorted(t_axis.begin(), t_axis.end()))
    throw std::invalid_argument("SampledGrid: t axis must be increasing with >= 2 points");
  if (values.size() != expect)
    throw std::invalid_argument("SampledGrid: value count does not match grid");
}

namespace {

class SampledNode final : public FieldNode {
 public:
  explicit SampledNode(SampledGrid grid) : grid_(std::move(grid)) {
    grid_.validate();
  }

  int dim() const override { return grid_.n; }
  SpatialStructure structure() const override { return SpatialStructure::sampled; }

  double eval(std::span<const double> x, double t) const override {
    if (static_cast<int>(x.size()) != grid_.n)
      throw std::invalid_argument("sampled eval: wrong dimension");
    // locate cell per axis; outside hull -> 0 with diagnostic flag
    std::size_t lo[9];
    double w[9];
    for (int d = 0; d < grid_.n; ++d) {
      if (!locate(grid_.x_axes[d], x[d], lo[d], w[d])) {
        out_of_hull_.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
      }
    }
    std::size_t tlo;
    double tw;
    if (!locate(grid_.t_axis, t, tlo, tw)) {
      out_of_hull_.fetch_add(1, std::memory_order_relaxed);
      return 0.0;
    }
    // multilinear over the 2^(n+1) cell corners
    const int corners = 1 << (grid_.n + 1);
    double acc = 0.0;
    std::size_t ix[9];
    for (int c = 0; c < corners; ++c) {
      double weight = 1.0;
      for (int d = 0; d < grid_.n; ++d) {
        const bool hi = (c >> d) & 1;
        ix[d] = lo[d] + (hi ? 1 : 0);
        weight *= hi ? w[d] : (1.0 - w[d]);
      }
      const bool thi = (c >> grid_.n) & 1;
      weight *= thi ? tw : (1.0 - tw);
      acc += weight *
             grid_.values[grid_.index({ix, static_cast<std::size_t>(grid_.n)},
                                      tlo + (thi ? 1 : 0))];
    }
    return acc;
  }

  void time_breakpoints(std::vector<double>& out) const override {
    out.push_back(grid_.t_axis.front());
    out.push_back(grid_.t_axis.back());
  }
  double support_time_begin() const override { return grid_.t_axis.front(); }
  double support_time_end() const override { return grid_.t_axis.back(); }
  double radial_extent(double) const override {
    double r2 = 0.0;
    for (const auto& ax : grid_.x_axes) {
      const double m = std::max(std::abs(ax.front()), std::abs(ax.back()));
      r2 += m * m;
    }
    return std::sqrt(r2);
  }
  std::string describe() const override { return "sampled(<inline>)"; }

  const SampledGrid& grid() const { return grid_; }
  long out_of_hull() const { return out_of_hull_.load(std::memory_order_relaxed); }

 private:
  static bool locate(const std::vector<double>& axis, double v, std::size_t& lo,
                     double& w) {
    if (v < axis.front() || v > axis.back()) return false;
    auto it = std::upper_bound(axis.begin(), axis.end(), v);
    std::size_t hi = std::min<std::size_t>(it - axis.begin(), axis.size() - 1);
    if (hi == 0) hi = 1;
    lo = hi - 1;
    w = (v - axis[lo]) / (axis[hi] - axis[lo]);
    return true;
  }

  SampledGrid grid_;
  mutable std::atomic<long> out_of_hull_{0};
};

class PiecewiseConstantNode final : public FieldNode {
 public:
  PiecewiseConstantNode(std::vector<double> x_edges, std::vector<double> t_edges,
                        std::vector<double> values)
      : x_edges_(std::move(x_edges)),
        t_edges_(std::move(t_edges)),
        values_(std::move(values)) {
    if (x_edges_.size() < 2 || t_edges_.size() < 2)
      throw std::invalid_argument("make_piecewise_constant: need >= 1 cell per axis");
    if (!std::is_sorted(x_edges_.begin(), x_edges_.end()) ||
        !std::is_sorted(t_edges_.begin(), t_edges_.end()))
      throw std::invalid_argument("make_piecewise_constant: edges must be sorted");
    if (values_.size() != (x_edges_.size() - 1) * (t_edges_.size() - 1))
      throw std::invalid_argument("make_piecewise_constant: value count mismatch");
  }

  int dim() const override { return 1; }
  SpatialStructure structure() const override {
    return SpatialStructure::piecewise_constant;
  }
  double eval(std::span<const double> x, double t) const override {
    if (x.size() != 1)
      throw std::invalid_argument("piecewise_constant: 1-D field");
    const long ix = cell(x_edges_, x[0]);
    const long it = cell(t_edges_, t);
    if (ix < 0 || it < 0) return 0.0;
    return values_[ix * (t_edges_.size() - 1) + it];
  }
  void time_breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), t_edges_.begin(), t_edges_.end());
  }
  double support_time_begin() const override { return t_edges_.front(); }
  double support_time_end() const override { return t_edges_.back(); }
  double radial_extent(double) const override {
    return std::max(std::abs(x_edges_.front()), std::abs(x_edges_.back()));
  }
  bool has_exact_heat_mass() const override { return true; }
  double exact_heat_mass(std::span<const double> x, double tau,
                         double s) const override {
    const long it = cell(t_edges_, tau);
    if (it < 0) return 0.0;
    const double scale = std::sqrt(4.0 * s);
    const double xc = x[0];
    double acc = 0.0;
    const std::size_t nt = t_edges_.size() - 1;
    for (std::size_t ix = 0; ix + 1 < x_edges_.size(); ++ix) {
      const double v = values_[ix * nt + it];
      if (v == 0.0) continue;
      const double a = (xc - x_edges_[ix]) / scale;
      const double b = (xc - x_edges_[ix + 1]) / scale;
      acc += v * 0.5 * (std::erf(a) - std::erf(b));
    }
    return acc;
  }
  std::string describe() const override { return "pwc(<inline>)"; }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  double lp_norm(double p) const {
    double acc = 0.0;
    const std::size_t nt = t_edges_.size() - 1;
    for (std::size_t ix = 0; ix + 1 < x_edges_.size(); ++ix)
      for (std::size_t it = 0; it < nt; ++it) {
        const double v = std::abs(values_[ix * nt + it]);
        if (v == 0.0) continue;
        acc += std::pow(v, p) * (x_edges_[ix + 1] - x_edges_[ix]) *
               (t_edges_[it + 1] - t_edges_[it]);
      }
    return std::pow(acc, 1.0 / p);
  }

 private:
  static long cell(const std::vector<double>& edges, double v) {
    if (v < edges.front() || v >= edges.back()) return -1;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    return static_cast<long>(it - edges.begin()) - 1;
  }

  std::vector<double> x_edges_, t_edges_, values_;
};

class TimeSampledNode final : public FieldNode {
 public:
  TimeSampledNode(std::vector<double> t_axis, std::vector<double> values)
      : t_(std::move(t_axis)), v_(std::move(values)) {
    if (t_.size() < 2 || t_.size() != v_.size())
      throw std::invalid_argument("make_time_sampled: need matching axes, >= 2 points");
    if (!std::is_sorted(t_.begin(), t_.end()))
      throw std::invalid_argument("make_time_sampled: t axis must be increasing");
  }

  int dim() const override { return 0; }
  SpatialStructure structure() const override { return SpatialStructure::time_only; }
  double eval(std::span<const double>, double t) const override {
    return time_profile(t);
  }
  double time_profile(double t) const override {
    if (t <= t_.front() || t >= t_.back()) {
      if (t == t_.front()) return v_.front();
      if (t == t_.back()) return v_.back();
      return 0.0;
    }
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t hi = it - t_.begin();
    const std::size_t lo = hi - 1;
    const double w = (t - t_[lo]) / (t_[hi] - t_[lo]);
    return (1.0 - w) * v_[lo] + w * v_[hi];
  }
  void time_breakpoints(std::vector<double>& out) const override {
    out.push_back(t_.front());
    out.push_back(t_.back());
  }
  double support_time_begin() const override { return t_.front(); }
  double support_time_end() const override { return t_.back(); }
  std::string describe() const override { return "tsampled(<inline>)"; }

  const std::vector<double>& axis() const { return t_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> t_, v_;
};

}  // namespace

// --- constructors -----------------------------------------------------------

Field make_exact_solution(double alpha, double lambda) {
  return Field(std::make_shared<ExactSolutionNode>(alpha, lambda));
}

Field make_mollified_exact(double alpha, double lambda, double delta) {
  return Field(std::make_shared<MollifiedExactNode>(alpha, lambda, delta));
}

Field make_tilted_exact(double alpha, double lambda, double N, double K, int n) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("make_tilted_exact: lambda must be in (0,1)");
  const double M = special::sharp_constant(alpha, lambda);
  if (!(N > 0.0 && N < M))
    throw std::domain_error("make_tilted_exact: requires 0 < N < M(alpha,lambda)");
  TiltedParams params;
  params.N = N;
  params.K = K;

  // delta: 1 - C delta^alpha >= sqrt(N/M), C = g(2) / (Gamma(a+1) g(1)^(1/lambda))
  const double g1_pow = std::pow(M, 1.0 / (1.0 - lambda));  // g(1)^(1/lambda)
  const double C = exact_g(alpha, lambda, 2.0) /
                   (special::gamma_fn(alpha + 1.0) * g1_pow);
  const double target = std::sqrt(N / M);
  double delta = std::pow((1.0 - target) / C, 1.0 / alpha);
  delta = std::min(delta, 0.9);
  int guard = 0;
  while (1.0 - C * std::pow(delta, alpha) < target) {
    delta *= 0.5;
    if (++guard > 200)
      throw std::runtime_error("make_tilted_exact: delta search exhausted");
  }
  params.delta = delta;

  // gamma_w: (M/N)^(lambda/2) I(gamma)^lambda > 1 with I(g) = G(n, 0, g/2)
  const double ratio = std::pow(M / N, 0.5 * lambda);
  double gamma_w = 1.0;
  guard = 0;
  while (ratio * std::pow(special::offset_gaussian_mass(n, 0.0, 0.5 * gamma_w),
                          lambda) <= 1.0 + 1e-10) {
    gamma_w += 1.0;
    if (++guard > 1000)
      throw std::runtime_error("make_tilted_exact: gamma search exhausted");
  }
  params.gamma_w = gamma_w;

  // eps: (M/N)^(lambda/2) I^lambda e^(-eps gamma lambda sqrt(2)) >= 1
  const double rho =
      ratio * std::pow(special::offset_gaussian_mass(n, 0.0, 0.5 * gamma_w), lambda);
  params.eps = std::min(0.99, 0.9 * std::log(rho) / (gamma_w * lambda * std::sqrt(2.0)));
  if (!(params.eps > 0.0))
    throw std::runtime_error("make_tilted_exact: eps search exhausted");

  return Field(std::make_shared<TiltedExactNode>(n, alpha, lambda, params));
}

TiltedParams tilted_params(const Field& field) {
  const auto* node = dynamic_cast<const TiltedExactNode*>(&field.node());
  if (!node) throw std::invalid_argument("tilted_params: not a tilted field");
  return node->params_;
}

Field make_paraboloid_power(int n, double p, double gamma_exp, bool truncated) {
  return Field(std::make_shared<ParaboloidPowerNode>(n, p, gamma_exp, truncated));
}

Field make_backward_paraboloid(int n, double p, double gamma_exp, double t0,
                               double T) {
  return Field(std::make_shared<BackwardParaboloidNode>(n, p, gamma_exp, t0, T));
}

namespace {

// C realized by the heat-ball chain: J_a fbar >= C * fbar^(1/lambda) with
// C = G(n,1,1/(2 sqrt 3)) * B(alpha,lambda) / (Gamma(alpha) * M),
// B = int_{1/4}^{3/4} (1-s)^(alpha-1) s^(al/(1-l)) ds.
double indicator_similarity_C(int n, double alpha, double lambda) {
  const double q = alpha * lambda / (1.0 - lambda);
  auto integrand = [&](double s) {
    return std::pow(1.0 - s, alpha - 1.0) * std::pow(s, q);
  };
  const auto B = quadrature::integrate(integrand, 0.25, 0.75, 1e-14, 1e-12, 2048);
  const double ball = special::offset_gaussian_mass(n, 1.0, 1.0 / (2.0 * std::sqrt(3.0)));
  const double M = special::sharp_constant(alpha, lambda);
  return ball * B.value / (special::gamma_fn(alpha) * M);
}

}  // namespace

Field make_indicator_similarity(int n, double alpha, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("make_indicator_similarity: lambda must be in (0,1)");
  const double C = indicator_similarity_C(n, alpha, lambda);
  const double L = std::pow(C, lambda / (1.0 - lambda));
  return Field(std::make_shared<IndicatorSimilarityNode>(n, alpha, lambda, L));
}

double indicator_similarity_N(int n, double alpha, double lambda) {
  return special::sharp_constant(alpha, lambda) *
         indicator_similarity_C(n, alpha, lambda);
}

Field make_sum(std::vector<Field> children) {
  return Field(std::make_shared<SumNode>(std::move(children)));
}

Field make_scaled(Field child, double amplitude) {
  if (const auto* sum = child.node().children()) {
    std::vector<Field> scaled;
    scaled.reserve(sum->size());
    for (const auto& c : *sum) scaled.push_back(make_scaled(c, amplitude));
    return make_sum(std::move(scaled));
  }
  return Field(std::make_shared<ScaledNode>(std::move(child), amplitude));
}

Field rescale(Field child, double K, double lambda, double alpha, double T) {
  if (const auto* sum = child.node().children()) {
    std::vector<Field> parts;
    parts.reserve(sum->size());
    for (const auto& c : *sum) parts.push_back(rescale(c, K, lambda, alpha, T));
    return make_sum(std::move(parts));
  }
  return Field(std::make_shared<RescaledNode>(std::move(child), K, lambda, alpha, T));
}

Field make_smooth_bump(int n) { return Field(std::make_shared<SmoothBumpNode>(n)); }

Field make_unit_step() { return Field(std::make_shared<UnitStepNode>()); }

Field make_zero(int n) { return Field(std::make_shared<ZeroNode>(n)); }

Field make_sampled(SampledGrid grid) {
  return Field(std::make_shared<SampledNode>(std::move(grid)));
}

long sampled_out_of_hull_count(const Field& field) {
  const auto* node = dynamic_cast<const SampledNode*>(&field.node());
  if (!node) throw std::invalid_argument("sampled_out_of_hull_count: not a sampled field");
  return node->out_of_hull();
}

Field make_piecewise_constant(std::vector<double> x_edges,
                              std::vector<double> t_edges,
                              std::vector<double> values) {
  return Field(std::make_shared<PiecewiseConstantNode>(
      std::move(x_edges), std::move(t_edges), std::move(values)));
}

Field make_time_sampled(std::vector<double> t_axis, std::vector<double> values) {
  return Field(std::make_shared<TimeSampledNode>(std::move(t_axis), std::move(values)));
}

Field BlowupFamily::field() const {
  std::vector<Field> parts;
  parts.reserve(terms.size() + 1);
  parts.push_back(make_scaled(base, amplitude));
  for (const auto& f : terms) parts.push_back(make_scaled(f, amplitude));
  return make_sum(std::move(parts));
}

std::optional<PowerLawInfo> power_law_info(const Field& field) {
  const FieldNode* node = &field.node();
  double amp = 1.0;
  while (const auto* scaled = dynamic_cast<const ScaledNode*>(node)) {
    amp *= scaled->amp_;
    node = &scaled->child_.node();
  }
  if (const auto* pp = dynamic_cast<const ParaboloidPowerNode*>(node)) {
    PowerLawInfo info;
    info.kind = PowerLawInfo::Kind::paraboloid;
    info.n = pp->n_;
    info.exponent = -pp->exponent_;  // f = t^exponent_, exponent_ < 0 typical
    info.T = pp->truncated_ ? 1.0 : kInf;
    info.amplitude = amp;
    return info;
  }
  if (const auto* bp = dynamic_cast<const BackwardParaboloidNode*>(node)) {
    PowerLawInfo info;
    info.kind = PowerLawInfo::Kind::backward;
    info.n = bp->n_;
    info.exponent = bp->exponent_;
    info.t0 = bp->t0_;
    info.T = bp->T_;
    info.amplitude = amp;
    return info;
  }
  return std::nullopt;
}

// --- closed-form norms --------------------------------------------------------

namespace {

double power_integral(double b, double lo, double hi) {
  // int_lo^hi s^(b-1) ds for 0 <= lo < hi, handling divergence at 0 and inf
  if (hi <= lo) return 0.0;
  if (std::isinf(hi)) return kInf;
  if (b == 0.0) return lo == 0.0 ? kInf : std::log(hi / lo);
  if (b < 0.0 && lo == 0.0) return kInf;
  const double hv = std::pow(hi, b) / b;
  const double lv = lo == 0.0 ? 0.0 : std::pow(lo, b) / b;
  return hv - lv;
}

}  // namespace

double closed_form_lp_norm(const Field& field, double p, double t_lo,
                           double t_hi) {
  if (!(p >= 1.0)) throw std::domain_error("closed_form_lp_norm: p must be >= 1");
  const FieldNode* node = &field.node();
  double amp = 1.0;
  while (const auto* scaled = dynamic_cast<const ScaledNode*>(node)) {
    amp *= std::abs(scaled->amp_);
    node = &scaled->child_.node();
  }
  if (const auto* pp = dynamic_cast<const ParaboloidPowerNode*>(node)) {
    const double lo = std::max(0.0, t_lo);
    const double hi = std::min(t_hi, pp->truncated_ ? 1.0 : kInf);
    const double b = p * pp->gamma_;
    const double integral = power_integral(b, lo, hi);
    if (std::isinf(integral)) return kInf;
    return amp * std::pow(unit_ball_volume(pp->n_) * integral, 1.0 / p);
  }
  if (const auto* bp = dynamic_cast<const BackwardParaboloidNode*>(node)) {
    // substitute s = T - t; the reduced exponent is gamma*p
    const double lo = std::max(bp->t0_, t_lo);
    const double hi = std::min(bp->T_, t_hi);
    if (hi <= lo) return 0.0;
    const double s_lo = bp->T_ - hi;
    const double s_hi = bp->T_ - lo;
    const double integral = power_integral(p * bp->gamma_, s_lo, s_hi);
    if (std::isinf(integral)) return kInf;
    return amp * std::pow(unit_ball_volume(bp->n_) * integral, 1.0 / p);
  }
  if (const auto* is = dynamic_cast<const IndicatorSimilarityNode*>(node)) {
    const double q = is->lambda_ / (1.0 - is->lambda_);
    const double M = special::sharp_constant(is->alpha_, is->lambda_);
    const double b = 0.5 * is->n_ + is->alpha_ * q * p + 1.0;
    const double lo = std::max(0.0, t_lo);
    const double integral = power_integral(b, lo, t_hi);
    if (std::isinf(integral)) return kInf;
    const double coef = std::pow(is->L_ * std::pow(M, q), p) * unit_ball_volume(is->n_);
    return amp * std::pow(coef * integral, 1.0 / p);
  }
  throw std::invalid_argument(
      "closed_form_lp_norm: supported only for paraboloid, backward and indsim fields");
}

// --- sampling ------------------------------------------------------------------

SampledGrid sample_field(const Field& field, const std::vector<double>& x_axis,
                         const std::vector<double>& t_axis) {
  SampledGrid grid;
  grid.n = 1;
  grid.x_axes = {x_axis};
  grid.t_axis = t_axis;
  grid.values.resize(x_axis.size() * t_axis.size());
  for (std::size_t i = 0; i < x_axis.size(); ++i)
    for (std::size_t j = 0; j < t_axis.size(); ++j)
      grid.values[i * t_axis.size() + j] = field(x_axis[i], t_axis[j]);
  return grid;
}

SampledGrid read_sampled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_sampled_csv: cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("read_sampled_csv: empty file");
  int ncols = 1;
  for (char c : header) ncols += c == ',';
  const int n = ncols - 2;
  if (n < 1) throw std::runtime_error("read_sampled_csv: need columns x1..xn,t,value");

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != ncols)
      throw std::runtime_error("read_sampled_csv: ragged row");
    rows.push_back(std::move(row));
  }

  SampledGrid grid;
  grid.n = n;
  grid.x_axes.resize(n);
  for (int d = 0; d < n; ++d) {
    std::vector<double> ax;
    for (const auto& r : rows) ax.push_back(r[d]);
    std::sort(ax.begin(), ax.end());
    ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
    grid.x_axes[d] = std::move(ax);
  }
  {
    std::vector<double> ax;
    for (const auto& r : rows) ax.push_back(r[n]);
    std::sort(ax.begin(), ax.end());
    ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
    grid.t_axis = std::move(ax);
  }
  std::size_t expect = grid.t_axis.size();
  for (const auto& ax : grid.x_axes) expect *= ax.size();
  if (rows.size() != expect)
    throw std::runtime_error("read_sampled_csv: rows do not form a tensor grid");
  grid.values.assign(expect, 0.0);
  for (const auto& r : rows) {
    std::size_t ix[9];
    for (int d = 0; d < n; ++d) {
      const auto& ax = grid.x_axes[d];
      ix[d] = std::lower_bound(ax.begin(), ax.end(), r[d]) - ax.begin();
    }
    const auto& ta = grid.t_axis;
    const std::size_t it = std::lower_bound(ta.begin(), ta.end(), r[n]) - ta.begin();
    grid.values[grid.index({ix, static_cast<std::size_t>(n)}, it)] = r[n + 1];
  }
  grid.validate();
  return grid;
}

void write_sampled_csv(const SampledGrid& grid, const std::string& path) {
  grid.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_sampled_csv: cannot open " + path);
  for (int d = 0; d < grid.n; ++d) out << "x" << (d + 1) << ",";
  out << "t,value\n";
  std::vector<std::size_t> ix(grid.n, 0);
  const std::size_t nt = grid.t_axis.size();
  bool done = false;
  while (!done) {
    for (std::size_t it = 0; it < nt; ++it) {
      for (int d = 0; d < grid.n; ++d) out << fmt(grid.x_axes[d][ix[d]]) << ",";
      out << fmt(grid.t_axis[it]) << ","
          << fmt(grid.values[grid.index({ix.data(), ix.size()}, it)]) << "\n";
    }
    done = true;
    for (int d = grid.n - 1; d >= 0; --d) {
      if (++ix[d] < grid.x_axes[d].size()) {
        done = false;
        break;
      }
      ix[d] = 0;
    }
  }
}

}  // namespace fracheat::fields
