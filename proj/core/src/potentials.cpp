#include "fracheat/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracheat/special.hpp"

namespace fracheat::potentials {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kInf = std::numeric_limits<double>::infinity();

using fields::Field;
using fields::FieldNode;
using fields::SpatialStructure;
using quadrature::QuadResult;

double norm_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// spatial convolution of the tau-slice of `node` with Phi_1(., s)
double slice_heat_mass(const FieldNode& node, int n, std::span<const double> x,
                       double dist, double tau, double s,
                       const QuadratureSpec& quad) {
  switch (node.structure()) {
    case SpatialStructure::time_only:
      return node.time_profile(tau);
    case SpatialStructure::radial_indicator: {
      const double h = node.time_profile(tau);
      if (h == 0.0) return 0.0;
      const double rho = node.radius(tau);
      if (!(rho > 0.0)) return 0.0;
      return h * special::heat_ball_mass(n, dist, s, rho);
    }
    case SpatialStructure::piecewise_constant:
      return node.exact_heat_mass(x, tau, s);
    case SpatialStructure::radial_profile: {
      if (node.has_exact_heat_mass()) return node.exact_heat_mass(x, tau, s);
      const double w = quad.spatial_tail_sigmas * std::sqrt(2.0 * s);
      const double extent = node.radial_extent(tau);
      const double lo = std::max(0.0, dist - w);
      const double hi = std::min(dist + w, extent);
      if (!(hi > lo)) return 0.0;
      auto ring = [&](double r) {
        return node.radial_value(r, tau) * special::heat_ball_ring(n, dist, s, r);
      };
      return quadrature::integrate(ring, lo, hi, quad.abs_tol, quad.rel_tol, 256)
          .value;
    }
    case SpatialStructure::sampled: {
      // tensor-product adaptive Simpson over hull x Gaussian window; the
      // truncated Gaussian tail is below spatial_tail_sigmas in each axis
      const int dim = n;
      const double w = quad.spatial_tail_sigmas * std::sqrt(2.0 * s);
      const double inv_norm = std::pow(4.0 * kPi * s, -0.5 * dim);
      std::vector<double> xi(dim, 0.0);
      std::function<double(int)> level = [&](int d) -> double {
        if (d == dim) {
          double e = 0.0;
          for (int k = 0; k < dim; ++k) {
            const double dxk = x[k] - xi[k];
            e += dxk * dxk;
          }
          return node.eval({xi.data(), xi.size()}, tau) *
                 std::exp(-e / (4.0 * s));
        }
        const double lo = x[d] - w;
        const double hi = x[d] + w;
        auto f1 = [&](double v) {
          xi[d] = v;
          return level(d + 1);
        };
        return quadrature::integrate_simpson(f1, lo, hi, {}, quad.abs_tol,
                                             quad.rel_tol * 0.1, 512)
            .value;
      };
      return inv_norm * level(0);
    }
    case SpatialStructure::sum: {
      double acc = 0.0;
      for (const auto& c : *node.children())
        acc += slice_heat_mass(c.node(), n, x, dist, tau, s, quad);
      return acc;
    }
  }
  throw std::logic_error("slice_heat_mass: unhandled structure");
}

struct TimePanelSet {
  std::vector<double> edges;  // kernel-time panel edges, increasing
};

// Kernel-time panels between t - support_end and t - support_begin with cuts
// at every field breakpoint whose kernel image lies inside.
TimePanelSet kernel_time_panels(const FieldNode& node, double t, double lower_origin,
                                double upper_clip) {
  TimePanelSet out;
  const double hi = std::min(
      upper_clip, t - std::max(lower_origin, node.support_time_begin()));
  const double lo = std::max(0.0, t - node.support_time_end());
  if (!(hi > lo)) return out;
  std::vector<double> bps;
  node.time_breakpoints(bps);
  out.edges.push_back(lo);
  for (double bp : bps) {
    const double tk = t - bp;
    if (tk > lo * (1.0 + 1e-15) + 1e-300 && tk < hi * (1.0 - 1e-15))
      out.edges.push_back(tk);
  }
  out.edges.push_back(hi);
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end(),
                              [](double a, double b) {
                                return std::abs(a - b) <=
                                       1e-14 * (std::abs(a) + std::abs(b));
                              }),
                  out.edges.end());
  return out;
}

double field_power_left(const FieldNode& node, double bp) {
  std::vector<double> bps;
  node.time_breakpoints(bps);
  for (double b : bps)
    if (std::abs(b - bp) <= 1e-12 * (1.0 + std::abs(bp)))
      return node.time_power_left(b);
  return 0.0;
}

double field_power_right(const FieldNode& node, double bp) {
  std::vector<double> bps;
  node.time_breakpoints(bps);
  for (double b : bps)
    if (std::abs(b - bp) <= 1e-12 * (1.0 + std::abs(bp)))
      return node.time_power_right(b);
  return 0.0;
}

// Core engine: I = int w(tk) S(x, t - tk, a^2 tk / b) dtk over kernel time,
// w(tk) = (tk/b)^(alpha-1) / (b Gamma(alpha)).  `spatial` toggles the kernel
// spatial factor (false = Riemann-Liouville point evaluation).
double time_convolution(const FieldNode& node, int n, double alpha, double a,
                        double b, std::span<const double> x, double t,
                        double lower_origin, const QuadratureSpec& quad,
                        bool spatial, const char* what) {
  if (node.structure() == SpatialStructure::sum && spatial) {
    double acc = 0.0;
    for (const auto& c : *node.children())
      acc += time_convolution(c.node(), n, alpha, a, b, x, t, lower_origin, quad,
                              spatial, what);
    return acc;
  }

  const TimePanelSet panels = kernel_time_panels(node, t, lower_origin, kInf);
  if (panels.edges.size() < 2) return 0.0;
  const double dist = norm_of(x);
  const double log_coef = -alpha * std::log(b) - special::log_gamma(alpha);
  const double coef = std::exp(log_coef);  // w(tk) = coef * tk^(alpha-1)

  auto slice = [&](double tk) {
    const double tau = t - tk;
    if (!spatial) return node.eval(x, tau);
    return slice_heat_mass(node, n, x, dist, tau, a * a * tk / b, quad);
  };
  auto integrand = [&](double tk) {
    return coef * std::pow(tk, alpha - 1.0) * slice(tk);
  };

  QuadResult total;
  const int nseg = static_cast<int>(panels.edges.size()) - 1;
  for (int i = 0; i < nseg; ++i) {
    const double p0 = panels.edges[i];
    const double p1 = panels.edges[i + 1];
    double sl = 0.0, sr = 0.0;
    if (p0 == panels.edges.front() && p0 <= 1e-300 && alpha != 1.0)
      sl += alpha - 1.0;
    // kernel-time left end p0 maps to the right end of the field interval
    sl += field_power_left(node, t - p0);
    sr += field_power_right(node, t - p1);
    if (sl <= -1.0 || sr <= -1.0) return kInf;  // genuinely divergent integral

    const double panel_abs = quad.abs_tol / nseg;
    QuadResult r;
    if (quad.singularity_mode == quadrature::SingularityMode::gauss_jacobi &&
        p0 <= 1e-300 && alpha != 1.0 && sr == 0.0 && sl == alpha - 1.0) {
      // extract the kernel weight analytically: reflected Gauss-Jacobi rule
      auto g = [&](double tk) { return coef * slice(tk); };
      auto reflected = [&](double v) { return g(p1 - v); };
      r = quadrature::integrate_gauss_jacobi(reflected, 0.0, p1, alpha, panel_abs,
                                             quad.rel_tol);
    } else {
      r = quadrature::integrate_endpoint_power(integrand, p0, p1, sl, sr,
                                               panel_abs, quad.rel_tol,
                                               quad.max_panels / nseg);
    }
    total += r;
  }
  quadrature::require_converged(total, quad, what);
  return total.value;
}

}  // namespace

void SlabRegion::validate() const {
  if (!(a < b)) throw std::invalid_argument("SlabRegion: requires a < b");
}

double spatial_heat_mass(const Field& f, int n, std::span<const double> x,
                         double tau, double s, const QuadratureSpec& quad) {
  if (!(s > 0.0)) throw std::domain_error("spatial_heat_mass: s must be > 0");
  return slice_heat_mass(f.node(), n, x, norm_of(x), tau, s, quad);
}

double j_alpha(const Field& f, int n, double alpha, std::span<const double> x,
               double t, const QuadratureSpec& quad) {
  quad.validate();
  if (!(alpha > 0.0)) throw std::domain_error("j_alpha: alpha must be > 0");
  if (t <= quad.time_origin) return 0.0;
  return time_convolution(f.node(), n, alpha, 1.0, 1.0, x, t, quad.time_origin,
                          quad, true, "j_alpha");
}

double j_scaled(const Field& f, int n, double alpha, double a, double b,
                std::span<const double> x, double t, const QuadratureSpec& quad) {
  quad.validate();
  if (a < 0.0 || b < 0.0) throw std::domain_error("j_scaled: scales must be >= 0");
  if (a == 0.0 && b == 0.0)
    throw std::domain_error("j_scaled: a and b cannot both vanish");
  if (a == 0.0) return riemann_liouville(f, alpha, x, t, quad);
  if (b == 0.0) return riesz(f, n, alpha, x, t, quad);
  if (t <= quad.time_origin) return 0.0;
  return time_convolution(f.node(), n, alpha, a, b, x, t, quad.time_origin, quad,
                          true, "j_scaled");
}

double v_alpha(const Field& f, int n, double alpha, const SlabRegion& slab,
               std::span<const double> x, double t, const QuadratureSpec& quad) {
  quad.validate();
  slab.validate();
  if (!(t > slab.a && t < slab.b))
    throw std::domain_error("v_alpha: t must lie inside the slab");
  // integrate field times in (slab.a, t): kernel time in (0, t - slab.a)
  const auto& node = f.node();
  if (node.structure() == SpatialStructure::sum) {
    double acc = 0.0;
    for (const auto& c : *node.children())
      acc += v_alpha(c, n, alpha, slab, x, t, quad);
    return acc;
  }
  return time_convolution(node, n, alpha, 1.0, 1.0, x, t, slab.a, quad, true,
                          "v_alpha");
}

double riemann_liouville(const Field& f, double alpha, std::span<const double> x,
                         double t, const QuadratureSpec& quad) {
  quad.validate();
  if (!(alpha > 0.0)) throw std::domain_error("riemann_liouville: alpha must be > 0");
  if (t <= quad.time_origin) return 0.0;
  const auto& node = f.node();
  if (node.structure() == SpatialStructure::sum) {
    double acc = 0.0;
    for (const auto& c : *node.children())
      acc += riemann_liouville(c, alpha, x, t, quad);
    return acc;
  }
  return time_convolution(node, 1, alpha, 1.0, 1.0, x, t, quad.time_origin, quad,
                          false, "riemann_liouville");
}

namespace {

// Angular factor of the Riesz kernel integrated over the sphere of radius r
// seen from distance d: int_{|y|=r} |x-y|^(2 alpha - n) dS(y).
double riesz_ring(int n, double alpha, double d, double r,
                  const QuadratureSpec& quad) {
  const double c = 2.0 * alpha - n;
  if (d <= 1e-14 * (r + 1.0)) {
    const double sphere = 2.0 * std::pow(kPi, 0.5 * n) /
                          special::gamma_fn(0.5 * n);
    return sphere * std::pow(r, n - 1.0) * std::pow(r, c);
  }
  if (n == 3) {
    const double pw = 2.0 * alpha - 1.0;
    return 2.0 * kPi * r / (d * pw) *
           (std::pow(d + r, pw) - std::pow(std::abs(d - r), pw));
  }
  // general n >= 2: one-dimensional angular quadrature
  const double surf = 2.0 * std::pow(kPi, 0.5 * (n - 1)) /
                      special::gamma_fn(0.5 * (n - 1));
  auto g = [&](double theta) {
    const double q = d * d + r * r - 2.0 * d * r * std::cos(theta);
    return std::pow(q, 0.5 * c) * std::pow(std::sin(theta), n - 2.0);
  };
  const auto res = quadrature::integrate(g, 0.0, kPi, quad.abs_tol,
                                         quad.rel_tol, 512);
  return surf * std::pow(r, n - 1.0) * res.value;
}

}  // namespace

double riesz(const Field& f, int n, double alpha, std::span<const double> x,
             double t, const QuadratureSpec& quad) {
  quad.validate();
  if (!(alpha > 0.0 && 2.0 * alpha < n))
    throw std::domain_error("riesz: requires 0 < 2*alpha < n");
  const auto& node = f.node();
  switch (node.structure()) {
    case SpatialStructure::sum: {
      double acc = 0.0;
      for (const auto& c : *node.children()) acc += riesz(c, n, alpha, x, t, quad);
      return acc;
    }
    case SpatialStructure::time_only: {
      const double h = node.time_profile(t);
      if (h == 0.0) return 0.0;
      return h > 0.0 ? kInf : -kInf;  // kernel tail is not integrable at infinity
    }
    case SpatialStructure::radial_indicator:
    case SpatialStructure::radial_profile: {
      const double d = norm_of(x);
      const double extent = node.radial_extent(t);
      if (!(extent > 0.0)) return 0.0;
      if (std::isinf(extent))
        throw std::invalid_argument("riesz: field has unbounded radial extent");
      const double gamma_na = special::riesz_constant(n, alpha);
      auto integrand = [&](double r) {
        const double w = node.radial_value(r, t);
        if (w == 0.0) return 0.0;
        return w * riesz_ring(n, alpha, d, r, quad);
      };
      const double power = 2.0 * alpha - 1.0;
      const double sing = (power < 0.0) ? power : 0.0;
      QuadResult total;
      if (d > 0.0 && d < extent) {
        total += quadrature::integrate_endpoint_power(
            integrand, 0.0, d, 0.0, sing, 0.5 * quad.abs_tol, quad.rel_tol,
            quad.max_panels / 2);
        total += quadrature::integrate_endpoint_power(
            integrand, d, extent, sing, 0.0, 0.5 * quad.abs_tol, quad.rel_tol,
            quad.max_panels / 2);
      } else {
        total += quadrature::integrate_endpoint_power(
            integrand, 0.0, extent, 0.0, d <= extent ? sing : 0.0, quad.abs_tol,
            quad.rel_tol, quad.max_panels);
      }
      quadrature::require_converged(total, quad, "riesz");
      return total.value / gamma_na;
    }
    default:
      throw std::invalid_argument(
          "riesz: unsupported field structure (radial catalog fields only)");
  }
}

}  // namespace fracheat::potentials
