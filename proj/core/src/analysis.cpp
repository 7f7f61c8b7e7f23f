#include "fracheat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fracheat/special.hpp"

namespace fracheat::analysis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::A: return "A";
    case RegionLabel::B: return "B";
    case RegionLabel::C: return "C";
    case RegionLabel::D: return "D";
  }
  return "?";
}

double region_threshold(double lambda, double p, int n) {
  return 0.5 * (n + 2.0) / p * (1.0 - 1.0 / lambda);
}

RegionLabel classify(double lambda, double alpha, double p, int n) {
  if (!(lambda > 0.0) || !(alpha > 0.0))
    throw std::domain_error("classify: lambda and alpha must be > 0");
  if (!(p >= 1.0) || n < 1)
    throw std::domain_error("classify: requires p >= 1 and n >= 1");
  if (lambda < 1.0) return RegionLabel::B;
  const double threshold = region_threshold(lambda, p, n);
  if (lambda > 1.0) {
    const double band = 1e-12 * std::max(1.0, std::abs(threshold));
    if (std::abs(alpha - threshold) <= band) return RegionLabel::D;
  }
  return alpha > threshold ? RegionLabel::A : RegionLabel::C;
}

namespace {

// sign of a/b - c/d using 128-bit cross multiplication
int compare_rational(std::int64_t a, std::int64_t b, std::int64_t c,
                     std::int64_t d) {
  if (b < 0) { a = -a; b = -b; }
  if (d < 0) { c = -c; d = -d; }
  const __int128 lhs = static_cast<__int128>(a) * d;
  const __int128 rhs = static_cast<__int128>(c) * b;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

}  // namespace

RegionLabel classify_exact(const Rational& lambda, const Rational& alpha,
                           const Rational& p, int n) {
  if (lambda.den == 0 || alpha.den == 0 || p.den == 0)
    throw std::domain_error("classify_exact: zero denominator");
  if (compare_rational(lambda.num, lambda.den, 0, 1) <= 0 ||
      compare_rational(alpha.num, alpha.den, 0, 1) <= 0)
    throw std::domain_error("classify_exact: lambda and alpha must be > 0");
  if (compare_rational(lambda.num, lambda.den, 1, 1) < 0) return RegionLabel::B;
  // threshold = (n+2)(lambda-1) / (2 p lambda); alpha vs threshold:
  // alpha.num/alpha.den  ?  (n+2)(lnum - lden) * pden / (2 pnum lnum)
  const __int128 tn = static_cast<__int128>(n + 2) * (lambda.num - lambda.den) *
                      p.den;
  const __int128 td = static_cast<__int128>(2) * p.num * lambda.num;
  const __int128 lhs = static_cast<__int128>(alpha.num) * td;
  const __int128 rhs = tn * alpha.den;
  const bool lambda_gt_1 = compare_rational(lambda.num, lambda.den, 1, 1) > 0;
  if (lhs == rhs && lambda_gt_1) return RegionLabel::D;
  return lhs > rhs ? RegionLabel::A : RegionLabel::C;
}

SupBounds sup_bounds(double K, double lambda, double alpha, double b) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("sup_bounds: lambda must be in (0,1)");
  if (!(b > 0.0)) throw std::domain_error("sup_bounds: b must be > 0");
  const double M = special::sharp_constant(alpha, lambda);
  const double base = M * std::pow(b, alpha);
  const double kf = std::pow(K, 1.0 / (1.0 - lambda));
  return {kf * std::pow(base, lambda / (1.0 - lambda)),
          kf * std::pow(base, 1.0 / (1.0 - lambda))};
}

GammaSequence gamma_sequence(double alpha, double lambda, int j_max) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("gamma_sequence: lambda must be in (0,1)");
  if (j_max < 1) throw std::invalid_argument("gamma_sequence: j_max must be >= 1");
  const double mbar = special::mbar_constant(alpha, lambda);
  GammaSequence seq;
  seq.values.reserve(j_max);
  double g = 1.0;
  seq.values.push_back(g);
  for (int j = 1; j < j_max; ++j) {
    g = std::pow(mbar * g, lambda);
    seq.values.push_back(g);
  }
  seq.limit = std::pow(mbar, lambda / (1.0 - lambda));
  return seq;
}

// --- reports --------------------------------------------------------------------

void Report::add_close(std::string check, std::string params, double measured,
                       double reference, double tol) {
  const bool ok = std::isfinite(measured) &&
                  std::abs(measured - reference) <=
                      tol * std::max(1.0, std::abs(reference));
  entries.push_back({std::move(check), std::move(params), measured, reference,
                     tol, ok});
}

void Report::add_upper(std::string check, std::string params, double measured,
                       double reference, double tol) {
  const bool ok = std::isfinite(measured) &&
                  measured <= reference + tol * std::max(1.0, std::abs(reference));
  entries.push_back({std::move(check), std::move(params), measured, reference,
                     tol, ok});
}

void Report::add_flag(std::string check, std::string params, double measured,
                      double reference, double tol, bool pass) {
  entries.push_back({std::move(check), std::move(params), measured, reference,
                     tol, pass});
}

bool Report::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ReportEntry& e) { return e.pass; });
}

std::size_t Report::failures() const {
  return std::count_if(entries.begin(), entries.end(),
                       [](const ReportEntry& e) { return !e.pass; });
}

void Report::write_csv(std::ostream& out) const {
  out << "check,param_json,measured,reference,tol,pass\n";
  for (const auto& e : entries) {
    out << e.check << ",\"" << e.param_json << "\"," << fmt(e.measured) << ","
        << fmt(e.reference) << "," << fmt(e.tol) << "," << (e.pass ? 1 : 0)
        << "\n";
  }
}

std::string json_params(
    std::initializer_list<std::pair<const char*, double>> kv) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : kv) {
    if (!first) out += ",";
    first = false;
    out += std::string("\"") + key + "\":" + fmt(value);
  }
  return out + "}";
}

// --- subsolution verification ------------------------------------------------------

Report verify_subsolution(const fields::Field& f, int n, double K, double lambda,
                          double alpha, std::span<const SpaceTimePoint> points,
                          const quadrature::QuadratureSpec& quad, double tol) {
  Report report;
  double worst = -kInf;
  for (const auto& pt : points) {
    const double fv = f.eval({pt.x.data(), pt.x.size()}, pt.t);
    const double jv =
        potentials::j_alpha(f, n, alpha, {pt.x.data(), pt.x.size()}, pt.t, quad);
    const double rhs = K * std::pow(jv, lambda);
    const double scale = std::max({1e-30, fv, rhs});
    const double violation = (fv - rhs) / scale;
    worst = std::max(worst, violation);
    report.add_flag("subsolution",
                    json_params({{"x1", pt.x.empty() ? 0.0 : pt.x[0]},
                                 {"t", pt.t},
                                 {"K", K},
                                 {"lambda", lambda},
                                 {"alpha", alpha}}),
                    violation, 0.0, tol, fv >= 0.0 && violation <= tol);
  }
  report.add_flag("subsolution-max-violation",
                  json_params({{"K", K}, {"lambda", lambda}, {"alpha", alpha}}),
                  worst, 0.0, tol, worst <= tol);
  return report;
}

// --- box norms ---------------------------------------------------------------------

namespace {

// analytic divergence certificate: a backward component blowing up inside the
// time window with exponent >= (n+2)/(2q) (or > 0 for the sup norm)
std::optional<std::string> divergence_certificate(const fields::Field& f,
                                                  double q, double t_lo,
                                                  double t_hi) {
  if (const auto* children = f.node().children()) {
    for (const auto& c : *children)
      if (auto cert = divergence_certificate(c, q, t_lo, t_hi)) return cert;
    return std::nullopt;
  }
  const auto info = fields::power_law_info(f);
  if (!info || info->amplitude == 0.0) return std::nullopt;
  if (info->kind == fields::PowerLawInfo::Kind::backward) {
    if (!(info->T > t_lo && info->T <= t_hi)) return std::nullopt;
    const double critical = std::isinf(q) ? 0.0 : 0.5 * (info->n + 2.0) / q;
    if (info->exponent >= critical && info->exponent > 0.0) {
      return "exponent test: (T-t)^-e with e=" + fmt(info->exponent) +
             " >= (n+2)/(2q)=" + fmt(critical) + " at T=" + fmt(info->T);
    }
  } else {
    // paraboloid: singular at t -> 0+
    if (!(t_lo < 0.0 || t_lo == 0.0) || !(t_hi > 0.0)) return std::nullopt;
    const double critical = std::isinf(q) ? 0.0 : 0.5 * (info->n + 2.0) / q;
    if (info->exponent >= critical && info->exponent > 0.0) {
      return "exponent test: t^-e with e=" + fmt(info->exponent) +
             " >= (n+2)/(2q)=" + fmt(critical) + " at t=0";
    }
  }
  return std::nullopt;
}

BoxNorm box_norm_impl(const fields::Field& f, int n, double q, double t_lo,
                      double t_hi, double x_extent,
                      const quadrature::QuadratureSpec& quad) {
  if (!(q >= 1.0)) throw std::domain_error("box_norm: q must be >= 1");
  BoxNorm out;
  if (auto cert = divergence_certificate(f, q, t_lo, t_hi)) {
    out.infinite = true;
    out.value = kInf;
    out.certificate = *cert;
    return out;
  }
  if (n != 1)
    throw std::invalid_argument("box_norm: numeric path implemented for n = 1");

  if (std::isinf(q)) {
    // grid sup with one Richardson-style refinement
    double sup = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      const int nx = pass == 0 ? 64 : 128;
      const int nt = pass == 0 ? 64 : 128;
      double s = 0.0;
      for (int i = 0; i <= nx; ++i) {
        const double x = -x_extent + 2.0 * x_extent * i / nx;
        for (int j = 0; j < nt; ++j) {
          const double t = t_lo + (j + 0.5) / nt * (t_hi - t_lo);
          s = std::max(s, std::abs(f(x, t)));
        }
      }
      out.error = std::abs(s - sup);
      sup = std::max(sup, s);
    }
    out.value = sup;
    return out;
  }

  std::vector<double> tbreaks;
  f.node().time_breakpoints(tbreaks);
  auto outer = [&](double t) {
    const double rad = std::min(x_extent, f.node().radial_extent(t));
    if (!(rad > 0.0)) return 0.0;
    auto inner = [&](double x) { return std::pow(std::abs(f(x, t)), q); };
    return quadrature::integrate(inner, -rad, rad, quad.abs_tol,
                                 quad.rel_tol * 0.3, 512)
        .value;
  };
  quadrature::QuadResult total;
  std::vector<double> edges{t_lo, t_hi};
  for (double b : tbreaks)
    if (b > t_lo && b < t_hi) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += quadrature::integrate(outer, edges[i], edges[i + 1],
                                   quad.abs_tol / (edges.size() - 1),
                                   quad.rel_tol, quad.max_panels / 8);
  }
  quadrature::require_converged(total, quad, "box_norm");
  out.value = std::pow(total.value, 1.0 / q);
  out.error = total.error;
  return out;
}

}  // namespace

BoxNorm box_norm(const fields::Field& f, int n, double q, const ParabolicBox& box,
                 const quadrature::QuadratureSpec& quad) {
  if (!(box.t_j > 0.0)) throw std::domain_error("box_norm: t_j must be > 0");
  return box_norm_impl(f, n, q, box.t_j, 2.0 * box.t_j, std::sqrt(box.t_j), quad);
}

BoxNorm box_norm(const fields::Field& f, int n, double q,
                 const potentials::SlabRegion& slab, double x_extent,
                 const quadrature::QuadratureSpec& quad) {
  slab.validate();
  return box_norm_impl(f, n, q, slab.a, slab.b, x_extent, quad);
}

// --- limit scans ---------------------------------------------------------------------

Report limit_scan(const fields::Field& f, int n, double alpha, LimitMode mode,
                  std::span<const double> params,
                  std::span<const SpaceTimePoint> points,
                  const quadrature::QuadratureSpec& quad, double final_tol) {
  if (mode == LimitMode::space_limit && !(2.0 * alpha < n))
    throw std::domain_error("limit_scan: space limit requires 0 < 2*alpha < n");
  Report report;
  std::vector<double> errors;
  errors.reserve(params.size());
  for (double parameter : params) {
    double err = 0.0;
    for (const auto& pt : points) {
      std::span<const double> x{pt.x.data(), pt.x.size()};
      double approx, limit;
      if (mode == LimitMode::time_limit) {
        approx = potentials::j_scaled(f, n, alpha, parameter, 1.0, x, pt.t, quad);
        limit = potentials::riemann_liouville(f, alpha, x, pt.t, quad);
      } else {
        approx = potentials::j_scaled(f, n, alpha, 1.0, parameter, x, pt.t, quad);
        limit = potentials::riesz(f, n, alpha, x, pt.t, quad);
      }
      err = std::max(err, std::abs(approx - limit));
    }
    errors.push_back(err);
    report.add_flag(mode == LimitMode::time_limit ? "limit-time" : "limit-space",
                    json_params({{"param", parameter}, {"alpha", alpha}}), err,
                    0.0, final_tol, true);
  }
  int violations = 0;
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (!(errors[i] < errors[i - 1])) ++violations;
  report.add_flag("limit-monotone-decrease", json_params({{"alpha", alpha}}),
                  violations, 0.0, 0.0, violations == 0);
  report.add_flag("limit-final-error", json_params({{"alpha", alpha}}),
                  errors.empty() ? kInf : errors.back(), 0.0, final_tol,
                  !errors.empty() && errors.back() <= final_tol);
  return report;
}

// --- Picard ------------------------------------------------------------------------

namespace {

// exact Riemann-Liouville integral of a piecewise-linear profile:
// int_0^t (t-tau)^(a-1)/Gamma(a) h(tau) dtau summed per segment
double rl_piecewise_linear(const std::vector<double>& ts,
                           const std::vector<double>& vs, double alpha, double t) {
  const double ga1 = special::gamma_fn(alpha + 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double a = ts[i], b = std::min(ts[i + 1], t);
    if (!(b > a)) break;
    const double c1 = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]);
    const double c0 = vs[i] - c1 * ts[i];
    // int_a^b (t-tau)^(alpha-1) (c0 + c1 tau) dtau with s = t - tau:
    const double s1 = t - b, s2 = t - a;
    const double p1 = std::pow(s2, alpha) - std::pow(s1, alpha);
    const double p2 = std::pow(s2, alpha + 1.0) - std::pow(s1, alpha + 1.0);
    acc += (c0 + c1 * t) * p1 / alpha - c1 * p2 / (alpha + 1.0);
  }
  return acc * alpha / ga1;  // alpha/Gamma(alpha+1) = 1/Gamma(alpha)
}

}  // namespace

PicardResult picard(const fields::Field& f0, int n, double K, double lambda,
                    double alpha, const PicardGrid& grid, int iters,
                    const quadrature::QuadratureSpec& quad) {
  if (iters < 1) throw std::invalid_argument("picard: iters must be >= 1");
  constexpr double kOverflowGuard = 1e12;

  std::vector<double> taxis(grid.nt + 1);
  for (int j = 0; j <= grid.nt; ++j) taxis[j] = grid.t_max * j / grid.nt;

  PicardResult result{.sup_values = {}, .final_field = f0, .diverged = false};

  const bool time_only =
      f0.node().structure() == fields::SpatialStructure::time_only;
  if (time_only) {
    std::vector<double> values(taxis.size());
    for (std::size_t j = 0; j < taxis.size(); ++j)
      values[j] = f0.node().time_profile(taxis[j]);
    values[0] = 0.0;
    for (int it = 0; it < iters; ++it) {
      std::vector<double> next(values.size(), 0.0);
      for (std::size_t j = 1; j < taxis.size(); ++j)
        next[j] =
            K * std::pow(rl_piecewise_linear(taxis, values, alpha, taxis[j]),
                         lambda);
      values = std::move(next);
      const double sup = *std::max_element(values.begin(), values.end());
      result.sup_values.push_back(sup);
      if (!std::isfinite(sup) || sup > kOverflowGuard) {
        result.diverged = true;
        break;
      }
    }
    result.final_field = fields::make_time_sampled(taxis, values);
    return result;
  }

  // general path: sampled iterates, j_alpha at every grid point
  std::vector<double> xaxis(grid.nx);
  for (int i = 0; i < grid.nx; ++i)
    xaxis[i] = -grid.x_max + 2.0 * grid.x_max * i / (grid.nx - 1);
  fields::Field current = f0;
  for (int it = 0; it < iters; ++it) {
    fields::SampledGrid sg;
    sg.n = 1;
    sg.x_axes = {xaxis};
    sg.t_axis = taxis;
    sg.values.assign(xaxis.size() * taxis.size(), 0.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < xaxis.size(); ++i) {
      for (std::size_t j = 1; j < taxis.size(); ++j) {
        const double x = xaxis[i];
        const double jv = potentials::j_alpha(current, n, alpha, {&x, 1},
                                              taxis[j], quad);
        const double v = K * std::pow(jv, lambda);
        sg.values[i * taxis.size() + j] = v;
        sup = std::max(sup, v);
      }
    }
    result.sup_values.push_back(sup);
    current = fields::make_sampled(std::move(sg));
    if (!std::isfinite(sup) || sup > kOverflowGuard) {
      result.diverged = true;
      break;
    }
  }
  result.final_field = current;
  return result;
}

}  // namespace fracheat::analysis
