#include "fracheat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracheat::quadrature {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: abs_tol must be > 0");
  if (max_panels < 16) throw std::invalid_argument("QuadratureSpec: max_panels must be >= 16");
  if (!(spatial_tail_sigmas >= 4.0))
    throw std::invalid_argument("QuadratureSpec: spatial_tail_sigmas must be >= 4");
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1,1] (QUADPACK).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
  double kronrod;
  double err;
};

PanelEstimate gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

struct AdaptiveState {
  const Integrand* f;
  double abs_tol;
  double rel_tol;
  int panels_left;
  long evaluations = 0;
  bool converged = true;
};

double adapt(AdaptiveState& st, double a, double b, double tol, double& err_out,
             int depth) {
  PanelEstimate e = gk15(*st.f, a, b);
  st.evaluations += 15;
  const double local_tol = std::max(tol, st.rel_tol * std::abs(e.kronrod));
  if (e.err <= local_tol || depth >= 52 || st.panels_left <= 0) {
    if (e.err > local_tol) st.converged = false;
    err_out += e.err;
    return e.kronrod;
  }
  st.panels_left -= 1;
  const double c = 0.5 * (a + b);
  double left = adapt(st, a, c, 0.5 * tol, err_out, depth + 1);
  double right = adapt(st, c, b, 0.5 * tol, err_out, depth + 1);
  return left + right;
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, double abs_tol,
                     double rel_tol, int max_panels) {
  QuadResult result;
  if (a == b) return result;
  if (b < a) {
    result = integrate(f, b, a, abs_tol, rel_tol, max_panels);
    result.value = -result.value;
    return result;
  }
  AdaptiveState st{&f, abs_tol, rel_tol, max_panels};
  double err = 0.0;
  result.value = adapt(st, a, b, abs_tol, err, 0);
  result.error = err;
  result.evaluations = st.evaluations;
  // the per-panel acceptance uses local tolerances; check the global target too
  result.converged = st.converged ||
                     err <= std::max(abs_tol, rel_tol * std::abs(result.value));
  if (err <= std::max(abs_tol, rel_tol * std::abs(result.value)))
    result.converged = true;
  return result;
}

QuadResult integrate_endpoint_power(const Integrand& f, double a, double b,
                                    double sl, double sr, double abs_tol,
                                    double rel_tol, int max_panels) {
  if (a == b) return {};
  const bool left = sl != 0.0 && std::abs(sl - std::round(sl)) > 1e-12;
  const bool right = sr != 0.0 && std::abs(sr - std::round(sr)) > 1e-12;
  if (left && right) {
    const double mid = 0.5 * (a + b);
    QuadResult r = integrate_endpoint_power(f, a, mid, sl, 0.0, 0.5 * abs_tol,
                                            rel_tol, max_panels / 2);
    r += integrate_endpoint_power(f, mid, b, 0.0, sr, 0.5 * abs_tol, rel_tol,
                                  max_panels / 2);
    return r;
  }
  if (left) {
    // u = (x-a)^(1+sl); the (x-a)^sl factor inside f becomes u^(sl/(1+sl)) and
    // cancels against the Jacobian up to a constant, leaving a bounded integrand.
    const double p = 1.0 + sl;
    const double beta = 1.0 / p;
    const double umax = std::pow(b - a, p);
    auto g = [&](double u) {
      const double x = a + std::pow(u, beta);
      return f(x) * beta * std::pow(u, beta - 1.0);
    };
    return integrate(g, 0.0, umax, abs_tol, rel_tol, max_panels);
  }
  if (right) {
    const double p = 1.0 + sr;
    const double beta = 1.0 / p;
    const double umax = std::pow(b - a, p);
    auto g = [&](double u) {
      const double x = b - std::pow(u, beta);
      return f(x) * beta * std::pow(u, beta - 1.0);
    };
    return integrate(g, 0.0, umax, abs_tol, rel_tol, max_panels);
  }
  return integrate(f, a, b, abs_tol, rel_tol, max_panels);
}

namespace {

// Implicit-shift QL for a symmetric tridiagonal matrix, tracking only the
// first row of the accumulated rotations (enough for Gauss weights).
void tridiag_eig_firstrow(std::vector<double>& d, std::vector<double>& e,
                          std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  z.assign(n, 0.0);
  if (n == 0) return;
  z[0] = 1.0;
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter == 50) throw std::runtime_error("gauss_jacobi_rule: QL failed");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double fi = s * e[i];
          double bi = c * e[i];
          r = std::hypot(fi, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = fi / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * bi;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - bi;
          const double zi = z[i + 1];
          z[i + 1] = s * z[i] + c * zi;
          z[i] = c * z[i] - s * zi;
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  // sort eigenvalues ascending, permuting z alongside
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });
  std::vector<double> ds(n), zs(n);
  for (int i = 0; i < n; ++i) {
    ds[i] = d[idx[i]];
    zs[i] = z[idx[i]];
  }
  d = ds;
  z = zs;
}

}  // namespace

void gauss_jacobi_rule(int m, double beta, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  if (m < 1) throw std::invalid_argument("gauss_jacobi_rule: order must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("gauss_jacobi_rule: beta must be > 0");
  // Jacobi weight (1-x)^pa (1+x)^pb on [-1,1] with pa = beta-1, pb = 0
  const double pa = beta - 1.0;
  const double pb = 0.0;
  std::vector<double> d(m), e(m);
  const double apb = pa + pb;
  d[0] = (pb - pa) / (apb + 2.0);
  // mu0 = 2^(a+b+1) B(a+1, b+1)
  const double mu0 =
      std::pow(2.0, apb + 1.0) * std::exp(std::lgamma(pa + 1.0) + std::lgamma(pb + 1.0) -
                                          std::lgamma(apb + 2.0));
  for (int k = 1; k < m; ++k) {
    const double k2 = 2.0 * k + apb;
    d[k] = (pb * pb - pa * pa) / (k2 * (k2 + 2.0));
    const double num = 4.0 * k * (k + pa) * (k + pb) * (k + apb);
    const double den = k2 * k2 * (k2 + 1.0) * (k2 - 1.0);
    e[k] = std::sqrt(num / den);
  }
  // shift off-diagonals down for the solver (e[i] couples i and i+1)
  std::vector<double> off(m, 0.0);
  for (int k = 1; k < m; ++k) off[k - 1] = e[k];
  std::vector<double> z;
  tridiag_eig_firstrow(d, off, z);
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    // map node from [-1,1] to [0,1]; the rule integrates (1-u)^(beta-1) on [0,1]
    nodes[i] = 0.5 * (d[i] + 1.0);
    // mu0 corresponds to |1-x|^pa on [-1,1]; rescale to (1-u)^(beta-1) du:
    // u = (x+1)/2, 1-u = (1-x)/2, du = dx/2 => weight factor 2^(-beta)
    weights[i] = mu0 * z[i] * z[i] * std::pow(2.0, -beta);
  }
}

QuadResult integrate_gauss_jacobi(const Integrand& g, double a, double b,
                                  double beta, double abs_tol, double rel_tol) {
  QuadResult result;
  if (a == b) return result;
  const double len = b - a;
  const double scale = std::pow(len, beta);
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int m = 8; m <= 512; m *= 2) {
    std::vector<double> u, w;
    gauss_jacobi_rule(m, beta, u, w);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      // x = a + len*u, so (b-x) = len*(1-u); the (b-x)^(beta-1) weight is
      // carried by the rule itself.
      sum += w[i] * g(a + len * u[i]);
    }
    sum *= scale;
    result.evaluations += m;
    if (!std::isnan(prev)) {
      result.error = std::abs(sum - prev);
      result.value = sum;
      if (result.error <= std::max(abs_tol, rel_tol * std::abs(sum))) {
        result.converged = true;
        return result;
      }
    }
    prev = sum;
    result.value = sum;
  }
  result.converged = false;
  return result;
}

namespace {

double simpson(const Integrand& f, double a, double fa, double m, double fm,
               double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt_simpson(const Integrand& f, double a, double fa, double m,
                     double fm, double b, double fb, double whole, double tol,
                     int depth, int& panels, long& evals, bool& converged,
                     double& err) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  evals += 2;
  const double left = simpson(f, a, fa, lm, flm, m, fm);
  const double right = simpson(f, m, fm, rm, frm, b, fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth >= 40 || panels <= 0) {
    if (std::abs(delta) > 15.0 * tol) converged = false;
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  panels -= 1;
  return adapt_simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1,
                       panels, evals, converged, err) +
         adapt_simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1,
                       panels, evals, converged, err);
}

}  // namespace

QuadResult integrate_simpson(const Integrand& f, double a, double b,
                             const std::vector<double>& breaks, double abs_tol,
                             double rel_tol, int max_panels) {
  QuadResult result;
  if (a == b) return result;
  std::vector<double> pts;
  pts.push_back(a);
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  int panels = max_panels;
  const int segments = static_cast<int>(pts.size()) - 1;
  for (int i = 0; i < segments; ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    result.evaluations += 3;
    const double whole = simpson(f, lo, flo, mid, fmid, hi, fhi);
    bool converged = true;
    double err = 0.0;
    result.value +=
        adapt_simpson(f, lo, flo, mid, fmid, hi, fhi, whole,
                      std::max(abs_tol / segments, rel_tol * std::abs(whole)), 0,
                      panels, result.evaluations, converged, err);
    result.error += err;
    result.converged = result.converged && converged;
  }
  if (result.error <= std::max(abs_tol, rel_tol * std::abs(result.value)))
    result.converged = true;
  return result;
}

void require_converged(const QuadResult& r, const QuadratureSpec& spec,
                       const std::string& what) {
  if (r.converged) return;
  if (r.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value))) return;
  throw ToleranceError(what + ": tolerance not met (achieved error estimate " +
                           std::to_string(r.error) + ")",
                       r.value, r.error);
}

}  // namespace fracheat::quadrature
