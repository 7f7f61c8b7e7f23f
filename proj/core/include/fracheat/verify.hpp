#pragma once

#include <string>
#include <vector>

#include "fracheat/analysis.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat::verify {

/// Per-suite overrides; negative values mean "use the suite default".
struct SuiteOptions {
  double tol = -1.0;
  double alpha = -1.0;
  double lambda = -1.0;
  double p = -1.0;
  double q = -1.0;
  double K = 1.0;
  int n = -1;
  int count = -1;       // number of random fields / terms where applicable
  unsigned seed = 20250811;
  quadrature::QuadratureSpec quad{};
};

/// Suite names, each mapping 1:1 to a module invariant:
/// semigroup, exact, bounds, gamma-rec, lemma71, lemma72, lemma76, inverse,
/// limits-time, limits-space, blowup-small, blowup-large, region-classify, p3.
std::vector<std::string> suite_names();

analysis::Report run_suite(const std::string& name, const SuiteOptions& opts = {});

/// (Phi_alpha * Phi_beta)(x, t) for n = 1 by honest nested space-time
/// quadrature of the convolution with lower time limit 0.
double phi_convolution_1d(double alpha, double beta, double x, double t,
                          const quadrature::QuadratureSpec& quad = {});

}  // namespace fracheat::verify
