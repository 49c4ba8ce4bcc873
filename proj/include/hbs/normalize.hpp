#pragma once

#include <vector>

#include "hbs/complexgeom.hpp"
#include "hbs/zipper.hpp"

namespace hbs {

struct CenteringResult {
  MoebiusTransform transform;     // M_Phi1, collapsed to canonical form
  std::vector<Complex> points;    // transform applied to the inputs
  int iterations = 0;
  std::vector<double> mean_history;  // |mean| before each step, then the final value
};

/// Repeatedly applies F_{p_c}(z) = (z - p_c) / (1 - conj(p_c) z) at the current
/// arithmetic mean p_c until |mean| <= eps. Throws NoConvergence after
/// `max_iterations` steps.
CenteringResult center_boundary(const std::vector<Complex>& p, double eps = 1e-5, int max_iterations = 10000);

/// The unique a in the disk with sum_k (p_k - a) / (1 - conj(a) p_k) = 0,
/// obtained from the centering iteration run to a tight tolerance.
Complex solve_center_equation(const std::vector<Complex>& p);

/// |sum_k F_a(p_k)|.
double center_residual(const std::vector<Complex>& p, Complex a);

/// F_c with c = -1/conj(b), b = Phi_2^{-1}(inf), so that Phi_2 o F_c fixes
/// infinity. Requires an exterior chain.
MoebiusTransform pin_infinity(const ConformalMapChain& exterior);

}  // namespace hbs
