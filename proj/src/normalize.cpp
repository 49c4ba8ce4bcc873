#include "hbs/normalize.hpp"

#include <cmath>

namespace hbs {

namespace {

Complex mean_of(const std::vector<Complex>& p) {
  Complex s{0.0, 0.0};
  for (const auto& v : p) s += v;
  return s / static_cast<double>(p.size());
}

}  // namespace

CenteringResult center_boundary(const std::vector<Complex>& p, double eps, int max_iterations) {
  if (p.size() < 3) throw Error(ErrorCode::TooFewPoints, "centering needs at least 3 points", "normalize");
  CenteringResult out;
  out.points = p;
  out.transform = MoebiusTransform::identity();
  Complex pc = mean_of(out.points);
  out.mean_history.push_back(std::abs(pc));
  while (std::abs(pc) > eps) {
    if (out.iterations >= max_iterations)
      throw Error(ErrorCode::NoConvergence, "centering iteration did not converge", "normalize");
    const MoebiusTransform step = MoebiusTransform::centering(pc);
    for (auto& v : out.points) {
      v = moebius_apply(step, v);
      v /= std::abs(v);  // stay on the circle
    }
    out.transform = moebius_compose(step, out.transform);
    ++out.iterations;
    pc = mean_of(out.points);
    out.mean_history.push_back(std::abs(pc));
  }
  return out;
}

Complex solve_center_equation(const std::vector<Complex>& p) {
  const double eps = 1e-10 / static_cast<double>(p.size() < 3 ? 3 : p.size());
  const CenteringResult r = center_boundary(p, eps);
  return r.transform.a;
}

double center_residual(const std::vector<Complex>& p, Complex a) {
  Complex s{0.0, 0.0};
  for (const auto& v : p) s += (v - a) / (1.0 - std::conj(a) * v);
  return std::abs(s);
}

MoebiusTransform pin_infinity(const ConformalMapChain& exterior) {
  if (exterior.direction != ChainDirection::Exterior)
    throw Error(ErrorCode::DomainViolation, "pin_infinity needs an exterior chain", "normalize");
  // Phi_2(z) = g^{-1}(1/z), so b = Phi_2^{-1}(inf) = 1 / g(inf) and c = -conj(g(inf)).
  const Complex g_inf = chain_eval_infinity(exterior);
  if (!(std::abs(g_inf) < 1.0 - 1e-9))
    throw Error(ErrorCode::InfinityUnresolvable, "preimage of infinity lies on the unit circle", "normalize");
  return MoebiusTransform::centering(-std::conj(g_inf));
}

}  // namespace hbs
