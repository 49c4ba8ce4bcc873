#include "hbs/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "hbs/parallel.hpp"

namespace hbs {

namespace {

// Signed difference wrapped to (-pi, pi].
double signed_step(double from, double to) {
  double d = std::remainder(to - from, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

// Sum of wrapped steps around the closed sequence; +-2pi for a simple loop.
double winding(const std::vector<double>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += signed_step(a[i], a[(i + 1) % a.size()]);
  return s;
}

// Integral of the Poisson kernel 2pi P_r over (0, psi), psi in [-pi, 3pi).
double kernel_primitive(double psi, double k) {
  if (psi > kPi) return kTwoPi + kernel_primitive(psi - kTwoPi, k);
  if (psi >= kPi) return kPi;
  if (psi <= -kPi) return -kPi;
  return 2.0 * std::atan(k * std::tan(0.5 * psi));
}

}  // namespace

Complex WeldingMap::operator()(double angle) const {
  const std::size_t n = phi.size();
  const double t = wrap_angle(angle);
  std::size_t hi = static_cast<std::size_t>(std::upper_bound(phi.begin(), phi.end(), t) - phi.begin());
  const std::size_t lo = (hi + n - 1) % n;
  hi %= n;
  const double span = wrap_angle(phi[hi] - phi[lo]);
  const double off = wrap_angle(t - phi[lo]);
  const double frac = span > 0.0 ? off / span : 0.0;
  const double step = wrap_angle(omega[hi] - omega[lo]);
  return std::polar(1.0, omega[lo] + frac * step);
}

void validate_welding(const WeldingMap& w) {
  if (w.phi.size() != w.omega.size())
    throw Error(ErrorCode::LengthMismatch, "welding angle lists differ in length", "harmonic");
  if (w.phi.size() < 3) throw Error(ErrorCode::TooFewPoints, "welding needs at least 3 pairs", "harmonic");
  for (const auto* seq : {&w.phi, &w.omega}) {
    const double total = winding(*seq);
    bool ok = std::abs(total - kTwoPi) < 1e-6;
    for (std::size_t i = 0; ok && i < seq->size(); ++i)
      ok = signed_step((*seq)[i], (*seq)[(i + 1) % seq->size()]) > 0.0;
    if (!ok) throw Error(ErrorCode::MonotonicityViolation, "welding is not cyclically increasing", "harmonic");
  }
}

WeldingMap welding_from_chains(const NormalizedChains& chains) {
  const auto& p = chains.interior.mapped;
  const auto& q = chains.exterior.mapped;
  if (p.size() != q.size())
    throw Error(ErrorCode::LengthMismatch, "interior and exterior chains differ in length", "harmonic");
  const std::size_t n = p.size();
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "welding needs at least 3 pairs", "harmonic");
  const MoebiusTransform ext_inv = moebius_inverse(chains.exterior_fix);
  std::vector<double> phi(n), omega(n);
  for (std::size_t k = 0; k < n; ++k) {
    omega[k] = wrap_angle(std::arg(moebius_apply(chains.interior_fix, p[k])));
    phi[k] = wrap_angle(std::arg(moebius_apply(ext_inv, 1.0 / q[k])));
  }
  const double wp = winding(phi), wo = winding(omega);
  if (std::abs(std::abs(wp) - kTwoPi) > 1e-6 || std::abs(std::abs(wo) - kTwoPi) > 1e-6 || (wp > 0) != (wo > 0))
    throw Error(ErrorCode::MonotonicityViolation, "boundary images do not wind consistently", "harmonic");
  if (wp < 0) {
    std::reverse(phi.begin(), phi.end());
    std::reverse(omega.begin(), omega.end());
  }
  const std::size_t start = static_cast<std::size_t>(std::min_element(phi.begin(), phi.end()) - phi.begin());
  std::rotate(phi.begin(), phi.begin() + start, phi.end());
  std::rotate(omega.begin(), omega.begin() + start, omega.end());
  WeldingMap w{std::move(phi), std::move(omega), false};
  validate_welding(w);
  return w;
}

Complex poisson_sum(const WeldingMap& w, Complex z) {
  const std::size_t n = w.size();
  const double r = std::abs(z);
  const double theta = std::arg(z);
  Complex s{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    const double gamma = wrap_angle(w.phi[j] - w.phi[(j + n - 1) % n]);
    const double kernel = (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(w.phi[j] - theta) + r * r);
    s += kernel * gamma * std::polar(1.0, w.omega[j]);
  }
  return s / kTwoPi;
}

namespace {

// Exact-kernel quadrature of the boundary data, with omega linear in phi on
// each welding interval. Interval j runs from phi[j-1] to phi[j].
class Extender {
 public:
  explicit Extender(const WeldingMap& w) : w_(w), n_(w.size()) {
    cphi_.resize(n_);
    sphi_.resize(n_);
    gamma_.resize(n_);
    dom_.resize(n_);
    cmid_.resize(n_);
    smid_.resize(n_);
    f_.resize(n_);
    fmid_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t prev = (j + n_ - 1) % n_;
      cphi_[j] = std::cos(w.phi[j]);
      sphi_[j] = std::sin(w.phi[j]);
      gamma_[j] = wrap_angle(w.phi[j] - w.phi[prev]);
      dom_[j] = wrap_angle(w.omega[j] - w.omega[prev]);
      const double mid = w.phi[prev] + 0.5 * gamma_[j];
      cmid_[j] = std::cos(mid);
      smid_[j] = std::sin(mid);
      f_[j] = std::polar(1.0, w.omega[j]);
      fmid_[j] = std::polar(1.0, w.omega[prev] + 0.5 * dom_[j]);
    }
  }

  Complex operator()(double r, double theta) const {
    const double k = (1.0 + r) / (1.0 - r);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double h_scale = 0.1 * std::max(1.0 - r, 1e-6);
    const auto kernel_c = [r](double c) { return 1.0 / (1.0 - 2.0 * r * c + r * r); };
    // Primitive of the kernel at each phi_j, relative angle wrapped to (-pi, pi].
    const auto primitive = [k](double c, double s, double psi) {
      if (1.0 + c < 1e-14) return psi > 0.0 ? kPi : -kPi;
      return 2.0 * std::atan(k * s / (1.0 + c));
    };
    const auto rel = [theta](double phi) {
      double d = phi - theta;
      if (d > kPi) d -= kTwoPi;
      if (d <= -kPi) d += kTwoPi;
      return d;
    };
    std::size_t last = n_ - 1;
    double psi_prev = rel(w_.phi[last]);
    double c_prev = cphi_[last] * ct + sphi_[last] * st;
    double s_prev = sphi_[last] * ct - cphi_[last] * st;
    double a_prev = primitive(c_prev, s_prev, psi_prev);
    double p_prev = kernel_c(c_prev);
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t prev = (j + n_ - 1) % n_;
      const double psi = rel(w_.phi[j]);
      const double c = cphi_[j] * ct + sphi_[j] * st;
      const double s = sphi_[j] * ct - cphi_[j] * st;
      const double a_cur = primitive(c, s, psi);
      const double p_cur = kernel_c(c);
      const double g = gamma_[j];
      // Angular distance from theta to the interval.
      double dist = 0.0;
      if (!(psi_prev <= 0.0 && psi_prev + g >= 0.0) && psi_prev + g < kTwoPi)
        dist = std::min(std::abs(psi_prev), std::abs(kTwoPi - psi_prev - g));
      const double h = std::max(h_scale, 0.1 * dist);
      if (g <= h) {
        double weight = a_cur - a_prev;
        if (weight < -kPi) weight += kTwoPi;
        const double p_mid = kernel_c(cmid_[j] * ct + smid_[j] * st);
        sum += weight * (p_prev * f_[prev] + 4.0 * p_mid * fmid_[j] + p_cur * f_[j]) / (p_prev + 4.0 * p_mid + p_cur);
      } else {
        sum += split(j, prev, psi_prev, k, r, static_cast<int>(std::min(std::ceil(g / h), 4096.0)));
      }
      psi_prev = psi;
      a_prev = a_cur;
      p_prev = p_cur;
    }
    return sum / kTwoPi;
  }

 private:
  // Interval j cut into m pieces; each piece uses its exact kernel mass and a
  // Simpson estimate of the kernel-weighted mean of the data.
  Complex split(std::size_t j, std::size_t prev, double a, double k, double r, int m) const {
    const auto kernel = [r](double psi) { return 1.0 / (1.0 - 2.0 * r * std::cos(psi) + r * r); };
    const double sub = gamma_[j] / m;
    const double dw = dom_[j] / m;
    double lo = kernel_primitive(a, k);
    double p_lo = kernel(a);
    Complex f_lo = f_[prev];
    Complex sum{0.0, 0.0};
    for (int i = 0; i < m; ++i) {
      const double x0 = a + sub * i;
      const double hi = kernel_primitive(x0 + sub, k);
      const double p_mid = kernel(x0 + 0.5 * sub), p_hi = kernel(x0 + sub);
      const Complex f_mid = std::polar(1.0, w_.omega[prev] + (i + 0.5) * dw);
      const Complex f_hi = i + 1 == m ? f_[j] : std::polar(1.0, w_.omega[prev] + (i + 1) * dw);
      sum += (hi - lo) * (p_lo * f_lo + 4.0 * p_mid * f_mid + p_hi * f_hi) / (p_lo + 4.0 * p_mid + p_hi);
      lo = hi;
      p_lo = p_hi;
      f_lo = f_hi;
    }
    return sum;
  }

  const WeldingMap& w_;
  std::size_t n_;
  std::vector<double> cphi_, sphi_, gamma_, dom_, cmid_, smid_;
  std::vector<Complex> f_, fmid_;
};

// Wirtinger derivatives of the extension:
//   H_z = (1/2pi) int u / (u - z)^2 f dphi,   H_zbar = (1/2pi) int conj(u) / (conj(u) - conj(z))^2 f dphi,
// u = e^{i phi}, whose kernels have the primitives i / (u - z) and -i / (conj(u) - conj(z)).
class DerivativeExtender {
 public:
  explicit DerivativeExtender(const WeldingMap& w) : w_(w), n_(w.size()) {
    u_.resize(n_);
    umid_.resize(n_);
    gamma_.resize(n_);
    dom_.resize(n_);
    f_.resize(n_);
    fmid_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t prev = (j + n_ - 1) % n_;
      gamma_[j] = wrap_angle(w.phi[j] - w.phi[prev]);
      dom_[j] = wrap_angle(w.omega[j] - w.omega[prev]);
      u_[j] = std::polar(1.0, w.phi[j]);
      umid_[j] = std::polar(1.0, w.phi[prev] + 0.5 * gamma_[j]);
      f_[j] = std::polar(1.0, w.omega[j]);
      fmid_[j] = std::polar(1.0, w.omega[prev] + 0.5 * dom_[j]);
    }
  }

  FaceDerivatives operator()(Complex z) const {
    const double r = std::abs(z);
    const double theta = std::arg(z);
    const double h_scale = 0.1 * std::max(1.0 - r, 1e-6);
    const auto rel = [theta](double phi) {
      double d = phi - theta;
      if (d > kPi) d -= kTwoPi;
      if (d <= -kPi) d += kTwoPi;
      return d;
    };
    Terms prev_t = terms(u_[n_ - 1], z);
    double psi_prev = rel(w_.phi[n_ - 1]);
    Complex sz{0.0, 0.0}, szb{0.0, 0.0};
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t prev = (j + n_ - 1) % n_;
      const Terms cur = terms(u_[j], z);
      const double g = gamma_[j];
      double dist = 0.0;
      if (!(psi_prev <= 0.0 && psi_prev + g >= 0.0) && psi_prev + g < kTwoPi)
        dist = std::min(std::abs(psi_prev), std::abs(kTwoPi - psi_prev - g));
      const double h = std::max(h_scale, 0.1 * dist);
      if (g <= h) {
        const Terms mid = terms(umid_[j], z);
        sz += piece(cur.g1 - prev_t.g1, g, prev_t.k1, mid.k1, cur.k1, f_[prev], fmid_[j], f_[j]);
        szb += piece(cur.g2 - prev_t.g2, g, prev_t.k2, mid.k2, cur.k2, f_[prev], fmid_[j], f_[j]);
      } else {
        const int m = static_cast<int>(std::min(std::ceil(g / h), 4096.0));
        const double sub = g / m, dw = dom_[j] / m;
        Terms lo = prev_t;
        Complex f_lo = f_[prev];
        for (int i = 0; i < m; ++i) {
          const double x0 = w_.phi[prev] + sub * i;
          const Terms mid = terms(std::polar(1.0, x0 + 0.5 * sub), z);
          const Terms hi = i + 1 == m ? cur : terms(std::polar(1.0, x0 + sub), z);
          const Complex f_mid = std::polar(1.0, w_.omega[prev] + (i + 0.5) * dw);
          const Complex f_hi = i + 1 == m ? f_[j] : std::polar(1.0, w_.omega[prev] + (i + 1) * dw);
          sz += piece(hi.g1 - lo.g1, sub, lo.k1, mid.k1, hi.k1, f_lo, f_mid, f_hi);
          szb += piece(hi.g2 - lo.g2, sub, lo.k2, mid.k2, hi.k2, f_lo, f_mid, f_hi);
          lo = hi;
          f_lo = f_hi;
        }
      }
      prev_t = cur;
      psi_prev = rel(w_.phi[j]);
    }
    return {sz / kTwoPi, szb / kTwoPi};
  }

 private:
  struct Terms {
    Complex k1, g1, k2, g2;  // kernels and primitives
  };

  static Terms terms(Complex u, Complex z) {
    // d = 1 / (u - z), spelled out to avoid the generic complex division.
    const double ar = u.real() - z.real(), ai = u.imag() - z.imag();
    const double inv = 1.0 / (ar * ar + ai * ai);
    const double dr = ar * inv, di = -ai * inv;
    const double d2r = dr * dr - di * di, d2i = 2.0 * dr * di;
    const double k1r = u.real() * d2r - u.imag() * d2i, k1i = u.real() * d2i + u.imag() * d2r;
    return {{k1r, k1i}, {-di, dr}, {k1r, -k1i}, {-di, -dr}};
  }

  // Exact kernel mass times a Simpson estimate of the kernel-weighted mean of
  // the data; plain Simpson when the kernel nearly cancels over the piece.
  static Complex piece(Complex mass, double len, Complex ka, Complex km, Complex kb, Complex fa, Complex fm, Complex fb) {
    const Complex den = ka + 4.0 * km + kb;
    const Complex num = ka * fa + 4.0 * km * fm + kb * fb;
    const double spread = std::norm(ka) + 16.0 * std::norm(km) + std::norm(kb);
    const double den2 = std::norm(den);
    if (den2 < 1e-6 * spread) return num * (len / 6.0);
    return mass * num * std::conj(den) / den2;
  }

  const WeldingMap& w_;
  std::size_t n_;
  std::vector<Complex> u_, umid_, f_, fmid_;
  std::vector<double> gamma_, dom_;
};

}  // namespace

HarmonicField poisson_extend(const WeldingMap& w, std::shared_ptr<const DiskGrid> grid) {
  validate_welding(w);
  HarmonicField h;
  h.grid = grid;
  const std::size_t nodes = grid->node_count();
  h.values.assign(nodes, Complex{0.0, 0.0});
  const Extender extend(w);
  const Complex shift = poisson_sum(w, 0.0) - extend(0.0, 0.0);
  const long m2 = static_cast<long>(grid->resolution) * grid->resolution;
  parallel_for(nodes, [&](std::size_t i) {
    const auto [j, k] = grid->lattice[i];
    const Complex z = grid->mesh.nodes[i];
    if (static_cast<long>(j) * j + static_cast<long>(k) * k == m2)
      h.values[i] = w(std::arg(z));
    else
      h.values[i] = extend(std::abs(z), std::arg(z)) + shift;
  });
  return h;
}

double check_harmonicity(const HarmonicField& h, double max_radius) {
  const DiskGrid& g = *h.grid;
  const double m2 = static_cast<double>(g.resolution) * g.resolution;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (std::abs(g.mesh.nodes[i]) > max_radius) continue;
    const auto [j, k] = g.lattice[i];
    const int e = g.node_at(j + 1, k), wv = g.node_at(j - 1, k), nn = g.node_at(j, k + 1), s = g.node_at(j, k - 1);
    if (e < 0 || wv < 0 || nn < 0 || s < 0) continue;
    const Complex lap = h.values[e] + h.values[wv] + h.values[nn] + h.values[s] - 4.0 * h.values[i];
    worst = std::max(worst, std::abs(lap) * m2);
  }
  return worst;
}

}  // namespace hbs

namespace hbs {

FaceDerivatives extension_derivatives(const WeldingMap& w, Complex z) {
  validate_welding(w);
  return DerivativeExtender(w)(z);
}

BeltramiField extension_beltrami(const WeldingMap& w, std::shared_ptr<const DiskGrid> grid) {
  validate_welding(w);
  const DerivativeExtender deriv(w);
  BeltramiField out{grid, std::vector<Complex>(grid->face_count())};
  std::vector<double> scale(grid->face_count());
  parallel_for(grid->face_count(), [&](std::size_t f) {
    const FaceDerivatives d = deriv(grid->centroids[f]);
    scale[f] = std::abs(d.fz) + std::abs(d.fzbar);
    out.values[f] = std::abs(d.fz) > 0.0 ? d.fzbar / d.fz : Complex{0.0, 0.0};
  });
  std::vector<double> sorted = scale;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double floor = 1e-12 * sorted[sorted.size() / 2];
  for (std::size_t f = 0; f < scale.size(); ++f)
    if (!std::isfinite(std::abs(out.values[f])) || scale[f] <= floor)
      throw Error(ErrorCode::VanishingDerivative, "extension derivative vanishes at a face centre", "harmonic");
  return out;
}

}  // namespace hbs
