#include "hbs/signature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hbs/parallel.hpp"

namespace hbs {

namespace {

constexpr double kMomentFloor = 1e-9;
constexpr double kRotationTolerance = 1e-9;
constexpr int kRotationSteps = 8;

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.tagged(stage);
  }
}

double half_open_arg(Complex v) { return wrap_angle(std::arg(v)); }

bool certified(const DiskMoments& m) {
  return std::abs(std::arg(m.mean)) <= kRotationTolerance && half_open_arg(m.inverse) < kPi;
}

// Rotation step that brings the moments to the normalized position.
double rotation_step(const DiskMoments& m) {
  double step = 0.5 * std::arg(m.mean);
  if (wrap_angle(std::arg(m.inverse) - step) >= kPi) step += kPi;
  return step;
}

void check_moments(const DiskMoments& m) {
  if (std::abs(m.mean) < kMomentFloor || std::abs(m.inverse) < kMomentFloor)
    throw Error(ErrorCode::AmbiguousNormalization, "disk moments vanish; rotation is undefined", "hbs");
}

}  // namespace

DiskMoments disk_moments(const BeltramiField& mu) {
  const DiskGrid& g = *mu.grid;
  const double cut = 1.5 / g.resolution;
  DiskMoments m{{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    const Complex v = mu.values[f] * g.areas[f];
    m.mean += v;
    if (std::abs(g.centroids[f]) >= cut) m.inverse += v / g.centroids[f];
  }
  return m;
}

WeldingMap rotate_welding(const WeldingMap& w, double angle) {
  WeldingMap out = w;
  for (auto& p : out.phi) p = wrap_angle(p - angle);
  const std::size_t start = static_cast<std::size_t>(std::min_element(out.phi.begin(), out.phi.end()) - out.phi.begin());
  std::rotate(out.phi.begin(), out.phi.begin() + start, out.phi.end());
  std::rotate(out.omega.begin(), out.omega.begin() + start, out.omega.end());
  return out;
}

NormalizedChains normalized_chains(const Contour& resampled, double eps) {
  NormalizedChains ch;
  ch.interior = staged("zipper/interior", [&] { return zipper_build(resampled, ChainDirection::Interior); });
  ch.exterior = staged("zipper/exterior", [&] { return zipper_build(resampled, ChainDirection::Exterior); });
  ch.interior_fix = staged("normalize/center", [&] { return center_boundary(ch.interior.mapped, eps).transform; });
  ch.exterior_fix = staged("normalize/infinity", [&] { return pin_infinity(ch.exterior.chain); });
  return ch;
}

HbsPipeline run_pipeline(const Contour& c, const RunConfig& cfg) {
  cfg.validate();
  HbsPipeline out;
  out.boundary = staged("resample", [&] {
    if (c.size() < 3) throw Error(ErrorCode::TooFewPoints, "contour needs at least 3 points");
    return resample_uniform(orient(c, Orientation::Clockwise), cfg.samples);
  });
  out.chains = normalized_chains(out.boundary, cfg.centering_eps);
  out.welding = staged("welding", [&] { return welding_from_chains(out.chains); });
  auto grid = staged("grid", [&] { return build_disk_grid(cfg.grid_resolution); });

  const auto extend = [&](double angle) {
    return staged("beltrami", [&] { return extension_beltrami(rotate_welding(out.welding, angle), grid); });
  };
  const auto finish = [&] {
    out.harmonic = staged("poisson", [&] { return poisson_extend(rotate_welding(out.welding, out.rotation), grid); });
    return out;
  };
  BeltramiField mu0 = extend(0.0);
  const DiskMoments m0 = disk_moments(mu0);
  HbsField& sig = out.signature;
  const auto give_up = [&] {
    // Numerically symmetric shapes: the moments are discretization noise and
    // rotating only reshuffles it, so keep the unrotated field.
    out.rotation = 0.0;
    sig.field = std::move(mu0);
    sig.tau0_residual = std::arg(m0.mean);
    sig.tau1 = half_open_arg(m0.inverse);
    sig.ambiguous = true;
    return finish();
  };
  if (std::abs(m0.mean) < kMomentFloor || std::abs(m0.inverse) < kMomentFloor) return give_up();
  if (certified(m0)) {
    sig.field = std::move(mu0);
    sig.tau0_residual = std::arg(m0.mean);
    sig.tau1 = half_open_arg(m0.inverse);
    return finish();
  }
  out.rotation = wrap_angle(rotation_step(m0));
  BeltramiField mu = extend(out.rotation);
  DiskMoments m = disk_moments(mu);
  double previous = std::abs(std::arg(m0.mean));
  for (int step = 1; !certified(m); ++step) {
    const double now = std::abs(std::arg(m.mean));
    if (step >= kRotationSteps || std::abs(m.mean) < kMomentFloor || std::abs(m.inverse) < kMomentFloor ||
        now > 0.1 * previous)
      return give_up();
    previous = now;
    out.rotation = wrap_angle(out.rotation + rotation_step(m));
    mu = extend(out.rotation);
    m = disk_moments(mu);
  }
  sig.field = std::move(mu);
  sig.tau0_residual = std::arg(m.mean);
  sig.tau1 = half_open_arg(m.inverse);
  return finish();
}

HbsField compute_hbs(const Contour& c, const RunConfig& cfg) { return run_pipeline(c, cfg).signature; }

namespace {

int nearest_face(const DiskGrid& g, Complex z) {
  const int M = g.resolution;
  const int j0 = static_cast<int>(std::floor(z.real() * M)), k0 = static_cast<int>(std::floor(z.imag() * M));
  int best = -1;
  double best_d = 0.0;
  for (int radius = 2; best < 0; radius *= 2) {
    for (int k = k0 - radius; k <= k0 + radius; ++k)
      for (int j = j0 - radius; j <= j0 + radius; ++j) {
        if (j < -M || j >= M || k < -M || k >= M) continue;
        for (int f : g.square_faces[static_cast<std::size_t>(k + M) * (2 * M) + (j + M)]) {
          if (f < 0) continue;
          const double d = std::abs(g.centroids[f] - z);
          if (best < 0 || d < best_d) {
            best = f;
            best_d = d;
          }
        }
      }
    if (radius > 4 * M) break;
  }
  return best;
}

// Quadratic least-squares fit through the face values whose centroids lie
// within 2.5 cells of z; falls back to a plane, then to the nearest face.
Complex local_fit(const BeltramiField& mu, Complex z) {
  const DiskGrid& g = *mu.grid;
  const int M = g.resolution;
  const double h = 1.0 / M;
  const int j0 = static_cast<int>(std::floor(z.real() * M)), k0 = static_cast<int>(std::floor(z.imag() * M));
  Eigen::Matrix<double, 6, 6> ata = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 2> atb = Eigen::Matrix<double, 6, 2>::Zero();
  int used = 0;
  for (int k = k0 - 3; k <= k0 + 3; ++k)
    for (int j = j0 - 3; j <= j0 + 3; ++j) {
      if (j < -M || j >= M || k < -M || k >= M) continue;
      for (int f : g.square_faces[static_cast<std::size_t>(k + M) * (2 * M) + (j + M)]) {
        if (f < 0) continue;
        const Complex d = (g.centroids[f] - z) / h;
        if (std::abs(d) > 2.5) continue;
        Eigen::Matrix<double, 6, 1> row;
        row << 1.0, d.real(), d.imag(), d.real() * d.real(), d.real() * d.imag(), d.imag() * d.imag();
        ata += row * row.transpose();
        atb.col(0) += row * mu.values[f].real();
        atb.col(1) += row * mu.values[f].imag();
        ++used;
      }
    }
  if (used >= 12) {
    const Eigen::Matrix<double, 6, 2> coef = ata.ldlt().solve(atb);
    if (coef.allFinite()) return {coef(0, 0), coef(0, 1)};
  }
  if (used >= 4) {
    const Eigen::Matrix<double, 3, 2> coef = ata.topLeftCorner<3, 3>().ldlt().solve(atb.topRows<3>());
    if (coef.allFinite()) return {coef(0, 0), coef(0, 1)};
  }
  return mu.values[nearest_face(g, z)];
}

}  // namespace

BeltramiField rotate_field(const BeltramiField& mu, double angle) {
  const DiskGrid& g = *mu.grid;
  BeltramiField out{mu.grid, std::vector<Complex>(g.face_count())};
  const Complex turn = std::polar(1.0, angle);
  const Complex factor = std::polar(1.0, -2.0 * angle);
  const double quarter = angle / (0.5 * kPi);
  if (std::abs(quarter - std::round(quarter)) < 1e-12) {
    const long q = ((static_cast<long>(std::round(quarter)) % 4) + 4) % 4;
    const Complex exact_turn[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex exact_factor[4] = {{1, 0}, {-1, 0}, {1, 0}, {-1, 0}};
    for (std::size_t f = 0; f < g.face_count(); ++f) {
      const int src = g.locate(exact_turn[q] * g.centroids[f]);
      out.values[f] = exact_factor[q] * mu.values[src >= 0 ? src : nearest_face(g, exact_turn[q] * g.centroids[f])];
    }
    return out;
  }
  parallel_for(g.face_count(), [&](std::size_t f) { out.values[f] = factor * local_fit(mu, turn * g.centroids[f]); });
  return out;
}

HbsField normalize_rotation(const BeltramiField& mu) {
  if (!(mu.sup_norm() < 1.0)) throw Error(ErrorCode::NonAdmissible, "field sup-norm must be below 1", "hbs");
  DiskMoments m = disk_moments(mu);
  check_moments(m);
  HbsField out;
  if (certified(m)) {
    out.field = mu;
  } else {
    // Re-resample from the original each time so that errors do not compound.
    double angle = rotation_step(m);
    for (int step = 0; step < kRotationSteps; ++step) {
      out.field = rotate_field(mu, angle);
      m = disk_moments(out.field);
      check_moments(m);
      if (certified(m)) break;
      angle = wrap_angle(angle + rotation_step(m));
    }
  }
  out.tau0_residual = std::arg(m.mean);
  out.tau1 = half_open_arg(m.inverse);
  return out;
}

double field_distance(const BeltramiField& a, const BeltramiField& b) {
  if (!a.grid || !b.grid || a.grid->resolution != b.grid->resolution || a.values.size() != b.values.size() ||
      a.values.size() != a.grid->face_count())
    throw Error(ErrorCode::GridMismatch, "signatures live on different grids", "hbs");
  double s = 0.0;
  for (std::size_t f = 0; f < a.values.size(); ++f) s += std::norm(a.values[f] - b.values[f]);
  return std::sqrt(s / static_cast<double>(a.values.size()));
}

double hbs_distance(const HbsField& a, const HbsField& b) { return field_distance(a.field, b.field); }

Complex exterior_derivative_at_infinity(const NormalizedChains& chains) {
  constexpr double R = 1e4;
  const auto phi = [&](Complex z) {
    return exterior_map(chains.exterior.chain, moebius_apply(chains.exterior_fix, z));
  };
  return (phi(Complex{R, 0.0}) - phi(Complex{-R, 0.0})) / (2.0 * R);
}

WeldingMap baseline_welding(const Contour& c, const RunConfig& cfg) {
  cfg.validate();
  const Contour boundary = staged("resample", [&] {
    if (c.size() < 3) throw Error(ErrorCode::TooFewPoints, "contour needs at least 3 points");
    return resample_uniform(orient(c, Orientation::Clockwise), cfg.samples);
  });
  const NormalizedChains chains = normalized_chains(boundary, cfg.centering_eps);
  WeldingMap w = staged("welding", [&] { return welding_from_chains(chains); });
  // Turning the exterior parameter by beta makes the derivative at infinity real and positive.
  const double beta = std::arg(staged("welding", [&] { return exterior_derivative_at_infinity(chains); }));
  w = rotate_welding(w, -beta);
  const double at_one = std::arg(w(0.0));
  for (auto& o : w.omega) o = wrap_angle(o - at_one);
  w.baseline_normalized = true;
  return w;
}

double welding_distance(const WeldingMap& a, const WeldingMap& b, std::size_t samples) {
  if (!a.baseline_normalized || !b.baseline_normalized)
    throw Error(ErrorCode::NotNormalized, "welding distance needs normalized weldings", "hbs");
  if (samples == 0) throw Error(ErrorCode::TooFewPoints, "no sample points", "hbs");
  double s = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(samples);
    s += std::norm(a(t) - b(t));
  }
  return std::sqrt(s / static_cast<double>(samples));
}

}  // namespace hbs
