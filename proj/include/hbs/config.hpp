#pragma once

#include <cstdint>
#include <string>

namespace hbs {

struct RunConfig {
  std::size_t samples = 200;      // boundary points fed to the zipper
  int grid_resolution = 100;      // M
  double centering_eps = 1e-5;
  std::size_t recon_samples = 1000;
  std::size_t welding_samples = 1000;
  std::uint64_t seed = 1;
  unsigned jobs = 0;              // 0: logical cores
  double beltrami_tolerance = 0.05;  // RMS residual allowed in reconstruction
  double weld_tolerance = 1e-3;      // RMS boundary mismatch allowed in geodesic_weld

  /// Throws DomainViolation when a field is outside its valid range.
  void validate() const;
};

/// Applies `key = value` lines ('#' starts a comment). Keys: n, grid_m, eps,
/// recon_n, welding_n, seed, jobs, beltrami_tol, weld_tol. Unknown keys and
/// malformed values raise ParseError naming the line.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& source = "<config>");

}  // namespace hbs
