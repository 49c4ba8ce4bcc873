#include "hbs/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hbs/error.hpp"

namespace hbs {

void RunConfig::validate() const {
  if (samples < 3) throw Error(ErrorCode::DomainViolation, "n must be at least 3", "config");
  if (grid_resolution < 2) throw Error(ErrorCode::ResolutionTooSmall, "grid resolution must be at least 2", "config");
  if (!(centering_eps > 0.0)) throw Error(ErrorCode::DomainViolation, "eps must be positive", "config");
  if (recon_samples < 100) throw Error(ErrorCode::DomainViolation, "reconstruction count must be at least 100", "config");
  if (welding_samples < 3) throw Error(ErrorCode::DomainViolation, "welding sample count must be at least 3", "config");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& v, const std::string& where) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw Error(ErrorCode::ParseError, where + ": bad value '" + v + "'", "config");
  return out;
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, where + ": expected key = value", "config");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "n") cfg.samples = parse_number<std::size_t>(val, where);
    else if (key == "grid_m") cfg.grid_resolution = parse_number<int>(val, where);
    else if (key == "eps") cfg.centering_eps = parse_number<double>(val, where);
    else if (key == "recon_n") cfg.recon_samples = parse_number<std::size_t>(val, where);
    else if (key == "welding_n") cfg.welding_samples = parse_number<std::size_t>(val, where);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(val, where);
    else if (key == "jobs") cfg.jobs = parse_number<unsigned>(val, where);
    else if (key == "beltrami_tol") cfg.beltrami_tolerance = parse_number<double>(val, where);
    else if (key == "weld_tol") cfg.weld_tolerance = parse_number<double>(val, where);
    else throw Error(ErrorCode::ParseError, where + ": unknown key '" + key + "'", "config");
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path, "config");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path);
}

}  // namespace hbs
