#include "hbs/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hbs {

namespace {

Error parse_error(const std::string& source, std::size_t line, const std::string& what) {
  return Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what, "io");
}

bool is_comment_or_blank(const std::string& line) {
  const auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

// Reads whitespace-separated doubles up to an optional `#` comment; fails on
// anything else.
bool parse_reals(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::istringstream in(line.substr(0, line.find('#')));
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) return false;
    out.push_back(v);
  }
  return true;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// Reads `key value key value ...` from one line.
bool keyed_values(const std::string& line, const std::vector<std::string>& keys, std::vector<double>& values) {
  std::istringstream in(line);
  values.clear();
  for (const auto& k : keys) {
    std::string tok, val;
    if (!(in >> tok >> val) || tok != k) return false;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size()) return false;
    values.push_back(v);
  }
  std::string extra;
  return !(in >> extra);
}

std::string format_complex_lines(const std::vector<Complex>& values) {
  std::string out;
  out.reserve(values.size() * 48);
  for (const Complex& v : values) out += format_real(v.real()) + " " + format_real(v.imag()) + "\n";
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path, "io");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path, "io");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path, "io");
}

Contour parse_contour(const std::string& text, const std::string& source) {
  Contour c;
  const auto lines = lines_of(text);
  std::vector<double> v;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    if (!parse_reals(lines[i], v) || v.size() != 2) throw parse_error(source, i + 1, "expected `x y`");
    c.points.emplace_back(v[0], v[1]);
  }
  if (c.size() < 3) throw Error(ErrorCode::TooFewPoints, source + ": contour needs at least 3 points", "io");
  c.orientation = detect_orientation(c.points);
  return c;
}

Contour read_contour(const std::string& path) { return parse_contour(read_text(path), path); }

std::string format_contour(const Contour& c) { return format_complex_lines(c.points); }

void write_contour(const std::string& path, const Contour& c) { write_text(path, format_contour(c)); }

Mask parse_pgm(const std::string& bytes, const std::string& source) {
  std::size_t pos = 0;
  std::size_t line = 1;
  // Header tokens, skipping comments.
  const auto token = [&]() {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        if (bytes[pos] == '\n') ++line;
        ++pos;
      }
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  const auto number = [&](const char* what) {
    const std::string t = token();
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || v < 0)
      throw parse_error(source, line, std::string("bad ") + what);
    return v;
  };
  const std::string magic = token();
  if (magic != "P2" && magic != "P5") throw parse_error(source, line, "expected P2 or P5");
  Mask m;
  m.width = number("width");
  m.height = number("height");
  const int maxval = number("maxval");
  if (m.width == 0 || m.height == 0 || maxval == 0 || maxval > 65535) throw parse_error(source, line, "bad header");
  const std::size_t count = static_cast<std::size_t>(m.width) * static_cast<std::size_t>(m.height);
  m.pixels.resize(count);
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) m.pixels[i] = number("pixel") != 0 ? 1 : 0;
  } else {
    ++pos;  // single whitespace after maxval
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() < pos + count * bpp) throw parse_error(source, line, "truncated raster");
    for (std::size_t i = 0; i < count; ++i) {
      const bool on = bpp == 1 ? bytes[pos + i] != 0 : (bytes[pos + 2 * i] != 0 || bytes[pos + 2 * i + 1] != 0);
      m.pixels[i] = on ? 1 : 0;
    }
  }
  return m;
}

Mask read_pgm(const std::string& path) { return parse_pgm(read_text(path), path); }

Contour load_shape(const std::string& path) {
  const auto ends_with = [&](const std::string& s) {
    if (path.size() < s.size()) return false;
    return std::equal(s.rbegin(), s.rend(), path.rbegin(),
                      [](char a, char b) { return a == std::tolower(static_cast<unsigned char>(b)); });
  };
  if (ends_with(".pgm")) return trace_boundary(read_pgm(path));
  return read_contour(path);
}

std::string format_beltrami(const BeltramiField& mu) {
  if (!mu.grid) throw Error(ErrorCode::GridMismatch, "field has no grid", "io");
  return "M " + std::to_string(mu.grid->resolution) + " F " + std::to_string(mu.values.size()) + "\n" +
         format_complex_lines(mu.values);
}

namespace {

BeltramiField parse_beltrami_lines(const std::vector<std::string>& lines, std::size_t first, const std::string& source) {
  std::size_t i = first;
  while (i < lines.size() && is_comment_or_blank(lines[i])) ++i;
  std::vector<double> v;
  if (i >= lines.size() || !keyed_values(lines[i], {"M", "F"}, v)) throw parse_error(source, i + 1, "expected `M <res> F <faces>`");
  const int res = static_cast<int>(v[0]);
  if (v[0] != res || res < 2) throw parse_error(source, i + 1, "bad resolution");
  BeltramiField mu;
  mu.grid = build_disk_grid(res);
  if (v[1] != static_cast<double>(mu.grid->face_count()))
    throw parse_error(source, i + 1, "face count does not match resolution " + std::to_string(res));
  mu.values.reserve(mu.grid->face_count());
  for (++i; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    if (!parse_reals(lines[i], v) || v.size() != 2) throw parse_error(source, i + 1, "expected `re im`");
    mu.values.emplace_back(v[0], v[1]);
  }
  if (mu.values.size() != mu.grid->face_count())
    throw parse_error(source, lines.size(), "expected " + std::to_string(mu.grid->face_count()) + " faces, found " +
                                                std::to_string(mu.values.size()));
  return mu;
}

}  // namespace

BeltramiField parse_beltrami(const std::string& text, const std::string& source) {
  return parse_beltrami_lines(lines_of(text), 0, source);
}

std::string format_signature(const HbsField& s) {
  std::string head = "TAU0RES " + format_real(s.tau0_residual) + " TAU1 " + format_real(s.tau1);
  if (s.ambiguous) head += " AMBIGUOUS 1";
  return head + "\n" + format_beltrami(s.field);
}

HbsField parse_signature(const std::string& text, const std::string& source) {
  const auto lines = lines_of(text);
  std::size_t i = 0;
  while (i < lines.size() && is_comment_or_blank(lines[i])) ++i;
  HbsField s;
  std::vector<double> v;
  if (i < lines.size() && keyed_values(lines[i], {"TAU0RES", "TAU1", "AMBIGUOUS"}, v)) {
    s.ambiguous = v[2] != 0.0;
  } else if (!(i < lines.size() && keyed_values(lines[i], {"TAU0RES", "TAU1"}, v))) {
    throw parse_error(source, i + 1, "expected `TAU0RES <v> TAU1 <v>`");
  }
  s.tau0_residual = v[0];
  s.tau1 = v[1];
  s.field = parse_beltrami_lines(lines, i + 1, source);
  return s;
}

void write_signature(const std::string& path, const HbsField& s) { write_text(path, format_signature(s)); }

HbsField read_signature(const std::string& path) { return parse_signature(read_text(path), path); }

std::string format_harmonic(const HarmonicField& h) {
  if (!h.grid) throw Error(ErrorCode::GridMismatch, "field has no grid", "io");
  return "M " + std::to_string(h.grid->resolution) + " N " + std::to_string(h.values.size()) + "\n" +
         format_complex_lines(h.values);
}

std::string format_distance_csv(const DistanceMatrix& d) {
  std::string out = "label";
  for (const auto& l : d.labels) out += "," + csv_field(l);
  out += "\n";
  for (Eigen::Index i = 0; i < d.d.rows(); ++i) {
    out += csv_field(d.labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < d.d.cols(); ++j) out += "," + format_real(d.d(i, j));
    out += "\n";
  }
  return out;
}

std::string format_embedding_csv(const std::vector<std::string>& labels, const Embedding& e) {
  std::string out = "label,x,y\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const double y = e.coords.cols() > 1 ? e.coords(row, 1) : 0.0;
    out += csv_field(labels[i]) + "," + format_real(e.coords(row, 0)) + "," + format_real(y) + "\n";
  }
  return out;
}

std::string format_confusion_csv(const Confusion& c, const std::vector<std::string>& class_names) {
  std::string out = "truth\\predicted";
  for (const auto& n : class_names) out += "," + csv_field(n);
  out += "\n";
  for (Eigen::Index i = 0; i < c.matrix.rows(); ++i) {
    out += csv_field(class_names[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < c.matrix.cols(); ++j) out += "," + std::to_string(c.matrix(i, j));
    out += "\n";
  }
  return out;
}

std::string format_svg(const std::vector<Contour>& contours) {
  double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
  for (const auto& c : contours)
    for (const auto& p : c.points) {
      lo_x = std::min(lo_x, p.real());
      hi_x = std::max(hi_x, p.real());
      lo_y = std::min(lo_y, p.imag());
      hi_y = std::max(hi_y, p.imag());
    }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
  const double scale = 480.0 / span;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
  static const char* colours[] = {"black", "crimson", "steelblue", "darkgreen", "darkorange"};
  for (std::size_t k = 0; k < contours.size(); ++k) {
    out += "<polygon fill=\"none\" stroke=\"" + std::string(colours[k % 5]) + "\" points=\"";
    for (const auto& p : contours[k].points) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f,%.3f ", 16.0 + (p.real() - lo_x) * scale, 496.0 - (p.imag() - lo_y) * scale);
      out += buf;
    }
    out += "\"/>\n";
  }
  return out + "</svg>\n";
}

}  // namespace hbs
