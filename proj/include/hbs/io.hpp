#pragma once

#include <string>
#include <vector>

#include "hbs/classify.hpp"
#include "hbs/complexgeom.hpp"
#include "hbs/contour.hpp"
#include "hbs/harmonic.hpp"
#include "hbs/signature.hpp"

namespace hbs {

/// Decimal text that reads back to the same double.
std::string format_real(double v);

/// `x y` per line, `#` comments and blank lines ignored. ParseError names
/// `source:line`. Orientation is detected from the points.
Contour parse_contour(const std::string& text, const std::string& source = "<contour>");
Contour read_contour(const std::string& path);
std::string format_contour(const Contour& c);
void write_contour(const std::string& path, const Contour& c);

/// Binary PGM (P5) or plain PGM (P2); nonzero is foreground.
Mask parse_pgm(const std::string& bytes, const std::string& source = "<pgm>");
Mask read_pgm(const std::string& path);

/// Contour file, or a traced mask when the path ends in `.pgm`.
Contour load_shape(const std::string& path);

/// `M <res> F <faces>` then one `re im` per face.
std::string format_beltrami(const BeltramiField& mu);
BeltramiField parse_beltrami(const std::string& text, const std::string& source = "<field>");

/// `TAU0RES <v> TAU1 <v>` (followed by `AMBIGUOUS 1` when the rotation was
/// left unnormalized), then the field.
std::string format_signature(const HbsField& s);
HbsField parse_signature(const std::string& text, const std::string& source = "<signature>");
void write_signature(const std::string& path, const HbsField& s);
HbsField read_signature(const std::string& path);

/// `M <res> N <nodes>` then one `re im` per node.
std::string format_harmonic(const HarmonicField& h);

/// Header row and column of labels.
std::string format_distance_csv(const DistanceMatrix& d);
/// `label,x,y` per item.
std::string format_embedding_csv(const std::vector<std::string>& labels, const Embedding& e);
/// Header row and column of class names.
std::string format_confusion_csv(const Confusion& c, const std::vector<std::string>& class_names);

/// Polylines of the contours, scaled into a 512 px square.
std::string format_svg(const std::vector<Contour>& contours);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace hbs
