#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hbs/contour.hpp"
#include "hbs/harmonic.hpp"
#include "hbs/signature.hpp"

namespace hbs {

enum class Metric { Hbs, Welding };

using Signature = std::variant<HbsField, WeldingMap>;

/// Symmetric, nonnegative, zero diagonal.
struct DistanceMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd d;
};

/// Pairwise distances with the selected metric. Throws MixedKinds when an
/// item does not match the metric and LengthMismatch when labels and items
/// differ in count.
DistanceMatrix distance_matrix(const std::vector<Signature>& items, const std::vector<std::string>& labels,
                               Metric metric, std::size_t welding_samples = 1000);

struct Embedding {
  Eigen::MatrixXd coords;           // one row per item
  Eigen::VectorXd eigenvalues;      // of the double-centred matrix, descending
  int missing_dims = 0;             // dimensions left at zero for lack of positive eigenvalues
  double stress = 0.0;              // sqrt(sum (d_ij - e_ij)^2 / sum d_ij^2), 0 for an all-zero matrix
};

/// Classical (Torgerson) scaling. With `strict`, a spectrum with fewer than
/// `dim` positive eigenvalues throws DegenerateSpectrum instead of leaving zeros.
Embedding mds_embed(const DistanceMatrix& d, int dim = 2, bool strict = false);

struct Clustering {
  std::vector<int> labels;       // cluster index per point, numbered by first appearance
  std::vector<int> medoids;      // point index per cluster
  double cost = 0.0;             // sum of distances to the assigned medoid
  std::vector<double> history;   // cost after each iteration of the winning restart
};

/// PAM-style alternating assign / medoid update on Euclidean distances
/// between rows, seeded k-means++ style, best of `restarts`. Throws KTooLarge.
Clustering k_medoids(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts = 10);

struct Confusion {
  Eigen::MatrixXi matrix;        // rows: truth class, columns: matched predicted class
  std::vector<int> assignment;   // predicted cluster -> truth class, -1 if unmatched
  double accuracy = 0.0;
};

/// Optimal one-to-one matching of cluster ids to truth ids. Throws LengthMismatch.
Confusion confusion_and_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Minimum-cost perfect matching on a square cost matrix; returns the column of each row.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

enum class ShapeKind { Ellipse, Superellipse, Star, Blob };

struct ClassSpec {
  std::string name;
  ShapeKind kind = ShapeKind::Blob;
  double aspect = 1.0;           // ellipse / superellipse axis ratio
  double exponent = 2.0;         // superellipse exponent
  int arms = 5;                  // star arm count
  double depth = 0.3;            // star radial modulation
  std::vector<double> arm_weights;          // per-arm amplitude factors, breaking the symmetry
  std::vector<std::array<double, 3>> modes; // blob terms: order, amplitude, phase
  double jitter = 0.1;           // relative parameter jitter
  double noise = 0.02;           // amplitude of random low-order radial perturbation
};

struct LabeledContour {
  std::string label;   // "<class>/<index>"
  int class_id = 0;
  Contour contour;
};

/// Deterministic family generator: `per_class` jittered members of each class,
/// each under a random similarity transform, 400 points, clockwise.
std::vector<LabeledContour> synth_dataset(const std::vector<ClassSpec>& classes, int per_class, std::uint64_t seed);

/// Seven pairwise distinct classes without rotational symmetry of order above 2.
std::vector<ClassSpec> default_classes();

}  // namespace hbs
