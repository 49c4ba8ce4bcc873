#include "hbs/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hbs/parallel.hpp"

namespace hbs {

DistanceMatrix distance_matrix(const std::vector<Signature>& items, const std::vector<std::string>& labels,
                               Metric metric, std::size_t welding_samples) {
  if (items.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch, "one label per item is required", "classify");
  if (items.size() < 2) throw Error(ErrorCode::TooFewPoints, "need at least two items", "classify");
  const std::size_t want = metric == Metric::Hbs ? 0 : 1;
  for (const auto& it : items)
    if (it.index() != want) throw Error(ErrorCode::MixedKinds, "item kind does not match the metric", "classify");

  const std::size_t n = items.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    values[p] = metric == Metric::Hbs
                    ? hbs_distance(std::get<HbsField>(items[i]), std::get<HbsField>(items[j]))
                    : welding_distance(std::get<WeldingMap>(items[i]), std::get<WeldingMap>(items[j]), welding_samples);
  });
  DistanceMatrix out{labels, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    out.d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[p];
    out.d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = values[p];
  }
  return out;
}

Embedding mds_embed(const DistanceMatrix& dm, int dim, bool strict) {
  const Eigen::Index n = dm.d.rows();
  if (n == 0 || dm.d.cols() != n) throw Error(ErrorCode::LengthMismatch, "distance matrix must be square", "mds");
  if (dim < 1) throw Error(ErrorCode::DomainViolation, "embedding dimension must be positive", "mds");
  const Eigen::MatrixXd sq = dm.d.array().square().matrix();
  const Eigen::MatrixXd centre = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd b = -0.5 * centre * sq * centre;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (b + b.transpose()));
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::DegenerateSpectrum, "eigen-decomposition failed", "mds");

  Embedding out;
  out.eigenvalues = eig.eigenvalues().reverse();
  out.coords = Eigen::MatrixXd::Zero(n, dim);
  const double scale = std::max(1.0, std::abs(out.eigenvalues[0]));
  for (int c = 0; c < dim; ++c) {
    const double lambda = c < n ? out.eigenvalues[c] : 0.0;
    if (!(lambda > 1e-12 * scale)) {
      ++out.missing_dims;
      continue;
    }
    Eigen::VectorXd v = eig.eigenvectors().col(n - 1 - c);
    // Sign convention: largest-magnitude component positive.
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    out.coords.col(c) = std::sqrt(lambda) * v;
  }
  if (strict && out.missing_dims > 0)
    throw Error(ErrorCode::DegenerateSpectrum, "fewer positive eigenvalues than dimensions", "mds");

  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double e = (out.coords.row(i) - out.coords.row(j)).norm();
      num += (dm.d(i, j) - e) * (dm.d(i, j) - e);
      den += dm.d(i, j) * dm.d(i, j);
    }
  out.stress = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return out;
}

namespace {

struct Run {
  std::vector<int> medoids;
  std::vector<int> assign;
  double cost = 0.0;
  std::vector<double> history;
};

double assign_points(const Eigen::MatrixXd& dist, const std::vector<int>& medoids, std::vector<int>& assign) {
  double cost = 0.0;
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    int best = 0;
    for (std::size_t m = 1; m < medoids.size(); ++m)
      if (dist(i, medoids[m]) < dist(i, medoids[best])) best = static_cast<int>(m);
    assign[static_cast<std::size_t>(i)] = best;
    cost += dist(i, medoids[best]);
  }
  return cost;
}

Run one_run(const Eigen::MatrixXd& dist, int k, std::mt19937_64& rng) {
  const int n = static_cast<int>(dist.rows());
  Run r;
  r.medoids.push_back(std::uniform_int_distribution<int>(0, n - 1)(rng));
  std::vector<double> nearest(static_cast<std::size_t>(n));
  while (static_cast<int>(r.medoids.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int m : r.medoids) best = std::min(best, dist(i, m));
      nearest[static_cast<std::size_t>(i)] = best * best;
      total += best * best;
    }
    int pick = -1;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (int i = 0; i < n && pick < 0; ++i) {
        u -= nearest[static_cast<std::size_t>(i)];
        if (u < 0.0 && nearest[static_cast<std::size_t>(i)] > 0.0) pick = i;
      }
    }
    if (pick < 0)  // all remaining points coincide with a medoid or rounding ran out
      for (int i = 0; i < n && pick < 0; ++i)
        if (std::find(r.medoids.begin(), r.medoids.end(), i) == r.medoids.end()) pick = i;
    r.medoids.push_back(pick);
  }
  r.assign.assign(static_cast<std::size_t>(n), 0);
  r.cost = assign_points(dist, r.medoids, r.assign);
  r.history.push_back(r.cost);
  for (int it = 0; it < 100; ++it) {
    std::vector<int> next = r.medoids;
    for (int c = 0; c < k; ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (r.assign[static_cast<std::size_t>(i)] != c) continue;
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          if (r.assign[static_cast<std::size_t>(j)] == c) s += dist(i, j);
        if (s < best) {
          best = s;
          next[static_cast<std::size_t>(c)] = i;
        }
      }
    }
    std::vector<int> assign(r.assign.size());
    const double cost = assign_points(dist, next, assign);
    if (!(cost < r.cost - 1e-12 * std::max(1.0, r.cost))) break;
    r.medoids = next;
    r.assign = assign;
    r.cost = cost;
    r.history.push_back(cost);
  }
  return r;
}

}  // namespace

Clustering k_medoids(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) throw Error(ErrorCode::KTooLarge, "k must lie between 1 and the number of points", "kmedoids");
  Eigen::MatrixXd dist(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist(i, j) = (points.row(i) - points.row(j)).norm();
  std::mt19937_64 rng(seed);
  Run best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    Run run = one_run(dist, k, rng);
    if (run.cost < best.cost) best = std::move(run);
  }
  // Renumber clusters by first appearance so equal partitions print identically.
  std::vector<int> rename(static_cast<std::size_t>(k), -1);
  int next = 0;
  Clustering out;
  out.labels.resize(static_cast<std::size_t>(n));
  out.medoids.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) {
    int& id = rename[static_cast<std::size_t>(best.assign[static_cast<std::size_t>(i)])];
    if (id < 0) id = next++;
    out.labels[static_cast<std::size_t>(i)] = id;
  }
  for (int c = 0; c < k; ++c) {
    int id = rename[static_cast<std::size_t>(c)];
    if (id < 0) id = next++;
    out.medoids[static_cast<std::size_t>(id)] = best.medoids[static_cast<std::size_t>(c)];
  }
  out.cost = best.cost;
  out.history = best.history;
  return out;
}

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw Error(ErrorCode::LengthMismatch, "cost matrix must be square", "hungarian");
  // Potentials formulation, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) out[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return out;
}

Confusion confusion_and_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw Error(ErrorCode::LengthMismatch, "predicted and truth labels differ in length", "confusion");
  const int kp = *std::max_element(predicted.begin(), predicted.end()) + 1;
  const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  if (*std::min_element(predicted.begin(), predicted.end()) < 0 || *std::min_element(truth.begin(), truth.end()) < 0)
    throw Error(ErrorCode::DomainViolation, "labels must be nonnegative", "confusion");
  const int k = std::max(kp, kt);
  Eigen::MatrixXi table = Eigen::MatrixXi::Zero(k, k);  // rows predicted, columns truth
  for (std::size_t i = 0; i < truth.size(); ++i) ++table(predicted[i], truth[i]);
  const Eigen::MatrixXd cost = -table.cast<double>();
  const std::vector<int> match = hungarian(cost);

  Confusion out;
  out.assignment.assign(static_cast<std::size_t>(kp), -1);
  for (int p = 0; p < kp; ++p) out.assignment[static_cast<std::size_t>(p)] = match[static_cast<std::size_t>(p)] < kt ? match[static_cast<std::size_t>(p)] : -1;
  out.matrix = Eigen::MatrixXi::Zero(kt, k);
  int correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int mapped = match[static_cast<std::size_t>(predicted[i])];
    ++out.matrix(truth[i], mapped);
    if (mapped == truth[i]) ++correct;
  }
  if (k > kt) out.matrix.conservativeResize(kt, kt);
  out.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  return out;
}

namespace {

constexpr int kSynthPoints = 400;

// Radius of a superellipse |x/a|^p + |y/b|^p = 1 along direction t.
double superellipse_radius(double a, double b, double p, double t) {
  const double c = std::abs(std::cos(t)) / a, s = std::abs(std::sin(t)) / b;
  return std::pow(std::pow(c, p) + std::pow(s, p), -1.0 / p);
}

}  // namespace

std::vector<LabeledContour> synth_dataset(const std::vector<ClassSpec>& classes, int per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<LabeledContour> out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const ClassSpec& spec = classes[c];
    for (int m = 0; m < per_class; ++m) {
      const auto jit = [&](double v) { return v * (1.0 + spec.jitter * unit(rng)); };
      const double aspect = jit(spec.aspect), exponent = jit(spec.exponent), depth = jit(spec.depth);
      std::vector<double> weights = spec.arm_weights;
      for (auto& w : weights) w = jit(w);
      std::vector<std::array<double, 3>> modes = spec.modes;
      for (auto& md : modes) {
        md[1] = jit(md[1]);
        md[2] += spec.jitter * unit(rng);
      }
      std::array<double, 4> noise{};
      for (auto& v : noise) v = spec.noise * unit(rng);
      const double angle = kTwoPi * 0.5 * (unit(rng) + 1.0);
      const double scale = std::exp(unit(rng));
      const Complex shift{10.0 * unit(rng), 10.0 * unit(rng)};

      LabeledContour lc;
      lc.label = spec.name + "/" + std::to_string(m);
      lc.class_id = static_cast<int>(c);
      lc.contour.orientation = Orientation::Clockwise;
      for (int i = 0; i < kSynthPoints; ++i) {
        const double t = -kTwoPi * i / kSynthPoints;
        double r = 1.0;
        switch (spec.kind) {
          case ShapeKind::Ellipse:
            r = superellipse_radius(aspect, 1.0, 2.0, t);
            break;
          case ShapeKind::Superellipse:
            r = superellipse_radius(aspect, 1.0, exponent, t);
            break;
          case ShapeKind::Star: {
            // Arm j peaks at angle 2 pi j / arms with its own height.
            const double phase = t * spec.arms / kTwoPi;
            const double pos = phase - std::floor(phase);
            const int arm = static_cast<int>(std::floor(phase)) % spec.arms;
            const int arm_idx = (arm + spec.arms) % spec.arms;
            const double wa = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(arm_idx) % weights.size()];
            const double wb = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(arm_idx + 1) % weights.size()];
            const double w = wa + (wb - wa) * (0.5 - 0.5 * std::cos(kPi * pos));
            r = 1.0 + depth * w * std::cos(spec.arms * t);
            break;
          }
          case ShapeKind::Blob:
            break;
        }
        for (const auto& md : modes) r += md[1] * std::cos(md[0] * t + md[2]);
        r += noise[0] * std::cos(t + noise[1] * 10.0) + noise[2] * std::cos(2.0 * t + noise[3] * 10.0);
        lc.contour.points.push_back(shift + scale * std::polar(r, t + angle));
      }
      out.push_back(std::move(lc));
    }
  }
  return out;
}

std::vector<ClassSpec> default_classes() {
  std::vector<ClassSpec> c(7);
  c[0].name = "ellipse";
  c[0].kind = ShapeKind::Ellipse;
  c[0].aspect = 2.2;
  c[1].name = "slab";
  c[1].kind = ShapeKind::Superellipse;
  c[1].aspect = 1.5;
  c[1].exponent = 4.0;
  c[1].modes = {{{1.0, 0.12, 0.0}}};
  c[2].name = "tripod";
  c[2].kind = ShapeKind::Star;
  c[2].arms = 3;
  c[2].depth = 0.35;
  c[2].arm_weights = {1.0, 0.6, 0.8};
  c[3].name = "star";
  c[3].kind = ShapeKind::Star;
  c[3].arms = 5;
  c[3].depth = 0.3;
  c[3].arm_weights = {1.0, 0.5, 0.8, 0.6, 0.9};
  c[4].name = "kidney";
  c[4].modes = {{{2.0, 0.25, 0.0}}, {{3.0, 0.12, 1.0}}};
  c[5].name = "pear";
  c[5].modes = {{{1.0, 0.3, 0.0}}, {{2.0, 0.1, 0.5}}};
  c[6].name = "lobe";
  c[6].modes = {{{4.0, 0.18, 0.0}}, {{1.0, 0.15, 0.7}}, {{2.0, 0.1, 2.0}}};
  for (auto& s : c) s.jitter = 0.08;
  return c;
}

}  // namespace hbs
