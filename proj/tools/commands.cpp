#include "commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include "hbs/classify.hpp"
#include "hbs/config.hpp"
#include "hbs/io.hpp"
#include "hbs/parallel.hpp"
#include "hbs/reconstruct.hpp"
#include "hbs/signature.hpp"

namespace fs = std::filesystem;

namespace hbs::cli {

int exit_code_for(const Error& e) {
  if (e.stage().rfind("config", 0) == 0 || e.stage().rfind("io", 0) == 0) return kParse;
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::EmptyMask:
    case ErrorCode::MultipleComponents:
    case ErrorCode::HoleDetected:
      return kParse;
    case ErrorCode::GridMismatch:
      return kGridMismatch;
    case ErrorCode::KTooLarge:
    case ErrorCode::MixedKinds:
    case ErrorCode::LengthMismatch:
    case ErrorCode::NotNormalized:
      return kProtocol;
    default:
      return kSolver;
  }
}

namespace {

struct Overrides {
  std::string config;
  std::optional<std::size_t> n, recon_n;
  std::optional<int> grid_m;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value file applied before the flags");
    app->add_option("--n", n, "boundary sample count");
    app->add_option("--grid-m", grid_m, "disk grid resolution");
    app->add_option("--eps", eps, "centering tolerance");
    app->add_option("--recon-n", recon_n, "reconstruction point count");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--jobs", jobs, "worker threads, 0 for all cores");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config.empty()) apply_config_file(cfg, config);
    if (n) cfg.samples = *n;
    if (grid_m) cfg.grid_resolution = *grid_m;
    if (eps) cfg.centering_eps = *eps;
    if (recon_n) cfg.recon_samples = *recon_n;
    if (seed) cfg.seed = *seed;
    if (jobs) cfg.jobs = *jobs;
    try {
      cfg.validate();
    } catch (const Error& e) {
      throw e.tagged("config");
    }
    set_worker_count(cfg.jobs);
    return cfg;
  }
};

Metric parse_metric(const std::string& s) {
  if (s == "hbs") return Metric::Hbs;
  if (s == "welding") return Metric::Welding;
  throw Error(ErrorCode::ParseError, "metric must be hbs or welding", "config");
}

struct Dataset {
  std::vector<std::string> labels;       // "<class>/<stem>"
  std::vector<int> truth;
  std::vector<std::string> class_names;  // sorted
  std::vector<Contour> contours;
};

// `dir/<class>/<shape>.txt` or `.pgm`, classes and shapes in lexicographic order.
Dataset load_dataset(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, dir + " is not a directory", "io");
  Dataset d;
  std::vector<fs::path> classes;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) classes.push_back(e.path());
  std::sort(classes.begin(), classes.end());
  for (const auto& c : classes) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(c))
      if (e.is_regular_file() && (e.path().extension() == ".txt" || e.path().extension() == ".pgm"))
        files.push_back(e.path());
    if (files.empty()) continue;
    std::sort(files.begin(), files.end());
    const int id = static_cast<int>(d.class_names.size());
    d.class_names.push_back(c.filename().string());
    for (const auto& f : files) {
      d.labels.push_back(c.filename().string() + "/" + f.stem().string());
      d.truth.push_back(id);
      d.contours.push_back(load_shape(f.string()));
    }
  }
  return d;
}

std::vector<Signature> signatures(const std::vector<Contour>& contours, Metric metric, const RunConfig& cfg,
                                  const std::vector<std::string>& labels) {
  std::vector<std::optional<Signature>> slots(contours.size());
  // Per-shape work runs serially here; inner loops use the worker pool.
  for (std::size_t i = 0; i < contours.size(); ++i) {
    try {
      if (metric == Metric::Hbs)
        slots[i] = compute_hbs(contours[i], cfg);
      else
        slots[i] = baseline_welding(contours[i], cfg);
    } catch (const Error& e) {
      throw Error(e.code(), labels[i] + ": " + e.what(), e.stage());
    }
  }
  std::vector<Signature> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct Classified {
  DistanceMatrix matrix;
  Embedding embedding;
  Clustering clusters;
  Confusion confusion;
};

Classified classify(const std::vector<Signature>& sigs, const std::vector<std::string>& labels,
                    const std::vector<int>& truth, Metric metric, int k, const RunConfig& cfg) {
  Classified c;
  c.matrix = distance_matrix(sigs, labels, metric, cfg.welding_samples);
  c.embedding = mds_embed(c.matrix, 2);
  c.clusters = k_medoids(c.embedding.coords, k, cfg.seed);
  c.confusion = confusion_and_accuracy(c.clusters.labels, truth);
  return c;
}

void write_outputs(const std::string& dir, const std::string& prefix, const Classified& c,
                   const std::vector<int>& truth, const std::vector<std::string>& class_names) {
  fs::create_directories(dir);
  const fs::path base(dir);
  write_text((base / (prefix + "distance.csv")).string(), format_distance_csv(c.matrix));
  write_text((base / (prefix + "embedding.csv")).string(), format_embedding_csv(c.matrix.labels, c.embedding));
  write_text((base / (prefix + "confusion.csv")).string(), format_confusion_csv(c.confusion, class_names));
  std::string labels = "label,truth,cluster\n";
  for (std::size_t i = 0; i < truth.size(); ++i)
    labels += c.matrix.labels[i] + "," + class_names[static_cast<std::size_t>(truth[i])] + "," +
              std::to_string(c.clusters.labels[i]) + "\n";
  write_text((base / (prefix + "labels.csv")).string(), labels);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harmonic Beltrami signatures of planar shapes"};
  app.require_subcommand(1);

  Overrides ov;
  std::string input, output, svg, harmonic_out, second, dir, out_dir, metric_name = "hbs";
  int k = 0, classes = 7, per_class = 8;

  CLI::App* compute = app.add_subcommand("compute", "signature of a contour or mask");
  ov.attach(compute);
  compute->add_option("input", input, "contour text file or .pgm mask")->required();
  compute->add_option("-o,--out", output, "signature file")->required();
  compute->add_option("--harmonic", harmonic_out, "also write the harmonic extension");

  CLI::App* distance = app.add_subcommand("distance", "distance between two signatures");
  ov.attach(distance);
  distance->add_option("a", input, "first signature (or contour for --metric welding)")->required();
  distance->add_option("b", second, "second signature (or contour)")->required();
  distance->add_option("--metric", metric_name, "hbs or welding");

  CLI::App* reconstruct = app.add_subcommand("reconstruct", "shape from a signature");
  ov.attach(reconstruct);
  reconstruct->add_option("signature", input, "signature file")->required();
  reconstruct->add_option("-o,--out", output, "contour file")->required();
  reconstruct->add_option("--svg", svg, "also write an SVG drawing");

  CLI::App* cls = app.add_subcommand("classify", "cluster a labeled contour directory");
  ov.attach(cls);
  cls->add_option("dir", dir, "directory of class/shape.txt files")->required();
  cls->add_option("--k", k, "cluster count (default: number of classes)");
  cls->add_option("--metric", metric_name, "hbs or welding");
  cls->add_option("--out-dir", out_dir, "where the CSV files go")->required();

  CLI::App* bench = app.add_subcommand("bench", "synthetic classification benchmark");
  ov.attach(bench);
  bench->add_option("--classes", classes, "number of classes (at most 7)");
  bench->add_option("--per-class", per_class, "shapes per class");
  bench->add_option("--out-dir", out_dir, "write the dataset and CSV files here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    const RunConfig cfg = ov.resolve();
    if (*compute) {
      const Contour c = load_shape(input);
      const HbsPipeline p = run_pipeline(c, cfg);
      write_signature(output, p.signature);
      if (!harmonic_out.empty()) write_text(harmonic_out, format_harmonic(p.harmonic));
      out << "sup_norm " << format_real(p.signature.field.sup_norm()) << "\n"
          << "tau0_residual " << format_real(p.signature.tau0_residual) << "\n"
          << "tau1 " << format_real(p.signature.tau1) << "\n"
          << "ambiguous " << (p.signature.ambiguous ? 1 : 0) << "\n"
          << "rotation " << format_real(p.rotation) << "\n";
    } else if (*distance) {
      const Metric metric = parse_metric(metric_name);
      double d = 0.0;
      if (metric == Metric::Hbs) {
        d = hbs_distance(read_signature(input), read_signature(second));
      } else {
        d = welding_distance(baseline_welding(load_shape(input), cfg), baseline_welding(load_shape(second), cfg),
                             cfg.welding_samples);
      }
      out << format_real(d) << "\n";
    } else if (*reconstruct) {
      const HbsField s = read_signature(input);
      if (s.field.grid->resolution != cfg.grid_resolution && reconstruct->count("--grid-m"))
        throw Error(ErrorCode::GridMismatch, "signature grid differs from --grid-m", "reconstruct");
      const ReconstructedShape r = reconstruct_shape(s, cfg.recon_samples, cfg);
      write_contour(output, r.boundary);
      if (!svg.empty()) write_text(svg, format_svg({r.boundary}));
      out << "points " << r.boundary.size() << "\n"
          << "beltrami_residual " << format_real(r.interior.residual_rms) << "\n"
          << "pin_zero " << format_real(std::abs(r.pin_zero)) << "\n"
          << "pin_one " << format_real(std::abs(r.pin_one - 1.0)) << "\n";
    } else if (*cls) {
      const Metric metric = parse_metric(metric_name);
      const Dataset d = load_dataset(dir);
      const int kk = k > 0 ? k : static_cast<int>(d.class_names.size());
      if (static_cast<int>(d.class_names.size()) < kk)
        throw Error(ErrorCode::KTooLarge, "fewer classes than clusters", "classify");
      if (static_cast<int>(d.labels.size()) < kk) throw Error(ErrorCode::KTooLarge, "fewer shapes than clusters", "classify");
      const auto sigs = signatures(d.contours, metric, cfg, d.labels);
      const Classified c = classify(sigs, d.labels, d.truth, metric, kk, cfg);
      write_outputs(out_dir, "", c, d.truth, d.class_names);
      out << "accuracy " << format_real(c.confusion.accuracy) << "\n";
    } else if (*bench) {
      auto specs = default_classes();
      if (classes < 1 || classes > static_cast<int>(specs.size()) || per_class < 1)
        throw Error(ErrorCode::DomainViolation, "bench needs 1..7 classes and at least one shape per class", "config");
      specs.resize(static_cast<std::size_t>(classes));
      const auto data = synth_dataset(specs, per_class, cfg.seed);
      std::vector<std::string> labels, names;
      std::vector<int> truth;
      std::vector<Contour> contours;
      for (const auto& s : specs) names.push_back(s.name);
      for (const auto& d : data) {
        labels.push_back(d.label);
        truth.push_back(d.class_id);
        contours.push_back(d.contour);
        if (!out_dir.empty()) {
          const fs::path p = fs::path(out_dir) / "data" / d.label;
          fs::create_directories(p.parent_path());
          write_contour(p.string() + ".txt", d.contour);
        }
      }
      for (const Metric metric : {Metric::Hbs, Metric::Welding}) {
        const char* name = metric == Metric::Hbs ? "hbs" : "welding";
        const auto t0 = std::chrono::steady_clock::now();
        const auto sigs = signatures(contours, metric, cfg, labels);
        const Classified c = classify(sigs, labels, truth, metric, classes, cfg);
        if (!out_dir.empty()) write_outputs(out_dir, std::string(name) + "_", c, truth, names);
        out << name << "_accuracy " << format_real(c.confusion.accuracy) << "\n";
        err << name << "_seconds " << seconds_since(t0) << "\n";
      }
    }
  } catch (const Error& e) {
    err << "error [" << (e.stage().empty() ? "hbs" : e.stage()) << "] " << to_string(e.code()) << ": " << e.what()
        << "\n";
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error [io] " << e.what() << "\n";
    return kParse;
  }
  return kOk;
}

}  // namespace hbs::cli
