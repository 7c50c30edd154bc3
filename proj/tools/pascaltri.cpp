// pascaltri: command-line front end for the moment library.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pascaltri/corpus.hpp"
#include "pascaltri/error.hpp"
#include "pascaltri/experiment.hpp"
#include "pascaltri/image_io.hpp"
#include "pascaltri/invariants.hpp"
#include "pascaltri/moments.hpp"
#include "pascaltri/radon.hpp"
#include "pascaltri/reconstruction.hpp"
#include "pascaltri/serialize.hpp"
#include "pascaltri/symmetry.hpp"

namespace fs = std::filesystem;
using namespace pascaltri;

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;
// Above this order moments of raw pixel coordinates overflow or lose all
// precision, so clouds are centered and scaled to the unit disk first.
constexpr int kNormalizeAbove = 8;

struct Globals {
  std::string input;
  std::string format;
  std::optional<int> order;
  std::string out;
  std::optional<double> tolerance;
  bool no_normalize = false;
  bool y_down = false;
  std::uint64_t seed = 1;
  int jobs = default_jobs();
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string require_input(const Globals& g) {
  if (g.input.empty()) throw ValidationError("--input is required");
  return g.input;
}

PixelCloud load_cloud(const std::string& path, const Globals& g) {
  ImageSource source;
  source.path = path;
  if (!g.format.empty()) source.format = image_format_from_string(g.format);
  source.y_axis = g.y_down ? YAxis::down : YAxis::up;
  return load_image(source);
}

std::optional<AffineRecord> maybe_normalize(PixelCloud& cloud, int order, const Globals& g) {
  if (g.no_normalize || order <= kNormalizeAbove) return std::nullopt;
  auto [normalized, record] = normalize_coordinates(cloud);
  cloud = std::move(normalized);
  return record;
}

std::string complex_text(Complex z) { return format_double(z.real()) + "," + format_double(z.imag()); }

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

std::optional<double> to_double(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

// CSV with x,y in the first two columns (extra columns ignored), optional header.
std::vector<Complex> load_locations(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<Complex> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#' || line == "\r") continue;
    const auto fields = split_fields(line);
    const auto x = fields.size() >= 2 ? to_double(fields[0]) : std::nullopt;
    const auto y = fields.size() >= 2 ? to_double(fields[1]) : std::nullopt;
    if (!x || !y) {
      if (first) {
        first = false;
        continue;
      }
      throw ValidationError(path + ": bad location row '" + line + "'");
    }
    first = false;
    out.emplace_back(*x, *y);
  }
  return out;
}

struct SampleFile {
  std::vector<MomentSample> samples;
  std::optional<AffineRecord> affine;
};

SampleFile load_samples(const std::string& path) {
  std::istringstream in(read_file(path));
  SampleFile file;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (line.front() == '#') {
      std::istringstream meta(line.substr(1));
      std::string key;
      double re = 0.0;
      double im = 0.0;
      double scale = 0.0;
      if (meta >> key && key == "affine") {
        if (!(meta >> re >> im >> scale) || !(scale > 0.0)) {
          throw ValidationError(path + ": malformed '# affine' line");
        }
        file.affine = AffineRecord{Complex(re, im), scale};
      }
      continue;
    }
    const auto fields = split_fields(line);
    std::optional<double> theta;
    std::optional<double> n;
    std::optional<double> value;
    if (fields.size() == 3) {
      theta = to_double(fields[0]);
      n = to_double(fields[1]);
      value = to_double(fields[2]);
    }
    if (!theta || !n || !value) {
      if (first) {
        first = false;
        continue;
      }
      throw ValidationError(path + ": bad sample row '" + line + "'");
    }
    first = false;
    if (*n < 0 || *n != std::floor(*n)) throw ValidationError(path + ": order must be an integer");
    file.samples.push_back({*theta, static_cast<int>(*n), *value});
  }
  return file;
}

ReconstructionOptions reconstruction_options(const Globals& g) {
  ReconstructionOptions o;
  if (g.tolerance) o.consistency_tolerance = *g.tolerance;
  return o;
}

std::set<FrameTag> parse_groups(const std::string& text) {
  std::set<FrameTag> groups;
  if (text == "all") return {FrameTag::translation, FrameTag::scaling, FrameTag::rotation};
  for (const auto& name : split_fields(text)) groups.insert(frame_tag_from_string(name));
  return groups;
}

// --- subcommands -----------------------------------------------------------

void cmd_moments(const Globals& g) {
  PixelCloud cloud = load_cloud(require_input(g), g);
  const int order = g.order.value_or(4);
  const auto affine = maybe_normalize(cloud, order, g);
  nlohmann::json doc = to_json(compute_moment_table(cloud, order));
  if (affine) doc["affine"] = {{"shift", {affine->shift.real(), affine->shift.imag()}}, {"scale", affine->scale}};
  Output out(g.out);
  out.stream() << dump_json(doc) << '\n';
}

void cmd_triangle(const Globals& g, const std::string& invariant) {
  PixelCloud cloud = load_cloud(require_input(g), g);
  const int n = static_cast<int>(cloud.nonzero_count());
  const int order = g.order.value_or(std::max(2 * n - 2, 0));
  PascalTriangle triangle;
  if (invariant.empty()) {
    const auto affine = maybe_normalize(cloud, order, g);
    triangle = pascal_triangle(compute_moment_table(cloud, order), order);
    triangle.affine = affine;
  } else {
    InvariantOptions options;
    if (g.tolerance) options.degeneracy_tolerance = *g.tolerance;
    triangle = invariant_triangle(cloud, order, parse_groups(invariant), options);
  }
  Output out(g.out);
  out.stream() << dump_json(to_json(triangle)) << '\n';
}

void write_cloud(const Globals& g, const PixelCloud& cloud) {
  Output out(g.out);
  write_cloud_csv(out.stream(), cloud);
}

PixelCloud solve_known_locations(std::vector<Complex> locations, const std::vector<Complex>& column,
                                 int l, double mass, const std::optional<AffineRecord>& affine,
                                 const ReconstructionOptions& options) {
  const std::vector<Complex> original = locations;
  if (affine) {
    for (auto& z : locations) z = affine->apply(z);
  }
  const IntensitySolution solved = intensities_from_column(locations, column, l, options);
  print_warnings(solved.warnings);
  std::vector<Pixel> pixels;
  for (std::size_t k = 0; k < original.size(); ++k) {
    double rho = solved.intensities[k];
    if (rho < 0.0) {
      if (rho < -1e-9 * std::max(mass, 1.0)) {
        throw NumericalError("recovered intensity " + format_double(rho) +
                             " is negative; moments and locations are inconsistent");
      }
      rho = 0.0;
    }
    pixels.push_back({original[k], rho});
  }
  return PixelCloud(std::move(pixels));
}

void cmd_reconstruct(const Globals& g, const std::string& locations_path, int column_index) {
  const PascalTriangle triangle = triangle_from_json(nlohmann::json::parse(read_file(require_input(g))));
  const ReconstructionOptions options = reconstruction_options(g);
  if (locations_path.empty()) {
    write_cloud(g, reconstruct_image(triangle, options));
    return;
  }
  const auto locations = load_locations(locations_path);
  const auto column =
      column_from_triangle(triangle, column_index, static_cast<int>(locations.size()));
  const double mass = triangle.rows.empty() ? 0.0 : triangle.rows[0][0].real();
  write_cloud(g, solve_known_locations(locations, column, column_index, mass, triangle.affine, options));
}

struct RadonArgs {
  std::vector<double> thetas;
  std::optional<int> schedule;
  int moments_up_to = 0;
  std::string samples;
  std::string locations;
  std::optional<int> unknown;
};

void cmd_radon(const Globals& g, const RadonArgs& a) {
  const ReconstructionOptions options = reconstruction_options(g);
  if (!a.samples.empty()) {
    const SampleFile file = load_samples(a.samples);
    PixelCloud cloud;
    if (!a.locations.empty()) {
      std::vector<Complex> locations = load_locations(a.locations);
      if (file.affine) {
        for (auto& z : locations) z = file.affine->apply(z);
      }
      cloud = image_from_radon(locations, file.samples, options);
    } else if (a.unknown) {
      cloud = image_from_radon_unknown(*a.unknown, file.samples, options);
    } else {
      throw ValidationError("--samples needs --locations or --unknown-locations");
    }
    if (file.affine) cloud = undo_record(cloud, *file.affine);
    write_cloud(g, cloud);
    return;
  }

  PixelCloud cloud = load_cloud(require_input(g), g);
  std::vector<MomentSample> samples;
  int top = a.moments_up_to;
  if (a.schedule) {
    if (!a.thetas.empty()) throw ValidationError("--theta and --schedule are exclusive");
    top = *a.schedule;
  } else if (a.thetas.empty()) {
    throw ValidationError("radon needs --theta, --schedule or --samples");
  }
  if (top < 0) throw ValidationError("moment order must be nonnegative");
  const auto affine = maybe_normalize(cloud, top, g);
  if (a.schedule) {
    samples = sample_schedule(cloud, top);
  } else {
    for (double theta : a.thetas) {
      for (int n = 0; n <= top; ++n) samples.push_back(radon_moment_direct(cloud, theta, n));
    }
  }
  Output out(g.out);
  if (affine) {
    out.stream() << "# affine " << format_double(affine->shift.real()) << ' '
                 << format_double(affine->shift.imag()) << ' ' << format_double(affine->scale)
                 << '\n';
  }
  out.stream() << "theta,n,value\n";
  for (const auto& s : samples) {
    out.stream() << format_double(s.theta) << ',' << s.n << ',' << format_double(s.value) << '\n';
  }
}

void cmd_equiv(const Globals& g, const std::string& group, const std::vector<std::string>& files) {
  if (files.size() != 2) throw ValidationError("equiv takes exactly two images");
  const PixelCloud a = load_cloud(files[0], g);
  const PixelCloud b = load_cloud(files[1], g);
  OrbitOptions options;
  if (g.tolerance) options.tolerance = *g.tolerance;
  const GroupKind kind = group_from_string(group);
  const OrbitResult r = orbits_equivalent(a, b, kind, options);
  Output out(g.out);
  auto& os = out.stream();
  os << "equivalent," << (r.equivalent ? "yes" : "no") << '\n';
  if (r.witness) {
    if (kind == GroupKind::scaling) {
      os << "witness," << format_double(r.witness->real()) << '\n';
    } else {
      os << "witness," << complex_text(*r.witness) << '\n';
    }
    if (kind == GroupKind::rotation) os << "angle," << format_double(std::arg(*r.witness)) << '\n';
  }
  os << "distance," << format_double(r.distance) << '\n';
  os << "fallback," << (r.used_fallback ? "yes" : "no") << '\n';
}

void cmd_symmetry(const Globals& g, const std::string& mode, std::optional<double> threshold) {
  const PixelCloud cloud = load_cloud(require_input(g), g);
  Output out(g.out);
  auto& os = out.stream();
  os << "field,value\n";
  if (mode == "horizontal") {
    const double r = threshold.value_or(0.07);
    const double score = horizontal_symmetry_score(centered_table(cloud, 3));
    os << "score," << format_double(score) << '\n'
       << "threshold," << format_double(r) << '\n'
       << "symmetric," << (score < r * r ? 1 : 0) << '\n';
  } else if (mode == "axis") {
    const double degrees = threshold.value_or(4.0);
    const auto c = axis_symmetry_classify(centered_table(cloud, 4), degrees * kDegree);
    os << "verdict," << to_string(c.verdict) << '\n';
    if (c.axis) os << "axis," << format_double(*c.axis) << '\n';
    for (std::size_t i = 0; i < 3; ++i) {
      os << "theta" << i + 1 << ',' << format_double(c.angles[i]) << '\n';
    }
  } else if (mode == "frs") {
    const int max_fold = std::max(2, std::min(6, static_cast<int>(cloud.nonzero_count())));
    const int order = std::max(g.order.value_or(max_fold + 2), max_fold + 2);
    const auto report =
        detect_frs(centered_table(cloud, order), max_fold, threshold.value_or(g.tolerance.value_or(1e-9)));
    for (const auto& f : report.all_folds) {
      os << "residual_" << f.fold << ',' << format_double(f.residual) << '\n';
    }
    int best = 1;
    for (const auto& f : report.detected) best = std::max(best, f.fold);
    os << "fold," << best << '\n';
  } else if (mode == "elongation") {
    const MomentTable table = centered_table(cloud, 2);
    const auto e = elongation(table);
    const Matrix2 sigma = covariance(table);
    os << "elongation," << (e ? format_double(*e) : std::string("nan")) << '\n';
    os << "eigen_elongation," << format_double(eigen_elongation(sigma)) << '\n';
    os << "is_line," << (e && 1.0 - *e <= threshold.value_or(1e-9) ? 1 : 0) << '\n';
    os << "cov_xx," << format_double(sigma[0][0]) << '\n'
       << "cov_xy," << format_double(sigma[0][1]) << '\n'
       << "cov_yy," << format_double(sigma[1][1]) << '\n';
  } else if (mode == "reflection") {
    ReflectionOptions options;
    if (threshold) options.angle_tolerance = *threshold;
    const MomentTable table = centered_table(cloud, g.order.value_or(8));
    const auto axes = reflection_axes(table, options);
    os << "axes," << axes.size() << '\n';
    for (double axis : axes) os << "axis," << format_double(axis) << '\n';
    // Best-fit axis for shapes that are only nearly symmetric (pixel noise).
    if (const auto fit = fit_reflection_axis(table, options)) {
      os << "fitted_axis," << format_double(*fit) << '\n'
         << "misfit," << format_double(reflection_misfit(table, *fit, options)) << '\n';
    }
  } else {
    throw ValidationError("unknown symmetry mode '" + mode + "'");
  }
}

std::vector<fs::path> image_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void cmd_classify(const Globals& g, const std::string& dir, const std::string& labels_path,
                  const std::string& sweep_text, const std::string& mode) {
  const auto labels = load_labels(labels_path);
  std::vector<PixelCloud> clouds;
  std::unique_ptr<bool[]> truth;
  std::vector<bool> truth_list;
  for (const auto& path : image_files(dir)) {
    if (path.filename() == fs::path(labels_path).filename()) continue;
    auto it = labels.find(path.filename().string());
    if (it == labels.end()) it = labels.find(path.stem().string());
    if (it == labels.end()) throw ValidationError("missing label for " + path.filename().string());
    clouds.push_back(load_cloud(path.string(), g));
    truth_list.push_back(it->second);
  }
  if (clouds.empty()) throw ValidationError("no .pgm or .csv images in " + dir);
  truth.reset(new bool[truth_list.size()]);
  std::copy(truth_list.begin(), truth_list.end(), truth.get());

  ExperimentConfig config;
  config.mode = experiment_mode_from_string(mode);
  config.sweep = sweep_text.empty()
                     ? (config.mode == ExperimentMode::axis ? Sweep{1.0, 15.0, 1.0} : Sweep{})
                     : parse_sweep(sweep_text);
  config.jobs = g.jobs;
  const ExperimentResult result =
      run_experiment(config, clouds, {truth.get(), truth_list.size()});
  Output out(g.out);
  write_metrics_csv(out.stream(), result);
  std::cerr << "best threshold " << format_double(result.best_threshold) << " accuracy "
            << format_double(result.best_accuracy) << '\n';
}

void cmd_synth(const Globals& g, int count, double jitter, const std::string& mode) {
  if (g.out.empty()) throw ValidationError("synth needs --out DIR");
  const fs::path dir(g.out);
  fs::create_directories(dir);
  const auto corpus = synth_corpus(g.seed, count, jitter, axis_mode_from_string(mode));
  std::ofstream labels(dir / "labels.csv", std::ios::binary);
  labels << "name,label,axis\n";
  for (const auto& entry : corpus) {
    save_cloud_csv(dir / (entry.name + ".csv"), entry.cloud);
    labels << entry.name << ".csv," << (entry.symmetric ? 1 : 0) << ','
           << (entry.axis ? format_double(*entry.axis) : std::string()) << '\n';
  }
  if (!labels) throw ValidationError("cannot write " + (dir / "labels.csv").string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex-moment Pascal triangles: moments, reconstruction, invariants, symmetry"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--input,-i", g.input, "Input image (PGM or x,y,intensity CSV) or triangle JSON");
  app.add_option("--format", g.format, "pgm-ascii, pgm-binary or csv-points");
  app.add_option("--order,-r", g.order, "Moment / triangle order");
  app.add_option("--out,-o", g.out, "Output file (stdout when omitted) or directory for synth");
  app.add_option("--tolerance", g.tolerance, "Comparison or consistency tolerance");
  app.add_flag("--no-normalize", g.no_normalize, "Keep raw coordinates even at high order");
  app.add_flag("--y-down", g.y_down, "PGM rows grow downward (image convention)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--jobs,-j", g.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* moments = app.add_subcommand("moments", "Complex moment table as JSON");

  std::string invariant;
  auto* triangle = app.add_subcommand("triangle", "Pascal triangle as JSON");
  triangle->add_option("--invariant", invariant, "trans,scale,rotate (any subset) or all");

  std::string locations_path;
  int column_index = 0;
  auto* reconstruct = app.add_subcommand("reconstruct", "Rebuild an image from triangle JSON");
  reconstruct->add_option("--locations", locations_path, "Known pixel locations CSV (x,y)");
  reconstruct->add_option("--column", column_index, "Triangle column used with --locations")
      ->check(CLI::NonNegativeNumber);

  RadonArgs radon_args;
  auto* radon = app.add_subcommand("radon", "Projection moments, or an image from them");
  radon->add_option("--theta", radon_args.thetas, "Projection angle in radians (repeatable)");
  radon->add_option("--schedule", radon_args.schedule,
                    "Orders 0..n, each on its angles j*pi/(order+2)");
  radon->add_option("--moments-up-to", radon_args.moments_up_to, "Highest order with --theta");
  radon->add_option("--samples", radon_args.samples, "theta,n,value CSV to reconstruct from");
  radon->add_option("--locations", radon_args.locations, "Known pixel locations CSV (x,y)");
  radon->add_option("--unknown-locations", radon_args.unknown, "Upper bound N on the pixel count");

  std::string group;
  std::vector<std::string> equiv_files;
  auto* equiv = app.add_subcommand("equiv", "Are two images in the same group orbit?");
  equiv->add_option("--group", group, "translation, scaling or rotation")->required();
  equiv->add_option("images", equiv_files, "Two images")->expected(2);

  std::string symmetry_mode = "horizontal";
  std::optional<double> threshold;
  auto* symmetry = app.add_subcommand("symmetry", "Symmetry measures of one image");
  symmetry->add_option("--mode", symmetry_mode, "horizontal, axis, frs, elongation or reflection");
  symmetry->add_option("--threshold", threshold,
                       "r for horizontal, degrees for axis, residual bound for frs");

  std::string classify_dir;
  std::string labels_path;
  std::string sweep_text;
  std::string classify_mode = "horizontal";
  auto* classify = app.add_subcommand("classify", "Threshold sweep over a labelled directory");
  classify->add_option("--dir", classify_dir, "Directory of images")->required();
  classify->add_option("--labels", labels_path, "name,label CSV")->required();
  classify->add_option("--sweep", sweep_text, "lo:hi:step");
  classify->add_option("--mode", classify_mode, "horizontal or axis");

  int synth_count = 40;
  double synth_jitter = 0.0;
  std::string synth_axis = "random";
  auto* synth = app.add_subcommand("synth", "Write a labelled synthetic corpus");
  synth->add_option("--count", synth_count, "Number of clouds (even)");
  synth->add_option("--jitter", synth_jitter, "Coordinate noise relative to the extent");
  synth->add_option("--axis-mode", synth_axis, "horizontal or random");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*moments) cmd_moments(g);
    if (*triangle) cmd_triangle(g, invariant);
    if (*reconstruct) cmd_reconstruct(g, locations_path, column_index);
    if (*radon) cmd_radon(g, radon_args);
    if (*equiv) cmd_equiv(g, group, equiv_files);
    if (*symmetry) cmd_symmetry(g, symmetry_mode, threshold);
    if (*classify) cmd_classify(g, classify_dir, labels_path, sweep_text, classify_mode);
    if (*synth) cmd_synth(g, synth_count, synth_jitter, synth_axis);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
