#include "pascaltri/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "pascaltri/error.hpp"
#include "pascaltri/image_io.hpp"
#include "pascaltri/serialize.hpp"

namespace pascaltri {

namespace {

double parse_real(const std::string& text, const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ValidationError(std::string("bad ") + what + " '" + text + "'");
  }
  return value;
}

std::string trim_copy(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string metric_text(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string("nan");
}

}  // namespace

ExperimentMode experiment_mode_from_string(const std::string& name) {
  if (name == "horizontal") return ExperimentMode::horizontal;
  if (name == "axis") return ExperimentMode::axis;
  throw ValidationError("unknown experiment mode '" + name + "'");
}

std::vector<double> Sweep::values() const {
  if (!(lo < hi)) throw ValidationError("sweep needs lo < hi");
  if (!(step > 0.0)) throw ValidationError("sweep needs step > 0");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

Sweep parse_sweep(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw ValidationError("sweep must look like lo:hi:step, got '" + text + "'");
  }
  Sweep sweep{parse_real(text.substr(0, first), "sweep lo"),
              parse_real(text.substr(first + 1, second - first - 1), "sweep hi"),
              parse_real(text.substr(second + 1), "sweep step")};
  static_cast<void>(sweep.values());  // validates
  return sweep;
}

std::vector<bool> classify_image(const PixelCloud& cloud, const ExperimentConfig& config) {
  const std::vector<double> thresholds = config.sweep.values();
  std::vector<bool> out;
  out.reserve(thresholds.size());
  const MomentTable table = centered_table(cloud, 4);
  if (!(table(1, 1).real() > 0.0)) {
    out.assign(thresholds.size(), false);
    return out;
  }
  if (config.mode == ExperimentMode::horizontal) {
    const double score = horizontal_symmetry_score(table);
    for (double r : thresholds) out.push_back(score < r * r);
  } else {
    for (double degrees : thresholds) {
      const auto verdict =
          axis_symmetry_classify(table, degrees * std::numbers::pi / 180.0).verdict;
      out.push_back(verdict == AxisVerdict::symmetric || verdict == AxisVerdict::symmetric_vertical);
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const PixelCloud> clouds, std::span<const bool> labels) {
  if (labels.size() != clouds.size()) {
    throw ValidationError("labels cover " + std::to_string(labels.size()) + " of " +
                          std::to_string(clouds.size()) + " images");
  }
  if (config.jobs < 1) throw ValidationError("jobs must be at least 1");
  const std::vector<double> thresholds = config.sweep.values();
  std::vector<std::vector<bool>> predictions(clouds.size());
  std::vector<std::exception_ptr> failures(clouds.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < clouds.size(); k = next++) {
      try {
        predictions[k] = classify_image(clouds[k], config);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(config.jobs, 1, std::max<int>(1, static_cast<int>(clouds.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ExperimentResult result;
  result.best_accuracy = -1.0;
  std::vector<bool> truth(labels.begin(), labels.end());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    std::vector<bool> column;
    for (const auto& p : predictions) column.push_back(p[t]);
    // std::vector<bool> has no contiguous storage; copy into plain arrays.
    const std::unique_ptr<bool[]> pred(new bool[column.size()]);
    const std::unique_ptr<bool[]> real(new bool[truth.size()]);
    std::copy(column.begin(), column.end(), pred.get());
    std::copy(truth.begin(), truth.end(), real.get());
    MetricsRow row{thresholds[t], classification_metrics({pred.get(), column.size()},
                                                         {real.get(), truth.size()})};
    const double accuracy = row.metrics.accuracy.value_or(0.0);
    if (accuracy > result.best_accuracy) {
      result.best_accuracy = accuracy;
      result.best_threshold = row.threshold;
    }
    result.rows.push_back(row);
  }
  return result;
}

void write_metrics_csv(std::ostream& out, const ExperimentResult& result) {
  out << "threshold,precision,recall,accuracy\n";
  for (const auto& row : result.rows) {
    out << format_double(row.threshold) << ',' << metric_text(row.metrics.precision) << ','
        << metric_text(row.metrics.recall) << ',' << metric_text(row.metrics.accuracy) << '\n';
  }
}

std::map<std::string, bool> load_labels(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::map<std::string, bool> labels;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_copy(line);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string name;
    std::string value;
    std::getline(fields, name, ',');
    std::getline(fields, value, ',');
    name = trim_copy(name);
    value = trim_copy(value);
    for (char& c : value) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    bool label = false;
    if (value == "1" || value == "true" || value == "symmetric") {
      label = true;
    } else if (value == "0" || value == "false" || value == "asymmetric") {
      label = false;
    } else if (first) {
      first = false;
      continue;  // header
    } else {
      throw ValidationError(path.string() + ": line " + std::to_string(line_no) +
                            ": bad label '" + value + "'");
    }
    first = false;
    if (!labels.emplace(name, label).second) {
      throw ValidationError(path.string() + ": duplicate label for '" + name + "'");
    }
  }
  return labels;
}

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace pascaltri
