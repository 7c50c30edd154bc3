#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pascaltri/cloud.hpp"
#include "pascaltri/symmetry.hpp"

namespace pascaltri {

enum class ExperimentMode { horizontal, axis };

ExperimentMode experiment_mode_from_string(const std::string& name);

struct Sweep {
  double lo = 0.005;
  double hi = 0.15;
  double step = 0.005;

  // lo + k*step for k = 0..floor((hi - lo)/step); a 1e-9 slack absorbs
  // rounding in the quotient.
  [[nodiscard]] std::vector<double> values() const;
};

// Parses "lo:hi:step".
Sweep parse_sweep(const std::string& text);

struct ExperimentConfig {
  Sweep sweep;
  // horizontal: r, predict symmetric when score < r^2.
  // axis: T in degrees, predict symmetric unless the verdict is
  // not-symmetric or indeterminate.
  ExperimentMode mode = ExperimentMode::horizontal;
  int jobs = 1;
};

struct MetricsRow {
  double threshold = 0.0;
  ClassificationMetrics metrics;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  double best_threshold = 0.0;  // first threshold with the highest accuracy
  double best_accuracy = 0.0;
};

// Images are scored concurrently on `jobs` threads; results are gathered in
// input order, so the output does not depend on jobs.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const PixelCloud> clouds, std::span<const bool> labels);

// Predictions of one image across every threshold of the sweep.
std::vector<bool> classify_image(const PixelCloud& cloud, const ExperimentConfig& config);

// Header threshold,precision,recall,accuracy; undefined metrics print as nan.
void write_metrics_csv(std::ostream& out, const ExperimentResult& result);

// CSV rows name,label with label in {1,0,true,false,symmetric,asymmetric};
// an optional header and extra columns are ignored.
std::map<std::string, bool> load_labels(const std::filesystem::path& path);

int default_jobs();

}  // namespace pascaltri
