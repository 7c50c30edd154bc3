#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pascaltri/cloud.hpp"
#include "pascaltri/moments.hpp"

namespace pascaltri {

using Matrix2 = std::array<std::array<double, 2>, 2>;

// |mu~_{0,2}| / mu~_{1,1}; nullopt when mu~_{1,1} = 0. Throws ValidationError
// when |mu_{1,0}| is not negligible next to the first-order scale.
std::optional<double> elongation(const MomentTable& centralized);

// 1 - elongation <= tol. Throws ValidationError when elongation is undefined.
bool is_line(const MomentTable& centralized, double tol = 1e-9);

struct FoldResidual {
  int fold = 0;
  double residual = 0.0;
};

// For each fold N in 2..max_fold the largest |mu~_{j,l}| / mu~_{1,1}^{(j+l)/2}
// over entries with (l - j) mod N != 0. all_folds lists every fold checked;
// detected keeps those with residual <= tol (divisors of a detected fold are
// detected too).
struct FrsReport {
  std::vector<FoldResidual> all_folds;
  std::vector<FoldResidual> detected;
};

FrsReport detect_frs(const MomentTable& centralized, int max_fold, double tol = 1e-9);

// Covariance of (x - x0, y - y0) under the pmf rho_k / mu_{0,0}.
Matrix2 covariance(const MomentTable& centralized);

// |lambda_max - lambda_min| / (lambda_max + lambda_min).
double eigen_elongation(const Matrix2& sigma);

// Moments of the image reflected about the line at angle theta:
// mu_{l,j} e^{2i(j-l)theta}.
MomentTable reflect_moments(const MomentTable& table, double theta);

struct ReflectionOptions {
  // Entries with |mu_{j,l}| <= magnitude_tolerance * mu_{1,1}^{(j+l)/2} carry no
  // angular information and are skipped.
  double magnitude_tolerance = 1e-8;
  // Largest axis error implied by any single checked entry.
  double angle_tolerance = 1e-6;
};

// Axis in (-pi/2, pi/2] from the first informative mu_{j,j+1}, verified on all
// informative entries. If that candidate fails, the least-squares fit below is
// verified instead; nullopt when neither passes.
std::optional<double> reflection_axis(const MomentTable& centralized,
                                      const ReflectionOptions& options = {});

// Every axis that passes the same verification, in increasing order.
// Axis minimizing sum |Im(mu^_{j,l} e^{i(l-j)theta})|^2 over the informative
// entries of the scale-normalized table. Unverified; meant for noisy mirrors.
std::optional<double> fit_reflection_axis(const MomentTable& centralized,
                                          const ReflectionOptions& options = {});

// Energy-weighted phase misfit of theta as an angle: asin of the RMS share of
// the informative normalized moments left imaginary after rotating by theta.
// Weak entries, whose phase is mostly noise, barely count.
double reflection_misfit(const MomentTable& centralized, double theta,
                         const ReflectionOptions& options = {});

// The fitted axis when its misfit is within options.angle_tolerance. For
// images that are mirror symmetric up to pixel noise.
std::optional<double> approximate_reflection_axis(const MomentTable& centralized,
                                                  const ReflectionOptions& options = {});

std::vector<double> reflection_axes(const MomentTable& centralized,
                                    const ReflectionOptions& options = {});

// Largest axis error any informative entry implies for the axis theta.
double reflection_residual(const MomentTable& centralized, double theta,
                           const ReflectionOptions& options = {});

// Im(mu~02/mu~11)^2 + Im(mu~03/mu~11^{3/2})^2 + Im(mu~12/mu~11^{3/2})^2.
double horizontal_symmetry_score(const MomentTable& centralized);

enum class AxisVerdict { symmetric_vertical, symmetric, not_symmetric, indeterminate };

std::string to_string(AxisVerdict verdict);

struct AxisClassification {
  AxisVerdict verdict = AxisVerdict::indeterminate;
  std::optional<double> axis;
  std::array<double, 3> angles{};  // from mu~_{1,2}, mu~_{2,3}, mu~_{3,4}
};

// Three-angle rule: vertical when every | |theta_i| - pi/2 | < T, otherwise
// symmetric with axis mean(theta_i) when all pairwise differences are < T.
AxisClassification axis_symmetry_classify(const MomentTable& centralized, double threshold,
                                          double magnitude_tolerance = 1e-12);

struct ClassificationMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  int true_positives = 0;
  int false_positives = 0;
  int true_negatives = 0;
  int false_negatives = 0;
};

ClassificationMetrics classification_metrics(std::span<const bool> predictions,
                                             std::span<const bool> truths);

struct SymmetryReport {
  std::optional<double> elongation;
  bool is_line = false;
  std::vector<FoldResidual> frs_folds;
  std::optional<double> reflection_axis;
  std::vector<double> all_axes;
  Matrix2 covariance{};
  double horizontal_score = 0.0;
  AxisClassification axis;
};

struct SymmetryOptions {
  int order = 8;
  int max_fold = 6;
  double line_tolerance = 1e-9;
  double frs_tolerance = 1e-9;
  double axis_threshold = 0.0698131700797732;  // 4 degrees
  ReflectionOptions reflection;
};

// Centers the cloud and fills every field of the report.
SymmetryReport analyze_symmetry(const PixelCloud& cloud, const SymmetryOptions& options = {});

// Moments of the cloud translated so its centroid is the origin.
MomentTable centered_table(const PixelCloud& cloud, int order);

}  // namespace pascaltri
