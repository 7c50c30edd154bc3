#include "pascaltri/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pascaltri/error.hpp"

namespace pascaltri {

namespace {

constexpr double kPi = std::numbers::pi;

double mu11_of(const MomentTable& table) { return table.at(1, 1).real(); }

void require_centralized(const MomentTable& table) {
  const double mass = table.at(0, 0).real();
  const double spread = std::sqrt(std::max(mass, 0.0) * std::max(mu11_of(table), 0.0));
  if (std::abs(table.at(1, 0)) > 1e-8 * spread + 1e-300) {
    throw ValidationError("moment table is not centralized (mu_{1,0} is not zero)");
  }
}

// Wraps an axis angle into (-pi/2, pi/2].
double wrap_axis(double angle) {
  double w = std::remainder(angle, kPi);
  if (w <= -kPi / 2) w += kPi;
  return w;
}

}  // namespace

std::optional<double> elongation(const MomentTable& centralized) {
  require_centralized(centralized);
  const double mu11 = mu11_of(centralized);
  if (!(mu11 > 0.0)) return std::nullopt;
  return std::abs(centralized.at(0, 2)) / mu11;
}

bool is_line(const MomentTable& centralized, double tol) {
  const auto e = elongation(centralized);
  if (!e) throw ValidationError("elongation is undefined for a single point at the centroid");
  return 1.0 - *e <= tol;
}

FrsReport detect_frs(const MomentTable& centralized, int max_fold, double tol) {
  if (max_fold < 2) throw ValidationError("max_fold must be at least 2");
  if (centralized.order() < max_fold + 2) {
    throw ValidationError("fold detection up to " + std::to_string(max_fold) +
                          " needs a moment table of order " + std::to_string(max_fold + 2));
  }
  const double mu11 = mu11_of(centralized);
  if (!(mu11 > 0.0)) throw ValidationError("fold detection needs mu_{1,1} > 0");

  FrsReport report;
  for (int fold = 2; fold <= max_fold; ++fold) {
    double worst = 0.0;
    for (int j = 0; j <= centralized.order(); ++j) {
      for (int l = 0; l <= centralized.order(); ++l) {
        if (!centralized.has(j, l) || (l - j) % fold == 0) continue;
        worst = std::max(worst, std::abs(centralized(j, l)) / std::pow(mu11, 0.5 * (j + l)));
      }
    }
    report.all_folds.push_back({fold, worst});
    if (worst <= tol) report.detected.push_back({fold, worst});
  }
  return report;
}

Matrix2 covariance(const MomentTable& centralized) {
  const double mass = centralized.at(0, 0).real();
  if (!(mass > 0.0)) throw ValidationError("covariance needs positive total intensity");
  const double mu11 = mu11_of(centralized);
  const Complex mu02 = centralized.at(0, 2);
  const double off = -mu02.imag() / (2.0 * mass);
  return {{{(mu11 + mu02.real()) / (2.0 * mass), off}, {off, (mu11 - mu02.real()) / (2.0 * mass)}}};
}

double eigen_elongation(const Matrix2& sigma) {
  const double trace = sigma[0][0] + sigma[1][1];
  if (!(trace > 0.0)) throw ValidationError("covariance matrix has zero trace");
  const double half_gap = std::hypot(0.5 * (sigma[0][0] - sigma[1][1]), sigma[0][1]);
  const double lambda_max = 0.5 * trace + half_gap;
  const double lambda_min = 0.5 * trace - half_gap;
  return std::abs(lambda_max - lambda_min) / (lambda_max + lambda_min);
}

MomentTable reflect_moments(const MomentTable& table, double theta) {
  MomentTable out(table.order(), table.max_degree());
  for (int j = 0; j <= table.order(); ++j) {
    for (int l = 0; l <= table.order(); ++l) {
      if (table.has(j, l)) out(j, l) = table(l, j) * std::polar(1.0, 2.0 * (j - l) * theta);
    }
  }
  return out;
}

double reflection_residual(const MomentTable& centralized, double theta,
                           const ReflectionOptions& options) {
  const double mu11 = mu11_of(centralized);
  double worst = 0.0;
  for (int j = 0; j <= centralized.order(); ++j) {
    for (int l = j + 1; l <= centralized.order(); ++l) {
      if (!centralized.has(j, l)) continue;
      const Complex mu = centralized(j, l);
      const double magnitude = std::abs(mu);
      if (magnitude <= options.magnitude_tolerance * std::pow(mu11, 0.5 * (j + l))) continue;
      const int k = l - j;
      // Im(mu e^{ik theta}) = 0 on a symmetry axis; convert the phase error
      // into an axis error.
      const double sine = std::abs((mu * std::polar(1.0, k * theta)).imag()) / magnitude;
      worst = std::max(worst, std::asin(std::min(sine, 1.0)) / k);
    }
  }
  return worst;
}

namespace {

struct AxisTerm {
  Complex mu;  // scale-normalized
  int k = 0;
};

std::vector<AxisTerm> informative_terms(const MomentTable& centralized, double mu11,
                                        const ReflectionOptions& options) {
  std::vector<AxisTerm> terms;
  for (int j = 0; j <= centralized.order(); ++j) {
    for (int l = j + 1; l <= centralized.order(); ++l) {
      if (!centralized.has(j, l)) continue;
      const Complex mu = centralized(j, l) / std::pow(mu11, 0.5 * (j + l));
      if (std::abs(mu) <= options.magnitude_tolerance) continue;
      terms.push_back({mu, l - j});
    }
  }
  return terms;
}

// sum |Im(mu e^{ik theta})|^2 over the terms: zero on an exact axis, and
// dominated by the strong entries when the symmetry is only approximate.
double axis_misfit(const std::vector<AxisTerm>& terms, double theta) {
  double sum = 0.0;
  for (const auto& t : terms) {
    const double r = (t.mu * std::polar(1.0, t.k * theta)).imag();
    sum += r * r;
  }
  return sum;
}

}  // namespace

std::optional<double> fit_reflection_axis(const MomentTable& centralized,
                                          const ReflectionOptions& options) {
  require_centralized(centralized);
  const double mu11 = mu11_of(centralized);
  if (!(mu11 > 0.0)) return std::nullopt;
  const auto terms = informative_terms(centralized, mu11, options);
  if (terms.empty()) return std::nullopt;
  // Start from the best of the per-entry candidates, then Gauss-Newton.
  double best = 0.0, best_misfit = INFINITY;
  for (const auto& t : terms) {
    for (int m = 0; m < t.k; ++m) {
      const double c = (-std::arg(t.mu) + m * kPi) / t.k;
      const double f = axis_misfit(terms, c);
      if (f < best_misfit) {
        best_misfit = f;
        best = c;
      }
    }
  }
  for (int iter = 0; iter < 50; ++iter) {
    double num = 0.0, den = 0.0;
    for (const auto& t : terms) {
      const Complex rotated = t.mu * std::polar(1.0, t.k * best);
      num += rotated.imag() * t.k * rotated.real();
      den += std::pow(t.k * rotated.real(), 2);
    }
    if (!(den > 0.0)) break;
    const double step = -num / den;
    const double next = best + step;
    if (!(axis_misfit(terms, next) < best_misfit)) break;
    best = next;
    best_misfit = axis_misfit(terms, next);
    if (std::abs(step) <= 1e-15) break;
  }
  return wrap_axis(best);
}

double reflection_misfit(const MomentTable& centralized, double theta,
                         const ReflectionOptions& options) {
  require_centralized(centralized);
  const double mu11 = mu11_of(centralized);
  if (!(mu11 > 0.0)) return kPi / 2;
  const auto terms = informative_terms(centralized, mu11, options);
  double energy = 0.0;
  for (const auto& t : terms) energy += std::norm(t.mu);
  if (!(energy > 0.0)) return kPi / 2;
  return std::asin(std::min(1.0, std::sqrt(axis_misfit(terms, theta) / energy)));
}

std::optional<double> approximate_reflection_axis(const MomentTable& centralized,
                                                  const ReflectionOptions& options) {
  const auto fitted = fit_reflection_axis(centralized, options);
  if (!fitted || reflection_misfit(centralized, *fitted, options) > options.angle_tolerance) {
    return std::nullopt;
  }
  return fitted;
}

std::optional<double> reflection_axis(const MomentTable& centralized,
                                      const ReflectionOptions& options) {
  require_centralized(centralized);
  const double mu11 = mu11_of(centralized);
  if (!(mu11 > 0.0)) return std::nullopt;
  double axis = kPi / 2;
  for (int j = 0; centralized.has(j, j + 1); ++j) {
    const Complex mu = centralized(j, j + 1);
    if (std::abs(mu.real()) > options.magnitude_tolerance * std::pow(mu11, 0.5 * (2 * j + 1))) {
      axis = std::atan(-mu.imag() / mu.real());
      break;
    }
  }
  if (reflection_residual(centralized, axis, options) <= options.angle_tolerance) {
    return wrap_axis(axis);
  }
  // On noisy data the first entry can be weak enough to point the wrong way.
  // Fit the axis to every informative entry instead.
  const auto fitted = fit_reflection_axis(centralized, options);
  if (!fitted || reflection_residual(centralized, *fitted, options) > options.angle_tolerance) {
    return std::nullopt;
  }
  return wrap_axis(*fitted);
}

std::vector<double> reflection_axes(const MomentTable& centralized,
                                    const ReflectionOptions& options) {
  require_centralized(centralized);
  const double mu11 = mu11_of(centralized);
  if (!(mu11 > 0.0)) return {};
  std::vector<double> candidates;
  for (int j = 0; j <= centralized.order(); ++j) {
    for (int l = j + 1; l <= centralized.order(); ++l) {
      if (!centralized.has(j, l)) continue;
      const Complex mu = centralized(j, l);
      if (std::abs(mu) <= options.magnitude_tolerance * std::pow(mu11, 0.5 * (j + l))) continue;
      const int k = l - j;
      for (int m = 0; m < k; ++m) {
        candidates.push_back(wrap_axis((-std::arg(mu) + m * kPi) / k));
      }
    }
  }
  if (candidates.empty()) candidates.push_back(kPi / 2);
  std::vector<double> axes;
  for (double c : candidates) {
    if (reflection_residual(centralized, c, options) > options.angle_tolerance) continue;
    const bool seen = std::any_of(axes.begin(), axes.end(), [&](double a) {
      const double gap = std::abs(wrap_axis(a - c));
      return gap <= std::max(options.angle_tolerance, 1e-12) * 10.0;
    });
    if (!seen) axes.push_back(c);
  }
  std::sort(axes.begin(), axes.end());
  return axes;
}

double horizontal_symmetry_score(const MomentTable& centralized) {
  const double mu11 = mu11_of(centralized);
  if (!(mu11 > 0.0)) throw NumericalError("horizontal score needs mu~_{1,1} > 0");
  const double a = (centralized.at(0, 2) / mu11).imag();
  const double b = (centralized.at(0, 3) / std::pow(mu11, 1.5)).imag();
  const double c = (centralized.at(1, 2) / std::pow(mu11, 1.5)).imag();
  return a * a + b * b + c * c;
}

std::string to_string(AxisVerdict verdict) {
  switch (verdict) {
    case AxisVerdict::symmetric_vertical: return "symmetric-vertical";
    case AxisVerdict::symmetric: return "symmetric";
    case AxisVerdict::not_symmetric: return "not-symmetric";
    case AxisVerdict::indeterminate: return "indeterminate";
  }
  return "unknown";
}

AxisClassification axis_symmetry_classify(const MomentTable& centralized, double threshold,
                                          double magnitude_tolerance) {
  if (!centralized.has(3, 4)) {
    throw ValidationError("axis classification needs moments up to mu_{3,4}");
  }
  const double mu11 = mu11_of(centralized);
  AxisClassification out;
  if (!(mu11 > 0.0)) return out;
  for (int i = 0; i < 3; ++i) {
    const Complex mu = centralized(i + 1, i + 2);
    const double floor = magnitude_tolerance * std::pow(mu11, 0.5 * (2 * i + 3));
    if (std::abs(mu.real()) <= floor && std::abs(mu.imag()) <= floor) return out;
    out.angles[static_cast<std::size_t>(i)] = std::atan(-mu.imag() / mu.real());
  }
  const auto& t = out.angles;
  auto near_vertical = [&](double a) { return std::abs(std::abs(a) - kPi / 2) < threshold; };
  if (near_vertical(t[0]) && near_vertical(t[1]) && near_vertical(t[2])) {
    out.verdict = AxisVerdict::symmetric_vertical;
    out.axis = kPi / 2;
  } else if (std::abs(t[0] - t[1]) < threshold && std::abs(t[1] - t[2]) < threshold &&
             std::abs(t[2] - t[0]) < threshold) {
    out.verdict = AxisVerdict::symmetric;
    out.axis = (t[0] + t[1] + t[2]) / 3.0;
  } else {
    out.verdict = AxisVerdict::not_symmetric;
  }
  return out;
}

ClassificationMetrics classification_metrics(std::span<const bool> predictions,
                                             std::span<const bool> truths) {
  if (predictions.size() != truths.size()) {
    throw ValidationError("predictions and truths differ in length");
  }
  ClassificationMetrics m;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    if (predictions[k] && truths[k]) ++m.true_positives;
    else if (predictions[k]) ++m.false_positives;
    else if (truths[k]) ++m.false_negatives;
    else ++m.true_negatives;
  }
  const int tp = m.true_positives;
  if (tp + m.false_positives > 0) m.precision = static_cast<double>(tp) / (tp + m.false_positives);
  if (tp + m.false_negatives > 0) m.recall = static_cast<double>(tp) / (tp + m.false_negatives);
  if (!predictions.empty()) {
    m.accuracy = static_cast<double>(tp + m.true_negatives) / static_cast<double>(predictions.size());
  }
  return m;
}

MomentTable centered_table(const PixelCloud& cloud, int order) {
  const double mass = cloud.total_intensity();
  if (!(mass > 0.0)) throw ValidationError("cannot center an image with zero total intensity");
  Complex centroid{0.0, 0.0};
  for (const auto& p : cloud.pixels()) centroid += p.location * p.intensity;
  centroid /= mass;
  MomentTable table = compute_moment_table(cloud.translated(-centroid), std::max(order, 1));
  table(1, 0) = 0.0;
  table(0, 1) = 0.0;
  return table;
}

SymmetryReport analyze_symmetry(const PixelCloud& cloud, const SymmetryOptions& options) {
  const int max_fold =
      std::min(options.max_fold, static_cast<int>(cloud.nonzero_count()));
  const int order = std::max({options.order, 4, max_fold + 2});
  const MomentTable table = centered_table(cloud, order);

  SymmetryReport report;
  report.covariance = covariance(table);
  report.elongation = elongation(table);
  if (!report.elongation) return report;
  report.is_line = 1.0 - *report.elongation <= options.line_tolerance;
  if (max_fold >= 2) report.frs_folds = detect_frs(table, max_fold, options.frs_tolerance).detected;
  report.reflection_axis = reflection_axis(table, options.reflection);
  report.all_axes = reflection_axes(table, options.reflection);
  report.horizontal_score = horizontal_symmetry_score(table);
  report.axis = axis_symmetry_classify(table, options.axis_threshold);
  return report;
}

}  // namespace pascaltri
