#include "pascaltri/radon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "pascaltri/error.hpp"

namespace pascaltri {

namespace {

constexpr double kPi = std::numbers::pi;

double reduce_angle(double theta) { return std::remainder(theta, 2.0 * kPi); }

std::vector<MomentSample> samples_of_order(std::span<const MomentSample> samples, int n) {
  std::vector<MomentSample> out;
  for (const auto& s : samples) {
    if (s.n == n) out.push_back(s);
  }
  return out;
}

std::vector<Pixel> clamp_intensities(std::span<const Complex> locations,
                                     const std::vector<double>& intensities, double mass) {
  std::vector<Pixel> pixels;
  for (std::size_t k = 0; k < locations.size(); ++k) {
    double rho = intensities[k];
    if (rho < 0.0) {
      if (rho < -1e-9 * std::max(mass, 1.0)) {
        throw NumericalError("recovered intensity is negative; samples are inconsistent");
      }
      rho = 0.0;
    }
    pixels.push_back({locations[k], rho});
  }
  return pixels;
}

}  // namespace

double RadonProjection::total_mass() const {
  double total = 0.0;
  for (const auto& b : bins) total += b.mass;
  return total;
}

RadonProjection project(const PixelCloud& cloud, double theta, double bin_tolerance) {
  if (bin_tolerance < 0.0) throw ValidationError("bin tolerance must be nonnegative");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<RadonBin> offsets;
  offsets.reserve(cloud.size());
  for (const auto& p : cloud.pixels()) {
    offsets.push_back({p.location.real() * c + p.location.imag() * s, p.intensity});
  }
  std::stable_sort(offsets.begin(), offsets.end(),
                   [](const RadonBin& a, const RadonBin& b) { return a.offset < b.offset; });

  RadonProjection out;
  out.theta = theta;
  std::size_t start = 0;
  while (start < offsets.size()) {
    std::size_t end = start + 1;
    while (end < offsets.size() && offsets[end].offset - offsets[end - 1].offset <= bin_tolerance) {
      ++end;
    }
    RadonBin bin;
    for (std::size_t k = start; k < end; ++k) {
      bin.offset += offsets[k].offset;
      bin.mass += offsets[k].mass;
    }
    bin.offset /= static_cast<double>(end - start);
    out.bins.push_back(bin);
    start = end;
  }
  return out;
}

MomentSample radon_moment_direct(const PixelCloud& cloud, double theta, int n) {
  if (n < 0) throw ValidationError("projection moment order must be nonnegative");
  const double reduced = reduce_angle(theta);
  const double c = std::cos(reduced);
  const double s = std::sin(reduced);
  double sum = 0.0;
  for (const auto& p : cloud.pixels()) {
    const double r = p.location.real() * c + p.location.imag() * s;
    double term = p.intensity;
    for (int k = 0; k < n; ++k) term *= r;
    sum += term;
  }
  return {theta, n, sum};
}

MomentSample radon_moment_fourier(std::span<const Complex> row, double theta,
                                  double imag_tolerance) {
  if (row.empty()) throw ValidationError("triangle row is empty");
  const int n = static_cast<int>(row.size()) - 1;
  const double reduced = reduce_angle(theta);
  Complex sum{0.0, 0.0};
  double magnitude = 0.0;
  for (int l = 0; l <= n; ++l) {
    sum += row[static_cast<std::size_t>(l)] * std::polar(1.0, (n - 2 * l) * reduced);
    magnitude += std::abs(row[static_cast<std::size_t>(l)]);
  }
  const double norm = std::ldexp(1.0, -n);
  sum *= norm;
  magnitude *= norm;
  if (std::abs(sum.imag()) > imag_tolerance * std::max(magnitude, 1e-300)) {
    std::ostringstream os;
    os << "projection moment of order " << n << " has imaginary part " << sum.imag()
       << "; the triangle row is not conjugate symmetric";
    throw ValidationError(os.str());
  }
  return {theta, n, sum.real()};
}

std::vector<double> generic_angle_schedule(int n) {
  if (n < 0) throw ValidationError("schedule order must be nonnegative");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) out[static_cast<std::size_t>(j)] = j * kPi / (n + 2);
  return out;
}

bool check_generic_angles(std::span<const double> thetas, int n, double gap) {
  if (n < 0 || static_cast<int>(thetas.size()) != n + 1) return false;
  for (std::size_t a = 0; a < thetas.size(); ++a) {
    for (std::size_t b = a + 1; b < thetas.size(); ++b) {
      const Complex wa = std::polar(1.0, 2.0 * thetas[a]);
      const Complex wb = std::polar(1.0, 2.0 * thetas[b]);
      if (std::abs(wa - wb) < gap) return false;
    }
  }
  return true;
}

RowRecovery row_from_samples(int n, std::span<const MomentSample> samples,
                             const ReconstructionOptions& options, double gap) {
  if (n < 0) throw ValidationError("row order must be nonnegative");
  if (static_cast<int>(samples.size()) != n + 1) {
    throw ValidationError("row " + std::to_string(n) + " needs exactly " + std::to_string(n + 1) +
                          " samples, got " + std::to_string(samples.size()));
  }
  std::vector<double> thetas;
  for (const auto& s : samples) {
    if (s.n != n) {
      throw ValidationError("sample of order " + std::to_string(s.n) + " passed for row " +
                            std::to_string(n));
    }
    thetas.push_back(s.theta);
  }
  if (!check_generic_angles(thetas, n, gap)) {
    throw ValidationError("sample angles for row " + std::to_string(n) +
                          " are not generic: e^{2i theta} values coincide");
  }

  const Eigen::Index size = n + 1;
  Eigen::MatrixXcd v(size, size);
  Eigen::VectorXcd rhs(size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const double theta = reduce_angle(thetas[static_cast<std::size_t>(j)]);
    const Complex w = std::polar(1.0, -2.0 * theta);
    Complex power = 1.0;
    for (Eigen::Index l = 0; l < size; ++l) {
      v(j, l) = power;
      power *= w;
    }
    rhs(j) = std::ldexp(samples[static_cast<std::size_t>(j)].value, n) * std::polar(1.0, -n * theta);
  }

  RowRecovery out;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  const auto& sv = svd.singularValues();
  out.condition = sv(size - 1) > 0.0 ? sv(0) / sv(size - 1) : std::numeric_limits<double>::infinity();
  if (out.condition > options.condition_bound) {
    std::ostringstream os;
    os << "angle system for row " << n << " has condition number " << out.condition;
    out.warnings.push_back(os.str());
  }
  const Eigen::VectorXcd a = v.fullPivLu().solve(rhs);
  out.row.assign(a.data(), a.data() + a.size());
  return out;
}

PascalTriangle triangle_from_samples(int order, std::span<const MomentSample> samples,
                                     const ReconstructionOptions& options) {
  if (order < 0) throw ValidationError("triangle order must be nonnegative");
  PascalTriangle triangle;
  triangle.order = order;
  for (int n = 0; n <= order; ++n) {
    const auto row_samples = samples_of_order(samples, n);
    triangle.rows.push_back(row_from_samples(n, row_samples, options).row);
  }
  return triangle;
}

PixelCloud image_from_radon(std::span<const Complex> locations,
                            std::span<const MomentSample> samples,
                            const ReconstructionOptions& options) {
  if (locations.empty()) throw ValidationError("at least one location is required");
  const int count = static_cast<int>(locations.size());
  const PascalTriangle triangle = triangle_from_samples(count - 1, samples, options);
  std::vector<Complex> column(locations.size());
  for (int j = 0; j < count; ++j) {
    column[static_cast<std::size_t>(j)] =
        triangle.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
  }
  const IntensitySolution solved = intensities_from_column(locations, column, 0, options);
  return PixelCloud(clamp_intensities(locations, solved.intensities, triangle.rows[0][0].real()));
}

PixelCloud image_from_radon_unknown(int pixel_bound, std::span<const MomentSample> samples,
                                    const ReconstructionOptions& options) {
  if (pixel_bound < 1) throw ValidationError("pixel bound must be at least 1");
  const PascalTriangle triangle = triangle_from_samples(2 * pixel_bound - 2, samples, options);
  // Rows are solved independently, so conjugate pairs only agree to the
  // accuracy of each angle solve.
  ReconstructionOptions relaxed = options;
  relaxed.consistency_tolerance = std::max(options.consistency_tolerance, 1e-6);
  return reconstruct_image(triangle, relaxed);
}

std::vector<MomentSample> sample_schedule(const PixelCloud& cloud, int max_n) {
  std::vector<MomentSample> out;
  for (int n = 0; n <= max_n; ++n) {
    for (double theta : generic_angle_schedule(n)) out.push_back(radon_moment_direct(cloud, theta, n));
  }
  return out;
}

}  // namespace pascaltri
