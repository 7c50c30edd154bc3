#include "pascaltri/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>

#include "pascaltri/error.hpp"
#include "pascaltri/invariants.hpp"
#include "pascaltri/roots.hpp"

namespace pascaltri {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate_locations(std::span<const Complex> locations, std::span<const Complex> column,
                        int l) {
  if (locations.empty()) throw ValidationError("at least one location is required");
  if (locations.size() != column.size()) {
    throw ValidationError("moment column length " + std::to_string(column.size()) +
                          " does not match " + std::to_string(locations.size()) + " locations");
  }
  if (l < 0) throw ValidationError("column index l must be nonnegative");
  std::vector<Complex> sorted(locations.begin(), locations.end());
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    return std::pair(a.real(), a.imag()) < std::pair(b.real(), b.imag());
  });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k] == sorted[k - 1]) throw ValidationError("duplicate location in intensity solve");
  }
  if (l >= 1) {
    for (const auto& z : locations) {
      if (z == Complex{}) {
        throw ValidationError("a location at the origin makes the l >= 1 column solve singular");
      }
    }
  }
}

Eigen::MatrixXcd vandermonde(std::span<const Complex> locations) {
  const auto n = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXcd v(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex power = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      v(j, k) = power;
      power *= locations[static_cast<std::size_t>(k)];
    }
  }
  return v;
}

Complex conj_power(Complex z, int l) {
  Complex out = 1.0;
  for (int k = 0; k < l; ++k) out *= std::conj(z);
  return out;
}

double condition_number(const Eigen::VectorXd& singular_values) {
  if (singular_values.size() == 0) return 0.0;
  const double smallest = singular_values(singular_values.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return singular_values(0) / smallest;
}

std::string format_condition(double value) {
  std::ostringstream os;
  os.precision(3);
  os << value;
  return os.str();
}

}  // namespace

IntensitySolution intensities_from_column(std::span<const Complex> locations,
                                          std::span<const Complex> column, int l,
                                          const ReconstructionOptions& options) {
  validate_locations(locations, column, l);
  const auto n = static_cast<Eigen::Index>(locations.size());
  // The coefficient matrix is V * diag(conj(z)^l): solve V y = column and
  // divide the diagonal out afterwards.
  const Eigen::MatrixXcd v = vandermonde(locations);
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index j = 0; j < n; ++j) rhs(j) = column[static_cast<std::size_t>(j)];

  IntensitySolution out;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  out.condition = condition_number(svd.singularValues());
  if (out.condition > options.condition_bound) {
    out.warnings.push_back("Vandermonde condition number " + format_condition(out.condition) +
                           " exceeds the bound " + format_condition(options.condition_bound));
  }
  const Eigen::VectorXcd y = v.fullPivLu().solve(rhs);

  out.intensities.resize(locations.size());
  double largest = 0.0;
  double imaginary = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex rho = y(k) / conj_power(locations[static_cast<std::size_t>(k)], l);
    out.intensities[static_cast<std::size_t>(k)] = rho.real();
    largest = std::max(largest, std::abs(rho));
    imaginary = std::max(imaginary, std::abs(rho.imag()));
  }
  out.imaginary_residue = largest > 0.0 ? imaginary / largest : 0.0;
  return out;
}

LeastSquaresSolution intensities_real_least_squares(std::span<const Complex> locations,
                                                    std::span<const Complex> column, int l,
                                                    const ReconstructionOptions& options) {
  validate_locations(locations, column, l);
  const auto n = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXd a(2 * n, n);
  Eigen::VectorXd b(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex z = locations[static_cast<std::size_t>(k)];
    Complex entry = conj_power(z, l);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(j, k) = entry.real();
      a(n + j, k) = entry.imag();
      entry *= z;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    b(j) = column[static_cast<std::size_t>(j)].real();
    b(n + j) = column[static_cast<std::size_t>(j)].imag();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double threshold =
      static_cast<double>(2 * n) * (sv.size() ? sv(0) : 0.0) * kEps * options.rank_safety;
  svd.setThreshold(sv.size() && sv(0) > 0.0 ? threshold / sv(0) : 0.0);

  LeastSquaresSolution out;
  out.rank = static_cast<int>(svd.rank());
  out.degenerate = out.rank < n;
  const Eigen::VectorXd x = svd.solve(b);
  out.residual = (a * x - b).norm();
  out.intensities.assign(x.data(), x.data() + x.size());
  return out;
}

SupportEstimate effective_support(const MomentTable& table, int dim,
                                  const ReconstructionOptions& options) {
  const int largest = std::min(table.order(), table.max_degree() / 2) + 1;
  if (dim < 0) dim = largest;
  if (dim > largest) {
    throw ValidationError("a " + std::to_string(dim) + "x" + std::to_string(dim) +
                          " moment matrix needs more moments than the table holds");
  }
  SupportEstimate out;
  if (dim == 0) return out;
  Eigen::MatrixXcd tau(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) tau(a, b) = table(b, a);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tau);
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  out.threshold_used = static_cast<double>(dim) * sv(0) * kEps * options.rank_safety;
  out.s = static_cast<int>(
      std::count_if(out.singular_values.begin(), out.singular_values.end(),
                    [&](double v) { return v > out.threshold_used; }));
  return out;
}

PronySolution recover_locations(const MomentTable& table, int s,
                                const ReconstructionOptions& options) {
  if (s < 0) throw ValidationError("support size must be nonnegative");
  PronySolution out;
  if (s == 0) return out;

  // Unknowns x_i multiply mu_{i+m,l}; x_i = c_{s-i}.
  std::vector<std::pair<int, int>> equations;  // (m, l)
  if (table.has(s, s - 1) && table.has(s - 1, s - 1)) {
    for (int l = 0; l < s; ++l) equations.emplace_back(0, l);
  } else {
    for (int m = 0; s + m <= table.order(); ++m) {
      for (int l = 0; l <= table.order(); ++l) {
        if (table.has(s + m, l)) equations.emplace_back(m, l);
      }
    }
  }
  if (static_cast<int>(equations.size()) < s) {
    throw ValidationError("the moment table does not determine " + std::to_string(s) +
                          " locations (order " + std::to_string(table.order()) + ")");
  }

  const auto rows = static_cast<Eigen::Index>(equations.size());
  Eigen::MatrixXcd a(rows, s);
  Eigen::VectorXcd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto [m, l] = equations[static_cast<std::size_t>(r)];
    for (int i = 0; i < s; ++i) a(r, i) = table(i + m, l);
    rhs(r) = -table(s + m, l);
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double rank_threshold =
      static_cast<double>(std::max<Eigen::Index>(rows, s)) * sv(0) * kEps * options.rank_safety;
  if (sv(0) == 0.0 || sv(s - 1) <= rank_threshold) {
    throw NumericalError("moment system for " + std::to_string(s) +
                         " locations is singular; the support estimate is inconsistent or the "
                         "table is too short");
  }
  out.condition = sv(0) / sv(s - 1);
  if (out.condition > options.condition_bound) {
    throw NumericalError("location system condition number " + format_condition(out.condition) +
                         " exceeds the bound " + format_condition(options.condition_bound) +
                         "; refusing an unreliable reconstruction");
  }
  const Eigen::VectorXcd x = svd.solve(rhs);

  out.coefficients.resize(static_cast<std::size_t>(s));
  for (int j = 1; j <= s; ++j) out.coefficients[static_cast<std::size_t>(j - 1)] = x(s - j);

  const RootResult roots = aberth_roots(out.coefficients);
  if (!roots.converged) {
    // Surface the best iterate through the throwing wrapper.
    polynomial_roots(out.coefficients);
  }
  out.roots = roots.roots;
  out.residual = *std::max_element(roots.residuals.begin(), roots.residuals.end());
  return out;
}

std::vector<Complex> column_from_triangle(const PascalTriangle& triangle, int l, int count) {
  if (l < 0 || count < 0) throw ValidationError("column index and length must be nonnegative");
  if (count > 0 && count - 1 + l > triangle.order) {
    throw ValidationError("a column of length " + std::to_string(count) + " at l = " +
                          std::to_string(l) + " needs triangle order " +
                          std::to_string(count - 1 + l));
  }
  std::vector<Complex> column(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const auto n = static_cast<std::size_t>(j + l);
    column[static_cast<std::size_t>(j)] =
        triangle.rows.at(n).at(static_cast<std::size_t>(j)) / binomial_as_double(j + l, j);
  }
  return column;
}

PixelCloud reconstruct_image(const PascalTriangle& triangle, const ReconstructionOptions& options) {
  if (!triangle.frame_tags.empty()) {
    throw ValidationError("reconstruction needs raw moments; the triangle carries frame tags");
  }
  const MomentTable raw = table_from_triangle(triangle, options.consistency_tolerance);
  const double mass = raw(0, 0).real();
  if (!(mass > 0.0)) return {};

  // Condition the moments: move the centroid to the origin and scale by a
  // lower estimate of the extent, max_k (mu~_{k,k}/mu_{0,0})^{1/2k}.
  Complex centroid{0.0, 0.0};
  MomentTable centered = raw;
  if (raw.has(1, 0)) {
    centroid = raw(1, 0) / mass;
    centered = translate_moments(raw, -centroid);
  }
  double extent = 0.0;
  for (int k = 1; centered.has(k, k); ++k) {
    const double ratio = centered(k, k).real() / mass;
    if (ratio > 0.0) extent = std::max(extent, std::pow(ratio, 0.5 / static_cast<double>(k)));
  }
  const double scale = extent > 0.0 ? 1.0 / extent : 1.0;
  const MomentTable table = scale_moments(centered, scale);

  const SupportEstimate support = effective_support(table, -1, options);
  if (support.s == 0) return {};

  const PronySolution prony = recover_locations(table, support.s, options);
  std::vector<Complex> column(static_cast<std::size_t>(support.s));
  for (int j = 0; j < support.s; ++j) column[static_cast<std::size_t>(j)] = table.at(j, 0);
  const IntensitySolution intensities = intensities_from_column(prony.roots, column, 0, options);

  std::vector<Pixel> pixels;
  for (std::size_t k = 0; k < prony.roots.size(); ++k) {
    double rho = intensities.intensities[k];
    if (rho < 0.0) {
      if (rho < -1e-9 * mass) {
        throw NumericalError("reconstructed intensity is negative; the moments are inconsistent");
      }
      rho = 0.0;
    }
    if (rho == 0.0) continue;
    Complex z = prony.roots[k] / scale + centroid;
    if (triangle.affine) z = triangle.affine->undo(z);
    pixels.push_back({z, rho});
  }
  return PixelCloud(std::move(pixels));
}

std::vector<int> pair_points(std::span<const Complex> a, std::span<const Complex> b) {
  struct Candidate {
    double distance;
    int i;
    int j;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      candidates.push_back({std::abs(a[i] - b[j]), static_cast<int>(i), static_cast<int>(j)});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.distance, x.i, x.j) < std::tie(y.distance, y.i, y.j);
  });
  std::vector<int> match(a.size(), -1);
  std::vector<bool> used(b.size(), false);
  for (const auto& c : candidates) {
    if (match[static_cast<std::size_t>(c.i)] == -1 && !used[static_cast<std::size_t>(c.j)]) {
      match[static_cast<std::size_t>(c.i)] = c.j;
      used[static_cast<std::size_t>(c.j)] = true;
    }
  }
  // Greedy can lose to a swap when distances tie or nearly tie.
  auto cost = [&](std::size_t i, int j) { return j < 0 ? 0.0 : std::abs(a[i] - b[static_cast<std::size_t>(j)]); };
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t p = 0; p < a.size(); ++p) {
      for (std::size_t q = p + 1; q < a.size(); ++q) {
        if (match[p] < 0 || match[q] < 0) continue;
        const double now = cost(p, match[p]) + cost(q, match[q]);
        const double swapped = cost(p, match[q]) + cost(q, match[p]);
        if (swapped < now - 1e-15 * (1.0 + now)) {
          std::swap(match[p], match[q]);
          improved = true;
        }
      }
    }
  }
  return match;
}

}  // namespace pascaltri
