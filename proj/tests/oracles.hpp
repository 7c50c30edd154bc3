#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's numerical code: moments are direct long double sums, binomials
// come from the additive recurrence, transforms act on points.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "pascaltri/cloud.hpp"

namespace oracle {

using pascaltri::Complex;
using pascaltri::Pixel;
using pascaltri::PixelCloud;
using LComplex = std::complex<long double>;

inline constexpr double kPi = std::numbers::pi;

inline Complex moment(const PixelCloud& cloud, int j, int l) {
  LComplex sum = 0;
  for (const auto& p : cloud.pixels()) {
    const LComplex z(p.location.real(), p.location.imag());
    LComplex term = static_cast<long double>(p.intensity);
    for (int k = 0; k < j; ++k) term *= z;
    for (int k = 0; k < l; ++k) term *= std::conj(z);
    sum += term;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

// Moments of the cloud after z -> z - c, summed directly.
inline Complex central_moment(const PixelCloud& cloud, Complex c, int j, int l) {
  std::vector<Pixel> shifted;
  for (const auto& p : cloud.pixels()) shifted.push_back({p.location - c, p.intensity});
  return moment(PixelCloud(shifted), j, l);
}

inline Complex centroid(const PixelCloud& cloud) {
  LComplex sum = 0;
  long double mass = 0;
  for (const auto& p : cloud.pixels()) {
    sum += LComplex(p.location.real(), p.location.imag()) * static_cast<long double>(p.intensity);
    mass += p.intensity;
  }
  sum /= mass;
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

// Pascal's rule, no multiplication.
inline unsigned __int128 binomial_exact(int n, int k) {
  std::vector<std::vector<unsigned __int128>> rows{{1}};
  for (int m = 1; m <= n; ++m) {
    std::vector<unsigned __int128> row(static_cast<std::size_t>(m) + 1, 1);
    for (int i = 1; i < m; ++i) row[i] = rows[m - 1][i - 1] + rows[m - 1][i];
    rows.push_back(row);
  }
  return rows[n][k];
}

inline double binomial(int n, int k) { return static_cast<double>(binomial_exact(n, k)); }

// rows[n][l] = C(n,l) mu_{l,n-l}
inline std::vector<std::vector<Complex>> triangle_rows(const PixelCloud& cloud, int order) {
  std::vector<std::vector<Complex>> rows;
  for (int n = 0; n <= order; ++n) {
    std::vector<Complex> row;
    for (int l = 0; l <= n; ++l) row.push_back(binomial(n, l) * moment(cloud, l, n - l));
    rows.push_back(row);
  }
  return rows;
}

// Weighted covariance of (x, y) by the textbook two-pass formula.
inline std::array<std::array<double, 2>, 2> covariance(const PixelCloud& cloud) {
  long double mass = 0, mx = 0, my = 0;
  for (const auto& p : cloud.pixels()) {
    mass += p.intensity;
    mx += p.intensity * p.location.real();
    my += p.intensity * p.location.imag();
  }
  mx /= mass;
  my /= mass;
  long double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : cloud.pixels()) {
    const long double dx = p.location.real() - mx;
    const long double dy = p.location.imag() - my;
    sxx += p.intensity * dx * dx;
    sxy += p.intensity * dx * dy;
    syy += p.intensity * dy * dy;
  }
  return {{{static_cast<double>(sxx / mass), static_cast<double>(sxy / mass)},
           {static_cast<double>(sxy / mass), static_cast<double>(syy / mass)}}};
}

// Second moment of the projection onto direction theta, summed directly.
inline double radon_moment(const PixelCloud& cloud, double theta, int n) {
  long double sum = 0;
  const long double c = std::cos(static_cast<long double>(theta));
  const long double s = std::sin(static_cast<long double>(theta));
  for (const auto& p : cloud.pixels()) {
    const long double r = p.location.real() * c + p.location.imag() * s;
    long double term = p.intensity;
    for (int k = 0; k < n; ++k) term *= r;
    sum += term;
  }
  return static_cast<double>(sum);
}

// --- generators -------------------------------------------------------------

inline Complex point_in_disk(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(-radius, radius);
  while (true) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) <= radius) return z;
  }
}

// N points in the unit disk, pairwise at least min_gap apart, intensities
// uniform in [lo, hi].
inline PixelCloud random_cloud(std::mt19937_64& rng, int n, double lo = 0.1, double hi = 1.0,
                               double min_gap = 0.05) {
  std::uniform_real_distribution<double> rho(lo, hi);
  std::vector<Pixel> pixels;
  while (static_cast<int>(pixels.size()) < n) {
    const Complex z = point_in_disk(rng);
    const bool clear = std::all_of(pixels.begin(), pixels.end(),
                                   [&](const Pixel& p) { return std::abs(p.location - z) >= min_gap; });
    if (clear) pixels.push_back({z, rho(rng)});
  }
  return PixelCloud(pixels);
}

inline PixelCloud map_points(const PixelCloud& cloud, auto f) {
  std::vector<Pixel> out;
  for (const auto& p : cloud.pixels()) out.push_back({f(p.location), p.intensity});
  return PixelCloud(out);
}

// Equal-mass regular k-gon of radius r around c, first vertex at angle phase.
inline PixelCloud regular_polygon(int k, double r = 1.0, double phase = 0.0, Complex c = 0.0) {
  std::vector<Pixel> pixels;
  for (int i = 0; i < k; ++i) pixels.push_back({c + std::polar(r, phase + 2.0 * kPi * i / k), 1.0});
  return PixelCloud(pixels);
}

// `pairs` mirror pairs about the line through the origin at angle axis, each
// pair sharing an intensity; points stay at least 0.05 away from the axis.
inline PixelCloud mirror_cloud(std::mt19937_64& rng, int pairs, double axis) {
  std::uniform_real_distribution<double> rho(0.2, 1.0);
  const Complex dir = std::polar(1.0, axis);
  std::vector<Pixel> pixels;
  while (static_cast<int>(pixels.size()) < 2 * pairs) {
    const Complex z = point_in_disk(rng);
    if (std::abs((z * std::conj(dir)).imag()) < 0.05) continue;
    const double w = rho(rng);
    pixels.push_back({z, w});
    pixels.push_back({dir * dir * std::conj(z), w});
  }
  return PixelCloud(pixels);
}

// Best assignment of a to b by exhaustive search (n <= 8) or greedy beyond;
// returns the largest location error and largest relative intensity error.
struct MatchError {
  double location = 0.0;
  double intensity = 0.0;
};

inline MatchError match(const std::vector<Pixel>& a, const std::vector<Pixel>& b) {
  if (a.size() != b.size()) return {INFINITY, INFINITY};
  std::vector<int> perm(b.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  MatchError best{INFINITY, INFINITY};
  auto score = [&](const std::vector<int>& p) {
    MatchError e;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& x = a[i];
      const auto& y = b[static_cast<std::size_t>(p[i])];
      e.location = std::max(e.location, std::abs(x.location - y.location));
      e.intensity = std::max(e.intensity, std::abs(x.intensity - y.intensity) / std::abs(x.intensity));
    }
    return e;
  };
  if (a.size() <= 8) {
    do {
      const MatchError e = score(perm);
      if (e.location < best.location) best = e;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // Larger sets: nearest unused neighbour for each point of a.
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = INFINITY;
    int pick = -1;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      const double dk = std::abs(a[i].location - b[k].location);
      if (dk < d) {
        d = dk;
        pick = static_cast<int>(k);
      }
    }
    used[static_cast<std::size_t>(pick)] = true;
    perm[i] = pick;
  }
  return score(perm);
}

inline MatchError match(const PixelCloud& a, const PixelCloud& b) { return match(a.pixels(), b.pixels()); }

}  // namespace oracle
