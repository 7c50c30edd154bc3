#include "pascaltri/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "pascaltri/error.hpp"
#include "pascaltri/invariants.hpp"
#include "pascaltri/symmetry.hpp"

namespace pascaltri {

namespace {

constexpr double kPi = std::numbers::pi;
// Asymmetric clouds must score above the top of the usual threshold sweep
// (r = 0.15) at every orientation.
constexpr double kAsymmetryFloor = 0.15 * 0.15;

Complex point_in_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  while (true) {
    const Complex z(unit(rng), unit(rng));
    if (std::norm(z) <= 1.0) return z;
  }
}

double extent_of(const std::vector<Pixel>& pixels) {
  Complex centroid{0.0, 0.0};
  double mass = 0.0;
  for (const auto& p : pixels) {
    centroid += p.location * p.intensity;
    mass += p.intensity;
  }
  centroid /= mass;
  double extent = 0.0;
  for (const auto& p : pixels) extent = std::max(extent, std::abs(p.location - centroid));
  return extent;
}

std::string entry_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shape_%03d", index);
  return buf;
}

}  // namespace

AxisMode axis_mode_from_string(const std::string& name) {
  if (name == "horizontal") return AxisMode::horizontal;
  if (name == "random") return AxisMode::random;
  throw ValidationError("unknown axis mode '" + name + "'");
}

double mirror_distance(const PixelCloud& cloud) {
  const MomentTable table = centered_table(cloud, 3);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 180; ++k) {
    best = std::min(best, horizontal_symmetry_score(rotate_moments(table, k * kPi / 180.0)));
  }
  return best;
}

std::vector<CorpusEntry> synth_corpus(std::uint64_t seed, int count, double jitter,
                                      AxisMode mode) {
  if (count < 0 || count % 2 != 0) throw ValidationError("corpus size must be even");
  if (!(jitter >= 0.0)) throw ValidationError("jitter must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> half_size(3, 6);
  std::uniform_real_distribution<double> intensity(0.5, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::uniform_real_distribution<double> offset(-2.0, 2.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<CorpusEntry> corpus;
  for (int index = 0; index < count; ++index) {
    CorpusEntry entry;
    entry.name = entry_name(index);
    entry.symmetric = index < count / 2;
    const int half = half_size(rng);
    std::vector<Pixel> pixels;
    if (entry.symmetric) {
      const double axis = mode == AxisMode::horizontal ? 0.0 : angle(rng);
      const Complex dir = std::polar(1.0, axis);
      while (static_cast<int>(pixels.size()) < 2 * half) {
        const Complex z = point_in_disk(rng);
        // Keep points off the axis so each mirror pair is two distinct pixels.
        if (std::abs((z * std::conj(dir)).imag()) < 0.05) continue;
        const double rho = intensity(rng);
        pixels.push_back({z, rho});
        pixels.push_back({dir * dir * std::conj(z), rho});
      }
      entry.axis = axis;
    } else {
      while (true) {
        pixels.clear();
        for (int k = 0; k < 2 * half; ++k) pixels.push_back({point_in_disk(rng), intensity(rng)});
        if (mirror_distance(PixelCloud(pixels)) > kAsymmetryFloor) break;
      }
    }

    const double sigma = jitter * extent_of(pixels);
    const Complex shift(offset(rng), offset(rng));
    for (auto& p : pixels) {
      const double dx = noise(rng);
      const double dy = noise(rng);
      p.location += shift + Complex(dx, dy) * sigma;
    }
    entry.cloud = PixelCloud(std::move(pixels));
    corpus.push_back(std::move(entry));
  }
  return corpus;
}

}  // namespace pascaltri
