#include "pascaltri/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pascaltri/error.hpp"

namespace pascaltri {

namespace {

bool location_less(const Pixel& a, const Pixel& b) {
  if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
  if (a.location.imag() != b.location.imag()) return a.location.imag() < b.location.imag();
  return a.intensity < b.intensity;
}

std::string format_location(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << z.real() << ", " << z.imag() << ')';
  return os.str();
}

template <typename Fn>
PixelCloud map_locations(const std::vector<Pixel>& pixels, Fn&& fn) {
  std::vector<Pixel> out;
  out.reserve(pixels.size());
  for (const auto& p : pixels) out.push_back({fn(p.location), p.intensity});
  return PixelCloud(std::move(out));
}

}  // namespace

PixelCloud::PixelCloud(std::vector<Pixel> pixels) : pixels_(std::move(pixels)) {
  for (const auto& p : pixels_) {
    if (!std::isfinite(p.location.real()) || !std::isfinite(p.location.imag())) {
      throw ValidationError("pixel location is not finite");
    }
    if (!std::isfinite(p.intensity) || p.intensity < 0.0) {
      throw ValidationError("pixel intensity at " + format_location(p.location) +
                            " must be finite and nonnegative");
    }
  }
  std::sort(pixels_.begin(), pixels_.end(), location_less);
}

PixelCloud PixelCloud::from_points(std::span<const Complex> locations,
                                   std::span<const double> intensities) {
  if (locations.size() != intensities.size()) {
    throw ValidationError("locations and intensities differ in length");
  }
  std::vector<Pixel> pixels;
  pixels.reserve(locations.size());
  for (std::size_t k = 0; k < locations.size(); ++k) {
    pixels.push_back({locations[k], intensities[k]});
  }
  return PixelCloud(std::move(pixels));
}

double PixelCloud::total_intensity() const {
  double total = 0.0;
  for (const auto& p : pixels_) total += p.intensity;
  return total;
}

std::size_t PixelCloud::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(pixels_.begin(), pixels_.end(), [](const Pixel& p) { return p.intensity > 0.0; }));
}

bool PixelCloud::distinct() const {
  // Sorted, so duplicates are adjacent.
  for (std::size_t k = 1; k < pixels_.size(); ++k) {
    if (pixels_[k].location == pixels_[k - 1].location) return false;
  }
  return true;
}

void PixelCloud::require_distinct() const {
  for (std::size_t k = 1; k < pixels_.size(); ++k) {
    if (pixels_[k].location == pixels_[k - 1].location) {
      throw ValidationError("duplicate pixel location " + format_location(pixels_[k].location));
    }
  }
}

PixelCloud PixelCloud::padded_to(std::size_t count) const {
  if (count <= pixels_.size()) return *this;
  double extent = 0.0;
  for (const auto& p : pixels_) extent = std::max(extent, std::abs(p.location));
  const double radius = 2.0 * extent + 1.0;
  const std::size_t extra = count - pixels_.size();
  std::vector<Pixel> out = pixels_;
  for (std::size_t k = 0; k < extra; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(extra);
    out.push_back({std::polar(radius, angle), 0.0});
  }
  return PixelCloud(std::move(out));
}

PixelCloud PixelCloud::without_zeros() const {
  std::vector<Pixel> out;
  for (const auto& p : pixels_) {
    if (p.intensity > 0.0) out.push_back(p);
  }
  return PixelCloud(std::move(out));
}

PixelCloud PixelCloud::translated(Complex shift) const {
  return map_locations(pixels_, [shift](Complex z) { return z + shift; });
}

PixelCloud PixelCloud::scaled(double factor) const {
  return map_locations(pixels_, [factor](Complex z) { return z * factor; });
}

PixelCloud PixelCloud::rotated(double angle) const {
  const Complex phase = std::polar(1.0, angle);
  return map_locations(pixels_, [phase](Complex z) { return z * phase; });
}

PixelCloud PixelCloud::reflected(double angle) const {
  const Complex phase = std::polar(1.0, 2.0 * angle);
  return map_locations(pixels_, [phase](Complex z) { return std::conj(z) * phase; });
}

PixelCloud PixelCloud::stretched(double horizontal, double vertical) const {
  return map_locations(pixels_, [=](Complex z) {
    return Complex(z.real() * horizontal, z.imag() * vertical);
  });
}

std::pair<PixelCloud, AffineRecord> normalize_coordinates(const PixelCloud& cloud) {
  const double total = cloud.total_intensity();
  if (cloud.empty() || !(total > 0.0)) {
    throw ValidationError("cannot normalize a cloud with zero total intensity");
  }
  Complex centroid{0.0, 0.0};
  for (const auto& p : cloud.pixels()) centroid += p.location * p.intensity;
  centroid /= total;

  double extent = 0.0;
  for (const auto& p : cloud.pixels()) extent = std::max(extent, std::abs(p.location - centroid));

  AffineRecord record{centroid, extent > 0.0 ? 1.0 / extent : 1.0};
  return {apply_record(cloud, record), record};
}

PixelCloud apply_record(const PixelCloud& cloud, const AffineRecord& record) {
  return map_locations(cloud.pixels(), [&](Complex z) { return record.apply(z); });
}

PixelCloud undo_record(const PixelCloud& cloud, const AffineRecord& record) {
  return map_locations(cloud.pixels(), [&](Complex z) { return record.undo(z); });
}

}  // namespace pascaltri
