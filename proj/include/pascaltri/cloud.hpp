#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pascaltri {

using Complex = std::complex<double>;

struct Pixel {
  Complex location;
  double intensity = 0.0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// A discrete gray-scale image: finitely many pixel locations in the complex
// plane, each carrying a nonnegative intensity.
//
// Pixels are kept sorted lexicographically by (Re z, Im z) so every sum over
// the cloud runs in the same order regardless of how the cloud was built.
// Zero-intensity pixels are retained.
class PixelCloud {
 public:
  PixelCloud() = default;
  explicit PixelCloud(std::vector<Pixel> pixels);

  static PixelCloud from_points(std::span<const Complex> locations,
                                std::span<const double> intensities);

  [[nodiscard]] const std::vector<Pixel>& pixels() const { return pixels_; }
  [[nodiscard]] std::size_t size() const { return pixels_.size(); }
  [[nodiscard]] bool empty() const { return pixels_.empty(); }

  [[nodiscard]] double total_intensity() const;
  [[nodiscard]] std::size_t nonzero_count() const;

  // True when no two pixels share a location.
  [[nodiscard]] bool distinct() const;
  // Throws ValidationError naming the first repeated location.
  void require_distinct() const;

  // Copy with `count` zero-intensity pixels appended at locations not already
  // present (placed on a ring outside the current extent).
  [[nodiscard]] PixelCloud padded_to(std::size_t count) const;

  // Copy without zero-intensity pixels.
  [[nodiscard]] PixelCloud without_zeros() const;

  // Pointwise maps. The intensity of each pixel is carried along.
  [[nodiscard]] PixelCloud translated(Complex shift) const;
  [[nodiscard]] PixelCloud scaled(double factor) const;
  [[nodiscard]] PixelCloud rotated(double angle) const;
  // Reflection about the line through the origin with direction angle theta.
  [[nodiscard]] PixelCloud reflected(double angle) const;
  [[nodiscard]] PixelCloud stretched(double horizontal, double vertical) const;

  friend bool operator==(const PixelCloud&, const PixelCloud&) = default;

 private:
  std::vector<Pixel> pixels_;
};

// Record of the conditioning map z -> (z - shift) * scale.
struct AffineRecord {
  Complex shift{0.0, 0.0};
  double scale = 1.0;

  [[nodiscard]] Complex apply(Complex z) const { return (z - shift) * scale; }
  [[nodiscard]] Complex undo(Complex z) const { return z / scale + shift; }
};

// Shift by the intensity-weighted centroid and scale so the farthest pixel
// sits on the unit circle. A cloud with zero extent keeps scale 1.
std::pair<PixelCloud, AffineRecord> normalize_coordinates(const PixelCloud& cloud);

PixelCloud apply_record(const PixelCloud& cloud, const AffineRecord& record);
PixelCloud undo_record(const PixelCloud& cloud, const AffineRecord& record);

}  // namespace pascaltri
