#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pascaltri/cloud.hpp"

namespace pascaltri {

// Largest order accepted by default. Binomials are exact in 128 bits up to
// n = 130, so the cap can be raised with set_max_order().
inline constexpr int kDefaultMaxOrder = 64;

int max_order();
void set_max_order(int order);

// Exact C(n, k). Throws ValidationError when k is out of range or n exceeds
// the configured maximum order, and NumericalError if the value does not fit
// in 128 bits.
unsigned __int128 binomial(int n, int k);
double binomial_as_double(int n, int k);

// Complex moment mu_{j,l} = sum_k z_k^j conj(z_k)^l rho_k.
Complex compute_moment(const PixelCloud& cloud, int j, int l);

// Grid of mu_{j,l} for 0 <= j, l <= order. Tables recovered from a Pascal
// triangle only know entries with j + l <= max_degree; for tables computed
// from a cloud max_degree is 2 * order.
class MomentTable {
 public:
  MomentTable() = default;
  explicit MomentTable(int order);
  MomentTable(int order, int max_degree);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int max_degree() const { return max_degree_; }
  [[nodiscard]] bool has(int j, int l) const {
    return j >= 0 && l >= 0 && j <= order_ && l <= order_ && j + l <= max_degree_;
  }

  // Checked access; throws ValidationError for unknown entries.
  [[nodiscard]] Complex at(int j, int l) const;
  [[nodiscard]] Complex operator()(int j, int l) const { return entries_[index(j, l)]; }
  Complex& operator()(int j, int l) { return entries_[index(j, l)]; }

  // Largest |mu_{j,l} - conj(mu_{l,j})| / (1 + |mu_{j,l}|) over known entries.
  [[nodiscard]] double conjugate_asymmetry() const;

 private:
  [[nodiscard]] std::size_t index(int j, int l) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(order_ + 1) +
           static_cast<std::size_t>(l);
  }

  int order_ = 0;
  int max_degree_ = 0;
  std::vector<Complex> entries_{Complex{}};
};

// Computes j <= l and mirrors the rest by conjugation; the diagonal is real.
// Throws NumericalError naming the first entry that overflows.
MomentTable compute_moment_table(const PixelCloud& cloud, int order);

enum class FrameTag { translation, scaling, rotation };

std::string to_string(FrameTag tag);
FrameTag frame_tag_from_string(const std::string& name);

// The group element that carries an image onto the normalizing cross-section.
struct MovingFrame {
  Complex z0{0.0, 0.0};  // translation, -mu_{1,0}/mu_{0,0}
  double lambda = 1.0;   // scale, mu~_{1,1}^{-1/2}
  double theta0 = 0.0;   // rotation, wrapped to (-pi, pi]
  bool degenerate_rotation = false;
  bool degenerate_scale = false;
};

struct PascalTriangle {
  int order = 0;
  // rows[n][l] = C(n,l) mu_{l,n-l}
  std::vector<std::vector<Complex>> rows;
  std::set<FrameTag> frame_tags;
  std::optional<MovingFrame> frame;
  // Present when the moments were taken in normalized coordinates.
  std::optional<AffineRecord> affine;

  [[nodiscard]] bool has_tag(FrameTag tag) const { return frame_tags.count(tag) != 0; }
};

PascalTriangle pascal_triangle(const MomentTable& table, int order);

// Inverts pascal_triangle: mu_{l,n-l} = rows[n][l] / C(n,l). The result has
// order `triangle.order` and max_degree `triangle.order`. Conjugate pairs that
// disagree by more than `tolerance` relative raise ValidationError.
MomentTable table_from_triangle(const PascalTriangle& triangle, double tolerance = 1e-8);

}  // namespace pascaltri
