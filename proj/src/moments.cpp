#include "pascaltri/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "pascaltri/error.hpp"

namespace pascaltri {

namespace {

std::atomic<int> g_max_order{kDefaultMaxOrder};

// Largest n for which every C(n, k) fits in unsigned 128 bits.
constexpr int kBinomialLimit = 130;

using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string entry_name(int j, int l) {
  return "(" + std::to_string(j) + "," + std::to_string(l) + ")";
}

}  // namespace

int max_order() { return g_max_order.load(); }

void set_max_order(int order) {
  if (order < 0 || order > kBinomialLimit) {
    throw ValidationError("maximum order must lie in [0, " + std::to_string(kBinomialLimit) +
                          "], got " + std::to_string(order));
  }
  g_max_order.store(order);
}

u128 binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw ValidationError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                          ") is out of range");
  }
  if (n > max_order()) {
    throw ValidationError("binomial order " + std::to_string(n) + " exceeds the maximum order " +
                          std::to_string(max_order()));
  }
  k = std::min(k, n - k);
  u128 result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact; split the division to keep the
    // intermediate product small.
    const u128 g = gcd128(result, static_cast<u128>(i));
    const u128 factor = static_cast<u128>(n - k + i) / (static_cast<u128>(i) / g);
    u128 next = 0;
    if (__builtin_mul_overflow(result / g, factor, &next)) {
      throw NumericalError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                           ") overflows 128 bits");
    }
    result = next;
  }
  return result;
}

double binomial_as_double(int n, int k) { return static_cast<double>(binomial(n, k)); }

Complex compute_moment(const PixelCloud& cloud, int j, int l) {
  if (j < 0 || l < 0) throw ValidationError("moment indices must be nonnegative");
  Complex sum{0.0, 0.0};
  for (const auto& p : cloud.pixels()) {
    if (p.intensity == 0.0) continue;
    const Complex z = p.location;
    Complex term = p.intensity;
    for (int a = 0; a < j; ++a) term *= z;
    for (int b = 0; b < l; ++b) term *= std::conj(z);
    sum += term;
  }
  return sum;
}

MomentTable::MomentTable(int order) : MomentTable(order, 2 * order) {}

MomentTable::MomentTable(int order, int max_degree)
    : order_(order),
      max_degree_(max_degree),
      entries_(static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 1)) {
  if (order < 0) throw ValidationError("moment table order must be nonnegative");
  if (max_degree < 0 || max_degree > 2 * order) {
    throw ValidationError("moment table degree limit out of range");
  }
}

Complex MomentTable::at(int j, int l) const {
  if (!has(j, l)) {
    throw ValidationError("moment " + entry_name(j, l) + " is not available in a table of order " +
                          std::to_string(order_) + " and degree " + std::to_string(max_degree_));
  }
  return (*this)(j, l);
}

double MomentTable::conjugate_asymmetry() const {
  double worst = 0.0;
  for (int j = 0; j <= order_; ++j) {
    for (int l = 0; l <= order_; ++l) {
      if (!has(j, l)) continue;
      const Complex a = (*this)(j, l);
      worst = std::max(worst, std::abs(a - std::conj((*this)(l, j))) / (1.0 + std::abs(a)));
    }
  }
  return worst;
}

MomentTable compute_moment_table(const PixelCloud& cloud, int order) {
  if (order < 0) throw ValidationError("moment order must be nonnegative");
  if (order > max_order()) {
    throw ValidationError("moment order " + std::to_string(order) + " exceeds the maximum order " +
                          std::to_string(max_order()));
  }
  MomentTable table(order);
  const auto n = static_cast<std::size_t>(order) + 1;
  std::vector<Complex> powers(n);
  std::vector<double> norms(n);
  // Pixel-major accumulation: each entry still sums pixels in cloud order.
  for (const auto& p : cloud.pixels()) {
    if (p.intensity == 0.0) continue;
    powers[0] = 1.0;
    norms[0] = 1.0;
    const double r2 = std::norm(p.location);
    for (std::size_t k = 1; k < n; ++k) {
      powers[k] = powers[k - 1] * p.location;
      norms[k] = norms[k - 1] * r2;
    }
    for (int j = 0; j <= order; ++j) {
      // z^j conj(z)^l = |z|^{2j} conj(z)^{l-j} for l >= j.
      table(j, j) += norms[j] * p.intensity;
      for (int l = j + 1; l <= order; ++l) {
        table(j, l) += norms[j] * std::conj(powers[l - j]) * p.intensity;
      }
    }
  }
  for (int j = 0; j <= order; ++j) {
    for (int l = j; l <= order; ++l) {
      const Complex v = table(j, l);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError("moment " + entry_name(j, l) +
                             " is not finite; normalize coordinates or lower the order");
      }
      table(l, j) = std::conj(v);
    }
  }
  return table;
}

std::string to_string(FrameTag tag) {
  switch (tag) {
    case FrameTag::translation: return "translation";
    case FrameTag::scaling: return "scaling";
    case FrameTag::rotation: return "rotation";
  }
  return "unknown";
}

FrameTag frame_tag_from_string(const std::string& name) {
  if (name == "translation" || name == "trans") return FrameTag::translation;
  if (name == "scaling" || name == "scale") return FrameTag::scaling;
  if (name == "rotation" || name == "rotate") return FrameTag::rotation;
  throw ValidationError("unknown frame tag '" + name + "'");
}

PascalTriangle pascal_triangle(const MomentTable& table, int order) {
  if (order < 0 || order > table.order()) {
    throw ValidationError("triangle order " + std::to_string(order) +
                          " exceeds the moment table order " + std::to_string(table.order()));
  }
  PascalTriangle triangle;
  triangle.order = order;
  triangle.rows.resize(static_cast<std::size_t>(order) + 1);
  for (int n = 0; n <= order; ++n) {
    auto& row = triangle.rows[static_cast<std::size_t>(n)];
    row.resize(static_cast<std::size_t>(n) + 1);
    for (int l = 0; l <= n; ++l) {
      row[static_cast<std::size_t>(l)] = binomial_as_double(n, l) * table.at(l, n - l);
    }
  }
  return triangle;
}

MomentTable table_from_triangle(const PascalTriangle& triangle, double tolerance) {
  const int order = triangle.order;
  if (static_cast<int>(triangle.rows.size()) != order + 1) {
    throw ValidationError("triangle has " + std::to_string(triangle.rows.size()) +
                          " rows but declares order " + std::to_string(order));
  }
  MomentTable table(order, order);
  for (int n = 0; n <= order; ++n) {
    const auto& row = triangle.rows[static_cast<std::size_t>(n)];
    if (static_cast<int>(row.size()) != n + 1) {
      throw ValidationError("triangle row " + std::to_string(n) + " has " +
                            std::to_string(row.size()) + " entries");
    }
    double scale = 0.0;
    for (const auto& v : row) scale = std::max(scale, std::abs(v));
    for (int l = 0; l <= n; ++l) {
      const Complex a = row[static_cast<std::size_t>(l)];
      const Complex b = row[static_cast<std::size_t>(n - l)];
      if (std::abs(a - std::conj(b)) > tolerance * scale) {
        throw ValidationError("triangle entries " + entry_name(n, l) + " and " +
                              entry_name(n, n - l) + " are not conjugate");
      }
      // Average the two encodings of the same moment.
      table(l, n - l) = 0.5 * (a + std::conj(b)) / binomial_as_double(n, l);
    }
  }
  return table;
}

}  // namespace pascaltri
