#include "pascaltri/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pascaltri/error.hpp"

namespace pascaltri {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Complex> powers_of(Complex z, int count) {
  std::vector<Complex> out(static_cast<std::size_t>(count) + 1);
  out[0] = 1.0;
  for (int k = 1; k <= count; ++k) out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k - 1)] * z;
  return out;
}

}  // namespace

MomentTable translate_moments(const MomentTable& table, Complex z0) {
  const int r = table.order();
  MomentTable out(r, table.max_degree());
  const auto zp = powers_of(z0, r);
  const auto zc = powers_of(std::conj(z0), r);
  for (int j = 0; j <= r; ++j) {
    for (int l = 0; l <= r; ++l) {
      if (!table.has(j, l)) continue;
      Complex sum{0.0, 0.0};
      for (int s = 0; s <= j; ++s) {
        const Complex left = binomial_as_double(j, s) * zp[static_cast<std::size_t>(j - s)];
        for (int t = 0; t <= l; ++t) {
          sum += left * binomial_as_double(l, t) * zc[static_cast<std::size_t>(l - t)] * table(s, t);
        }
      }
      out(j, l) = sum;
    }
  }
  return out;
}

MomentTable scale_moments(const MomentTable& table, double factor) {
  MomentTable out(table.order(), table.max_degree());
  for (int j = 0; j <= table.order(); ++j) {
    for (int l = 0; l <= table.order(); ++l) {
      if (table.has(j, l)) out(j, l) = table(j, l) * std::pow(factor, j + l);
    }
  }
  return out;
}

MomentTable scale_moments_anisotropic(const MomentTable& table, double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw ValidationError("anisotropic scale factors must be positive");
  }
  // Entry (j,l) mixes every moment of degree j + l, so only degrees up to the
  // table order can be formed.
  const int r = table.order();
  const int degree = std::min(table.max_degree(), r);
  MomentTable out(r, degree);
  const double sum = lambda1 + lambda2;
  const double diff = lambda1 - lambda2;
  for (int j = 0; j <= r; ++j) {
    for (int l = 0; l <= r; ++l) {
      if (!out.has(j, l)) continue;
      const int n = j + l;
      Complex acc{0.0, 0.0};
      for (int s = 0; s <= j; ++s) {
        for (int t = 0; t <= l; ++t) {
          const double coeff = binomial_as_double(j, s) * binomial_as_double(l, t) *
                               std::pow(sum, l - t + s) * std::pow(diff, j - s + t);
          acc += coeff * table.at(s + t, n - s - t);
        }
      }
      out(j, l) = acc / std::pow(2.0, n);
    }
  }
  return out;
}

MomentTable rotate_moments(const MomentTable& table, double theta) {
  MomentTable out(table.order(), table.max_degree());
  for (int j = 0; j <= table.order(); ++j) {
    for (int l = 0; l <= table.order(); ++l) {
      if (table.has(j, l)) out(j, l) = table(j, l) * std::polar(1.0, (j - l) * theta);
    }
  }
  return out;
}

std::pair<MomentTable, MovingFrame> centralize(const MomentTable& table) {
  const double mass = table.at(0, 0).real();
  if (!(mass > 0.0)) throw ValidationError("cannot centralize an image with zero total intensity");
  MovingFrame frame;
  frame.z0 = -table.at(1, 0) / mass;
  return {translate_moments(table, frame.z0), frame};
}

std::pair<MomentTable, MovingFrame> scale_normalize(const MomentTable& table) {
  MovingFrame frame;
  const double mu11 = table.at(1, 1).real();
  if (!(mu11 > 0.0)) {
    frame.degenerate_scale = true;
    return {table, frame};
  }
  frame.lambda = 1.0 / std::sqrt(mu11);
  MomentTable out(table.order(), table.max_degree());
  for (int j = 0; j <= table.order(); ++j) {
    for (int l = 0; l <= table.order(); ++l) {
      if (table.has(j, l)) out(j, l) = table(j, l) / std::pow(mu11, 0.5 * (j + l));
    }
  }
  out(1, 1) = 1.0;
  return {out, frame};
}

double wrap_angle(double angle) {
  double w = std::remainder(angle, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

double angle_between(Complex x, Complex y) {
  if (x == Complex{} || y == Complex{}) throw ValidationError("angle to a zero vector is undefined");
  return wrap_angle(std::arg(y) - std::arg(x));
}

int rotation_branch(double d) {
  const bool middle = d >= -kPi / 2 && d <= kPi / 2;
  const bool upper = d > kPi / 2 && d <= 3 * kPi / 2;
  const bool lower = d >= -3 * kPi / 2 && d < -kPi / 2;
  if (middle) return 0;
  if (upper) return 1;
  if (lower) return -1;
  throw ValidationError("rotation frame discriminant outside [-3pi/2, 3pi/2]");
}

double branch_margin(double d) {
  return std::min({std::abs(d - kPi / 2), std::abs(d + kPi / 2), std::abs(d - 3 * kPi / 2),
                   std::abs(d + 3 * kPi / 2)});
}

RotationFrame rotation_frame_angle(const MomentTable& table, double tol) {
  RotationFrame out;
  const double mu11 = table.at(1, 1).real();
  const Complex mu02 = table.at(0, 2);
  const Complex mu12 = table.at(1, 2);
  if (!(mu11 > 0.0) || std::abs(mu02) <= tol * mu11 ||
      std::abs(mu12) <= tol * std::pow(mu11, 1.5)) {
    out.degenerate = true;
    return out;
  }
  const Complex e1{1.0, 0.0};
  const double half = 0.5 * angle_between(e1, mu02);
  out.discriminant = angle_between(e1, mu12) - half;
  out.branch = rotation_branch(out.discriminant);
  out.theta0 = wrap_angle(half + out.branch * kPi);
  return out;
}

PascalTriangle invariant_triangle(const PixelCloud& cloud, int order,
                                  const std::set<FrameTag>& groups,
                                  const InvariantOptions& options) {
  if (order < 0) throw ValidationError("triangle order must be nonnegative");
  const bool translate = groups.count(FrameTag::translation) != 0;
  const bool scale = groups.count(FrameTag::scaling) != 0;
  const bool rotate = groups.count(FrameTag::rotation) != 0;

  int table_order = order;
  if (scale) table_order = std::max(table_order, 2);
  if (rotate) table_order = std::max(table_order, 3);

  MovingFrame frame;
  PixelCloud working = cloud;
  if (translate) {
    const double mass = cloud.total_intensity();
    if (!(mass > 0.0)) throw ValidationError("cannot centralize an image with zero total intensity");
    Complex centroid{0.0, 0.0};
    for (const auto& p : cloud.pixels()) centroid += p.location * p.intensity;
    centroid /= mass;
    frame.z0 = -centroid;
    working = cloud.translated(frame.z0);
  }
  MomentTable table = compute_moment_table(working, table_order);
  if (translate) {
    // The centroid of the shifted cloud is zero up to rounding.
    table(1, 0) = 0.0;
    table(0, 1) = 0.0;
  }
  if (scale) {
    auto [normalized, scale_frame] = scale_normalize(table);
    if (scale_frame.degenerate_scale) {
      throw NumericalError("scale frame is degenerate: mu_{1,1} vanishes");
    }
    table = std::move(normalized);
    frame.lambda = scale_frame.lambda;
  }
  if (rotate) {
    const RotationFrame rf = rotation_frame_angle(table, options.degeneracy_tolerance);
    frame.theta0 = rf.theta0;
    frame.degenerate_rotation = rf.degenerate;
    table = rotate_moments(table, rf.theta0);
  }
  PascalTriangle triangle = pascal_triangle(table, order);
  triangle.frame_tags = groups;
  if (!groups.empty()) triangle.frame = frame;
  return triangle;
}

double triangle_distance(const PascalTriangle& a, const PascalTriangle& b) {
  if (a.order != b.order || a.rows.size() != b.rows.size()) {
    return std::numeric_limits<double>::infinity();
  }
  // Rows that vanish by symmetry (odd rows of a centrally symmetric image)
  // would make a purely row-relative measure compare rounding noise, so each
  // row scale is floored by mass * gyration_radius^n * C(n, n/2).
  double mass = 0.0;
  double radius = 0.0;
  if (!a.rows.empty()) {
    mass = std::max(std::abs(a.rows[0][0]), std::abs(b.rows[0][0]));
  }
  if (a.rows.size() > 2 && mass > 0.0) {
    const double mid = std::max(std::abs(a.rows[2][1]), std::abs(b.rows[2][1]));
    radius = std::sqrt(0.5 * mid / mass);
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < a.rows.size(); ++n) {
    const int degree = static_cast<int>(n);
    double scale = mass * std::pow(radius, degree) * binomial_as_double(degree, degree / 2);
    for (const auto& v : a.rows[n]) scale = std::max(scale, std::abs(v));
    for (const auto& v : b.rows[n]) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) continue;
    for (std::size_t l = 0; l < a.rows[n].size(); ++l) {
      worst = std::max(worst, std::abs(a.rows[n][l] - b.rows[n][l]) / scale);
    }
  }
  return worst;
}

bool triangles_close(const PascalTriangle& a, const PascalTriangle& b, double tol) {
  return triangle_distance(a, b) <= tol;
}

GroupKind group_from_string(const std::string& name) {
  if (name == "translation" || name == "trans") return GroupKind::translation;
  if (name == "scaling" || name == "scale") return GroupKind::scaling;
  if (name == "rotation" || name == "rotate") return GroupKind::rotation;
  throw ValidationError("unknown group '" + name + "'");
}

namespace {

// Rotation search for frames the closed-form rule cannot be trusted on:
// a uniform grid of candidate angles, then a golden-section pass inside the
// best grid cell.
OrbitResult rotation_search(const MomentTable& ta, const MomentTable& tb, int order,
                            const OrbitOptions& options) {
  const PascalTriangle target = pascal_triangle(tb, order);
  auto distance_at = [&](double phi) {
    return triangle_distance(pascal_triangle(rotate_moments(ta, phi), order), target);
  };
  const int samples = std::max(options.search_samples, 8);
  const double step = 2.0 * kPi / samples;
  double best_phi = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double phi = k * step;
    const double d = distance_at(phi);
    if (d < best) {
      best = d;
      best_phi = phi;
    }
  }
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_phi - step;
  double hi = best_phi + step;
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = distance_at(x1);
  double f2 = distance_at(x2);
  for (int iter = 0; iter < 100 && hi - lo > 1e-15; ++iter) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = distance_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = distance_at(x2);
    }
  }
  const double refined = f1 < f2 ? x1 : x2;
  const double refined_distance = std::min(f1, f2);
  if (refined_distance < best) {
    best = refined_distance;
    best_phi = refined;
  }
  OrbitResult out;
  out.used_fallback = true;
  out.distance = best;
  out.equivalent = best <= options.tolerance;
  if (out.equivalent) out.witness = std::polar(1.0, wrap_angle(best_phi));
  return out;
}

}  // namespace

OrbitResult orbits_equivalent(const PixelCloud& a, const PixelCloud& b, GroupKind group,
                              const OrbitOptions& options) {
  const std::size_t n = std::max(a.size(), b.size());
  const PixelCloud pa = a.padded_to(n);
  const PixelCloud pb = b.padded_to(n);
  const int order = n == 0 ? 0 : static_cast<int>(2 * n - 2);

  OrbitResult out;
  switch (group) {
    case GroupKind::translation: {
      const bool empty_a = !(pa.total_intensity() > 0.0);
      const bool empty_b = !(pb.total_intensity() > 0.0);
      if (empty_a || empty_b) {
        out.used_fallback = true;
        out.equivalent = empty_a && empty_b;
        if (out.equivalent) out.witness = Complex{};
        return out;
      }
      const auto ta = invariant_triangle(pa, order, {FrameTag::translation});
      const auto tb = invariant_triangle(pb, order, {FrameTag::translation});
      out.distance = triangle_distance(ta, tb);
      out.equivalent = out.distance <= options.tolerance;
      if (out.equivalent) out.witness = ta.frame->z0 - tb.frame->z0;
      return out;
    }
    case GroupKind::scaling: {
      const auto table_a = compute_moment_table(pa, std::max(order, 2));
      const auto table_b = compute_moment_table(pb, std::max(order, 2));
      const bool flat_a = !(table_a(1, 1).real() > 0.0);
      const bool flat_b = !(table_b(1, 1).real() > 0.0);
      if (flat_a || flat_b) {
        // All mass at the origin (or none): scaling acts trivially.
        out.used_fallback = true;
        const auto ra = pascal_triangle(table_a, order);
        const auto rb = pascal_triangle(table_b, order);
        out.distance = triangle_distance(ra, rb);
        out.equivalent = flat_a && flat_b && out.distance <= options.tolerance;
        if (out.equivalent) out.witness = Complex{1.0, 0.0};
        return out;
      }
      const auto ta = invariant_triangle(pa, order, {FrameTag::scaling});
      const auto tb = invariant_triangle(pb, order, {FrameTag::scaling});
      out.distance = triangle_distance(ta, tb);
      out.equivalent = out.distance <= options.tolerance;
      if (out.equivalent) out.witness = Complex{ta.frame->lambda / tb.frame->lambda, 0.0};
      return out;
    }
    case GroupKind::rotation: {
      const auto table_a = compute_moment_table(pa, std::max(order, 3));
      const auto table_b = compute_moment_table(pb, std::max(order, 3));
      const auto fa = rotation_frame_angle(table_a);
      const auto fb = rotation_frame_angle(table_b);
      const bool fragile = fa.degenerate || fb.degenerate ||
                           branch_margin(fa.discriminant) < options.branch_guard ||
                           branch_margin(fb.discriminant) < options.branch_guard;
      if (fragile) return rotation_search(table_a, table_b, order, options);
      const auto ta = pascal_triangle(rotate_moments(table_a, fa.theta0), order);
      const auto tb = pascal_triangle(rotate_moments(table_b, fb.theta0), order);
      out.distance = triangle_distance(ta, tb);
      out.equivalent = out.distance <= options.tolerance;
      if (out.equivalent) out.witness = std::polar(1.0, wrap_angle(fa.theta0 - fb.theta0));
      return out;
    }
  }
  return out;
}

}  // namespace pascaltri
