#pragma once

#include <optional>
#include <set>
#include <utility>

#include "pascaltri/cloud.hpp"
#include "pascaltri/moments.hpp"

namespace pascaltri {

// Moments of the image translated by z0, from the binomial expansion of
// (z + z0)^j conj(z + z0)^l. Entries keep the input's degree limit.
MomentTable translate_moments(const MomentTable& table, Complex z0);

// Moments of the image scaled by factor about the origin.
MomentTable scale_moments(const MomentTable& table, double factor);

// Moments of the image stretched by lambda1 horizontally and lambda2
// vertically. Entry (j,l) is a combination of degree j+l moments.
MomentTable scale_moments_anisotropic(const MomentTable& table, double lambda1, double lambda2);

// Moments of the image rotated counterclockwise by theta.
MomentTable rotate_moments(const MomentTable& table, double theta);

// Translates so mu~_{1,0} = 0. Frame z0 = -mu_{1,0}/mu_{0,0}.
std::pair<MomentTable, MovingFrame> centralize(const MomentTable& table);

// Divides mu_{j,l} by mu_{1,1}^{(j+l)/2}; mu^_{1,1} is set to 1. When
// mu_{1,1} <= 0 the table is returned unchanged with degenerate_scale set.
std::pair<MomentTable, MovingFrame> scale_normalize(const MomentTable& table);

// Angle from x to y in (-pi, pi]. Throws ValidationError on a zero vector.
double angle_between(Complex x, Complex y);

// Wraps into (-pi, pi].
double wrap_angle(double angle);

struct RotationFrame {
  double theta0 = 0.0;
  bool degenerate = false;
  // arg(mu_{1,2}) - arg(mu_{0,2})/2, the quantity the branch rule tests.
  double discriminant = 0.0;
  int branch = 0;  // 0, +1 (add pi) or -1 (subtract pi)
};

// Which case of the rotation frame rule fires for a discriminant in
// [-3pi/2, 3pi/2]: 0 for [-pi/2, pi/2], +1 for (pi/2, 3pi/2],
// -1 for [-3pi/2, -pi/2).
int rotation_branch(double discriminant);

// Distance from the discriminant to the nearest branch boundary.
double branch_margin(double discriminant);

// theta0 normalizes Im(mu'_{0,2}) to 0 with Re(mu'_{1,2}) >= 0. Degenerate when
// |mu_{0,2}| <= tol * mu_{1,1} or |mu_{1,2}| <= tol * mu_{1,1}^{3/2}; then
// theta0 = 0.
RotationFrame rotation_frame_angle(const MomentTable& table, double tol = 1e-9);

struct InvariantOptions {
  double degeneracy_tolerance = 1e-9;
};

// Pascal triangle normalized for the requested groups, applied in the order
// translation, scaling, rotation. Translation is applied to the cloud itself
// (moments of the centered pixels), which is exact where the binomial
// expansion would cancel. Throws NumericalError on a degenerate scale.
PascalTriangle invariant_triangle(const PixelCloud& cloud, int order,
                                  const std::set<FrameTag>& groups,
                                  const InvariantOptions& options = {});

// Row-relative comparison: |a - b| <= tol * max |entry| over row n of both.
bool triangles_close(const PascalTriangle& a, const PascalTriangle& b, double tol);
double triangle_distance(const PascalTriangle& a, const PascalTriangle& b);

struct OrbitResult {
  bool equivalent = false;
  // g with g o A = B: the shift (translation), the factor as a real number
  // (scaling) or e^{i phi} (rotation).
  std::optional<Complex> witness;
  bool used_fallback = false;
  double distance = 0.0;  // row-relative distance of the compared triangles
};

enum class GroupKind { translation, scaling, rotation };

GroupKind group_from_string(const std::string& name);

struct OrbitOptions {
  double tolerance = 1e-8;
  // Frames closer than this to a rotation branch boundary use the search.
  double branch_guard = 1e-3;
  int search_samples = 360;
};

OrbitResult orbits_equivalent(const PixelCloud& a, const PixelCloud& b, GroupKind group,
                              const OrbitOptions& options = {});

}  // namespace pascaltri
