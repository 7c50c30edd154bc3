#pragma once

#include <span>
#include <string>
#include <vector>

#include "pascaltri/cloud.hpp"
#include "pascaltri/moments.hpp"
#include "pascaltri/reconstruction.hpp"

namespace pascaltri {

struct RadonBin {
  double offset = 0.0;
  double mass = 0.0;
};

// Projection of the image onto the direction (cos theta, sin theta).
struct RadonProjection {
  double theta = 0.0;
  std::vector<RadonBin> bins;  // strictly increasing offsets

  [[nodiscard]] double total_mass() const;
};

// n-th moment of the projection at angle theta.
struct MomentSample {
  double theta = 0.0;
  int n = 0;
  double value = 0.0;
};

// Offsets r_k = x_k cos(theta) + y_k sin(theta). Consecutive offsets (in
// sorted order) closer than bin_tolerance share a bin placed at their mean.
RadonProjection project(const PixelCloud& cloud, double theta, double bin_tolerance = 1e-9);

// sum_k r_k(theta)^n rho_k from the raw offsets. theta is reduced modulo 2pi
// first, so theta and theta + 2pi give the same value whenever that sum is
// exact in floating point.
MomentSample radon_moment_direct(const PixelCloud& cloud, double theta, int n);

// m_n(theta) = 2^{-n} sum_l row[l] e^{i(n-2l)theta} for a raw triangle row.
// Throws ValidationError when the imaginary part exceeds imag_tolerance
// relative to sum |row[l]| / 2^n.
MomentSample radon_moment_fourier(std::span<const Complex> row, double theta,
                                  double imag_tolerance = 1e-9);

// Default schedule theta_j = j pi / (n + 2), j = 0..n.
std::vector<double> generic_angle_schedule(int n);

// True when the points e^{2i theta_j} are pairwise at least `gap` apart and
// there are exactly n + 1 angles.
bool check_generic_angles(std::span<const double> thetas, int n, double gap = 1e-8);

struct RowRecovery {
  std::vector<Complex> row;  // C(n,l) mu_{l,n-l}
  double condition = 0.0;
  std::vector<std::string> warnings;
};

// Recovers triangle row n from n + 1 samples of m_n at generic angles by
// solving the Vandermonde system in w_j = e^{-2i theta_j}.
RowRecovery row_from_samples(int n, std::span<const MomentSample> samples,
                             const ReconstructionOptions& options = {}, double gap = 1e-8);

// Triangle of order `order` rebuilt row by row from samples (all orders
// 0..order must be present, n + 1 samples each).
PascalTriangle triangle_from_samples(int order, std::span<const MomentSample> samples,
                                     const ReconstructionOptions& options = {});

// Intensities at known locations from projection moments m_n, n = 0..N-1.
PixelCloud image_from_radon(std::span<const Complex> locations,
                            std::span<const MomentSample> samples,
                            const ReconstructionOptions& options = {});

// Locations unknown: needs orders 0..2N-2, then full reconstruction.
PixelCloud image_from_radon_unknown(int pixel_bound, std::span<const MomentSample> samples,
                                    const ReconstructionOptions& options = {});

// Forward samples for orders 0..max_n on the default schedule of each order.
std::vector<MomentSample> sample_schedule(const PixelCloud& cloud, int max_n);

}  // namespace pascaltri
