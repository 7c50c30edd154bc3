#pragma once

#include <span>
#include <string>
#include <vector>

#include "pascaltri/cloud.hpp"
#include "pascaltri/moments.hpp"

namespace pascaltri {

struct ReconstructionOptions {
  // Linear systems whose 2-norm condition number exceeds this are refused
  // (location recovery) or flagged (intensity solves).
  double condition_bound = 1e12;
  // Rank threshold is dim * sigma_max * eps * rank_safety.
  double rank_safety = 100.0;
  // Relative tolerance for conjugate pairs in an input triangle.
  double consistency_tolerance = 1e-8;
};

struct IntensitySolution {
  std::vector<double> intensities;
  // max |Im rho| / max(|rho|, tiny) of the raw complex solve.
  double imaginary_residue = 0.0;
  double condition = 0.0;
  std::vector<std::string> warnings;
};

struct LeastSquaresSolution {
  std::vector<double> intensities;
  double residual = 0.0;  // 2-norm of the stacked real residual
  int rank = 0;
  bool degenerate = false;
};

struct SupportEstimate {
  int s = 0;
  std::vector<double> singular_values;  // nonincreasing
  double threshold_used = 0.0;
};

struct PronySolution {
  // P(t) = t^s + c_1 t^{s-1} + ... + c_s
  std::vector<Complex> coefficients;
  std::vector<Complex> roots;
  double residual = 0.0;  // max |P(root)|
  double condition = 0.0;
};

// Solves sum_k z_k^j conj(z_k)^l rho_k = column[j], j = 0..N-1.
IntensitySolution intensities_from_column(std::span<const Complex> locations,
                                          std::span<const Complex> column, int l,
                                          const ReconstructionOptions& options = {});

// Same system split into real and imaginary rows and solved in least squares
// with an SVD, so the answer is real by construction.
LeastSquaresSolution intensities_real_least_squares(std::span<const Complex> locations,
                                                    std::span<const Complex> column, int l,
                                                    const ReconstructionOptions& options = {});

// Numerical rank of the dim x dim leading block of the moment matrix.
// dim defaults to the largest block the table fully contains.
SupportEstimate effective_support(const MomentTable& table, int dim = -1,
                                  const ReconstructionOptions& options = {});

// Finds the s nonzero-intensity locations as the roots of the polynomial
// whose coefficients annihilate the moment sequence. Uses the square system
// on mu_{0..s-1, 0..s-1} when the table reaches degree 2s-1, otherwise every
// shifted equation sum_j c_j mu_{s-j+m,l} = -mu_{s+m,l} the table supports.
PronySolution recover_locations(const MomentTable& table, int s,
                                const ReconstructionOptions& options = {});

// Full recovery of the nonzero pixels from a raw triangle. Works in
// conditioned coordinates (centroid shift and extent scaling derived from the
// moments, or the triangle's affine record) and maps the result back.
PixelCloud reconstruct_image(const PascalTriangle& triangle,
                             const ReconstructionOptions& options = {});

// Column {mu_{j,l}}_{j=0..count-1} read from a triangle of sufficient order.
std::vector<Complex> column_from_triangle(const PascalTriangle& triangle, int l, int count);

// Matching between two point sets for verification: greedy nearest pairs in
// (distance, i, j) order, then pairwise swaps while they lower the total
// distance. Returns index into `b` for every element of `a` (or -1 when b
// runs out).
std::vector<int> pair_points(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace pascaltri
