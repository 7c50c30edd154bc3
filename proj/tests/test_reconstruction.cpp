#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pascaltri/error.hpp"
#include "pascaltri/reconstruction.hpp"
#include "pascaltri/roots.hpp"

using namespace pascaltri;

namespace {

const Complex I{0.0, 1.0};

std::vector<Complex> locations_of(const PixelCloud& cloud) {
  std::vector<Complex> out;
  for (const auto& p : cloud.pixels()) out.push_back(p.location);
  return out;
}

std::vector<Complex> oracle_column(const PixelCloud& cloud, int l) {
  std::vector<Complex> out;
  for (std::size_t j = 0; j < cloud.size(); ++j) out.push_back(oracle::moment(cloud, static_cast<int>(j), l));
  return out;
}

// Monic coefficients of prod (t - r_k), expanded by repeated multiplication.
std::vector<Complex> expand(const std::vector<Complex>& roots) {
  std::vector<Complex> poly{1.0};
  for (Complex r : roots) {
    std::vector<Complex> next(poly.size() + 1, 0.0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k];
      next[k + 1] -= r * poly[k];
    }
    poly = next;
  }
  return {poly.begin() + 1, poly.end()};
}

double worst_pairing(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Pixel> pa;
  std::vector<Pixel> pb;
  for (Complex z : a) pa.push_back({z, 1.0});
  for (Complex z : b) pb.push_back({z, 1.0});
  return oracle::match(pa, pb).location;
}

PascalTriangle forward_triangle(const PixelCloud& cloud, int order) {
  PascalTriangle t;
  t.order = order;
  t.rows = oracle::triangle_rows(cloud, order);
  return t;
}

}  // namespace

TEST_CASE("polynomial roots") {
  const std::vector<Complex> linear{-(2.0 + I)};
  const auto r1 = polynomial_roots(linear);
  REQUIRE(r1.size() == 1);
  CHECK(std::abs(r1[0] - (2.0 + I)) < 1e-15);

  const std::vector<Complex> quad{0.0, -1.0};
  CHECK(worst_pairing(polynomial_roots(quad), {1.0, -1.0}) < 1e-14);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Complex> roots;
    for (int k = 0; k < 6; ++k) roots.push_back(oracle::point_in_disk(rng, 2.0));
    const auto found = aberth_roots(expand(roots));
    CHECK(found.converged);
    CHECK(worst_pairing(found.roots, roots) < 1e-9);
  }

  const std::vector<Complex> zero{0.0, 0.0, 0.0};
  CHECK(worst_pairing(polynomial_roots(zero), {0.0, 0.0, 0.0}) == 0.0);
  CHECK(std::abs(evaluate_monic(quad, 3.0) - 8.0) == 0.0);
}

TEST_CASE("root finding is deterministic") {
  const std::vector<Complex> c{Complex(0.3, -0.2), Complex(-1.1, 0.4), Complex(0.05, 0.9)};
  CHECK(aberth_roots(c).roots == aberth_roots(c).roots);
}

TEST_CASE("intensities_from_column worked examples") {
  const std::vector<Complex> origin{0.0};
  const std::vector<Complex> three{3.0};
  CHECK(intensities_from_column(origin, three, 0).intensities == std::vector<double>{3.0});

  const std::vector<Complex> pm{1.0, -1.0};
  const std::vector<Complex> column{7.0, -3.0};
  const auto sol = intensities_from_column(pm, column, 0);
  CHECK(sol.intensities[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sol.intensities[1] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(sol.warnings.empty());

  CHECK_THROWS_AS(intensities_from_column(origin, three, 1), ValidationError);
  const std::vector<Complex> dup{1.0, 1.0};
  CHECK_THROWS_AS(intensities_from_column(dup, column, 0), ValidationError);
}

TEST_CASE("intensities_from_column on forward columns l = 0 and l = 1") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 6);
    const auto z = locations_of(cloud);
    for (int l : {0, 1}) {
      const auto sol = intensities_from_column(z, oracle_column(cloud, l), l);
      for (std::size_t k = 0; k < z.size(); ++k) {
        const double rho = cloud.pixels()[k].intensity;
        CHECK(std::abs(sol.intensities[k] - rho) <= 1e-8 * rho);
      }
      CHECK(sol.imaginary_residue < 1e-8);
    }
  }
}

TEST_CASE("ill-conditioned Vandermonde systems warn instead of failing") {
  std::vector<Complex> z;
  std::vector<Complex> column;
  for (int k = 0; k < 12; ++k) z.push_back(1.0 + 1e-3 * k);
  std::vector<Pixel> pixels;
  for (Complex w : z) pixels.push_back({w, 1.0});
  const PixelCloud cloud(pixels);
  const auto sol = intensities_from_column(z, oracle_column(cloud, 0), 0);
  CHECK_FALSE(sol.warnings.empty());
  CHECK(sol.condition > 1e12);
}

TEST_CASE("real least squares agrees with the complex solve") {
  const std::vector<Complex> z{1.0, I};
  const std::vector<Complex> column{2.0, 1.0 + I};
  const auto ls = intensities_real_least_squares(z, column, 0);
  CHECK(ls.intensities[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ls.intensities[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ls.rank == 2);
  CHECK_FALSE(ls.degenerate);

  std::mt19937_64 rng(23);
  std::normal_distribution<double> noise(0.0, 1e-9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 5);
    const auto locs = locations_of(cloud);
    auto col = oracle_column(cloud, 1);
    const auto exact = intensities_from_column(locs, col, 1);
    const auto ls2 = intensities_real_least_squares(locs, col, 1);
    for (std::size_t k = 0; k < locs.size(); ++k) {
      CHECK(std::abs(exact.intensities[k] - ls2.intensities[k]) <= 1e-10 * (1 + exact.intensities[k]));
    }
    for (auto& c : col) c += Complex(noise(rng), noise(rng));
    const auto noisy = intensities_real_least_squares(locs, col, 1);
    CHECK(noisy.residual <= 1e-8);
  }
}

TEST_CASE("effective support counts nonzero pixels") {
  std::mt19937_64 rng(24);
  const auto base = oracle::random_cloud(rng, 5);
  std::vector<Pixel> pixels = base.pixels();
  pixels[1].intensity = 0.0;
  pixels[3].intensity = 0.0;
  const PixelCloud cloud(pixels);
  CHECK(effective_support(compute_moment_table(cloud, 4), 5).s == 3);

  std::vector<Pixel> zeros = base.pixels();
  for (auto& p : zeros) p.intensity = 0.0;
  CHECK(effective_support(compute_moment_table(PixelCloud(zeros), 4), 5).s == 0);
  CHECK(effective_support(compute_moment_table(base, 4), 5).s == 5);

  // Appending zero pixels at fresh locations does not change the estimate.
  const auto padded = cloud.padded_to(9);
  CHECK(padded.size() == 9);
  CHECK(effective_support(compute_moment_table(padded, 8), 9).s == 3);
  CHECK_THROWS_AS(effective_support(compute_moment_table(base, 2), 5), ValidationError);
}

TEST_CASE("recover_locations worked examples") {
  const auto single = recover_locations(compute_moment_table(PixelCloud({{2.0 + I, 1.0}}), 1), 1);
  REQUIRE(single.roots.size() == 1);
  CHECK(std::abs(single.coefficients[0] + (2.0 + I)) < 1e-15);
  CHECK(std::abs(single.roots[0] - (2.0 + I)) < 1e-15);

  const auto pair = recover_locations(compute_moment_table(PixelCloud({{1.0, 1}, {-1.0, 1}}), 2), 2);
  CHECK(std::abs(pair.coefficients[0]) < 1e-15);
  CHECK(std::abs(pair.coefficients[1] + 1.0) < 1e-15);
  CHECK(worst_pairing(pair.roots, {1.0, -1.0}) < 1e-14);
}

TEST_CASE("recover_locations on random clouds, invariant under permutation") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 5);
    const auto sol = recover_locations(compute_moment_table(cloud, 5), 5);
    CHECK(worst_pairing(sol.roots, locations_of(cloud)) < 1e-6);

    std::vector<Pixel> shuffled = cloud.pixels();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<Complex> locs;
    std::vector<double> rhos;
    for (const auto& p : shuffled) {
      locs.push_back(p.location);
      rhos.push_back(p.intensity);
    }
    const auto again = recover_locations(compute_moment_table(PixelCloud::from_points(locs, rhos), 5), 5);
    CHECK(worst_pairing(again.roots, sol.roots) < 1e-9);
  }
}

TEST_CASE("location recovery from T^{2N-2} alone for N >= 3") {
  std::mt19937_64 rng(26);
  for (int n = 3; n <= 8; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto cloud = oracle::random_cloud(rng, n);
      const auto table = table_from_triangle(forward_triangle(cloud, 2 * n - 2));
      CHECK_FALSE(table.has(n, n - 1));
      const auto sol = recover_locations(table, n);
      CHECK(worst_pairing(sol.roots, locations_of(cloud)) < 1e-6);
    }
  }
}

TEST_CASE("two pixels are not determined by T^2") {
  // Different clouds, same second-order triangle.
  const PixelCloud a({{Complex(1, 0), 1.0}, {Complex(-1, 0), 1.0}});
  const PixelCloud b({{Complex(std::sqrt(3.0), 0), 0.5}, {Complex(-1.0 / std::sqrt(3.0), 0), 1.5}});
  const auto ta = oracle::triangle_rows(a, 2);
  const auto tb = oracle::triangle_rows(b, 2);
  for (int n = 0; n <= 2; ++n) {
    for (int l = 0; l <= n; ++l) CHECK(std::abs(ta[n][l] - tb[n][l]) < 1e-14);
  }
  CHECK(oracle::match(a, b).location > 0.5);
}

TEST_CASE("reconstruct_image") {
  const PixelCloud one({{1.0 + 2.0 * I, 3.0}});
  const auto back = reconstruct_image(forward_triangle(one, 2));
  REQUIRE(back.size() == 1);
  CHECK(std::abs(back.pixels()[0].location - (1.0 + 2.0 * I)) < 1e-12);
  CHECK(back.pixels()[0].intensity == doctest::Approx(3.0).epsilon(1e-12));

  CHECK(reconstruct_image(forward_triangle(PixelCloud{}, 2)).empty());
  CHECK(reconstruct_image(forward_triangle(PixelCloud({{0.5, 0.0}, {I, 0.0}}), 2)).empty());

  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 8);
    const auto rec = reconstruct_image(forward_triangle(cloud, 14));
    const auto err = oracle::match(cloud, rec);
    CHECK(err.location <= 1e-6);
    CHECK(err.intensity <= 1e-6);
  }

  // Zero pixels are not part of the answer.
  auto padded = oracle::random_cloud(rng, 4).padded_to(6);
  const auto rec = reconstruct_image(forward_triangle(padded, 10));
  CHECK(rec.size() == 4);

  PascalTriangle tagged = forward_triangle(one, 2);
  tagged.frame_tags.insert(FrameTag::rotation);
  CHECK_THROWS_AS(reconstruct_image(tagged), ValidationError);
}

TEST_CASE("reconstruction honours the affine record") {
  std::mt19937_64 rng(28);
  const auto cloud = oracle::map_points(oracle::random_cloud(rng, 6),
                                        [](Complex z) { return 200.0 * z + Complex(300, 150); });
  const auto [normalized, record] = normalize_coordinates(cloud);
  PascalTriangle t = forward_triangle(normalized, 10);
  t.affine = record;
  const auto rec = reconstruct_image(t);
  const auto err = oracle::match(cloud, rec);
  CHECK(err.location <= 1e-6 * 200.0);
  CHECK(err.intensity <= 1e-6);
}

TEST_CASE("column_from_triangle") {
  std::mt19937_64 rng(29);
  const auto cloud = oracle::random_cloud(rng, 4);
  const auto t = forward_triangle(cloud, 4);
  const auto col = column_from_triangle(t, 1, 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(col[static_cast<std::size_t>(j)] - oracle::moment(cloud, j, 1)) < 1e-13);
  }
  CHECK_THROWS_AS(column_from_triangle(t, 2, 4), ValidationError);
}

TEST_CASE("pair_points") {
  const std::vector<Complex> a{0.0, 1.0, 2.0};
  const std::vector<Complex> b{2.1, -0.1, 0.9};
  CHECK(pair_points(a, b) == std::vector<int>{1, 2, 0});
}
