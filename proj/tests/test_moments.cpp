#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "pascaltri/error.hpp"
#include "pascaltri/moments.hpp"
#include "pascaltri/serialize.hpp"

using namespace pascaltri;

namespace {

const Complex I{0.0, 1.0};

PixelCloud cloud_of(std::initializer_list<Pixel> pixels) { return PixelCloud(std::vector<Pixel>(pixels)); }

PixelCloud roots4() { return cloud_of({{1.0, 1}, {I, 1}, {-1.0, 1}, {-I, 1}}); }

}  // namespace

TEST_CASE("compute_moment on small clouds") {
  const auto one = cloud_of({{1.0, 2}});
  for (int j = 0; j < 5; ++j) {
    for (int l = 0; l < 5; ++l) CHECK(compute_moment(one, j, l) == Complex(2.0));
  }
  const auto i_cloud = cloud_of({{I, 1}});
  CHECK(compute_moment(i_cloud, 1, 0) == I);
  CHECK(compute_moment(i_cloud, 0, 1) == -I);
  CHECK(compute_moment(i_cloud, 1, 1) == Complex(1.0));

  const auto pair = cloud_of({{1.0, 1}, {-1.0, 1}});
  CHECK(compute_moment(pair, 2, 0) == Complex(2.0));
  CHECK(compute_moment(pair, 1, 0) == Complex(0.0));

  CHECK(compute_moment(PixelCloud{}, 3, 2) == Complex(0.0));
  CHECK_THROWS_AS(compute_moment(pair, -1, 0), ValidationError);
}

TEST_CASE("moment table examples") {
  const MomentTable origin = compute_moment_table(cloud_of({{0.0, 3}}), 2);
  for (int j = 0; j <= 2; ++j) {
    for (int l = 0; l <= 2; ++l) CHECK(origin(j, l) == Complex(j + l == 0 ? 3.0 : 0.0));
  }
  const MomentTable t = compute_moment_table(roots4(), 4);
  CHECK(std::abs(t(0, 4) - 4.0) < 1e-15);
  CHECK(std::abs(t(0, 2)) < 1e-15);
  CHECK(std::abs(t(1, 1) - 4.0) < 1e-15);
}

TEST_CASE("moment table matches the per-entry oracle and keeps its invariants") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = oracle::random_cloud(rng, 6);
    const MomentTable t = compute_moment_table(cloud, 7);
    for (int j = 0; j <= 7; ++j) {
      for (int l = 0; l <= 7; ++l) {
        const Complex ref = oracle::moment(cloud, j, l);
        CHECK(std::abs(t(j, l) - ref) <= 1e-13 * (1.0 + std::abs(ref)));
        CHECK(std::abs(t(j, l) - std::conj(t(l, j))) <= 1e-12 * (1.0 + std::abs(t(j, l))));
      }
      CHECK(t(j, j).imag() == 0.0);
      CHECK(t(j, j).real() >= 0.0);
    }
    CHECK(t.conjugate_asymmetry() <= 1e-12);
  }
}

TEST_CASE("moments are additive over disjoint clouds") {
  std::mt19937_64 rng(12);
  const auto a = oracle::random_cloud(rng, 5);
  const auto b = oracle::map_points(oracle::random_cloud(rng, 4), [](Complex z) { return z + 3.0; });
  std::vector<Pixel> both = a.pixels();
  both.insert(both.end(), b.pixels().begin(), b.pixels().end());
  const auto ta = compute_moment_table(a, 6);
  const auto tb = compute_moment_table(b, 6);
  const auto tu = compute_moment_table(PixelCloud(both), 6);
  for (int j = 0; j <= 6; ++j) {
    for (int l = 0; l <= 6; ++l) {
      CHECK(std::abs(tu(j, l) - ta(j, l) - tb(j, l)) <= 1e-12 * (1.0 + std::abs(tu(j, l))));
    }
  }
}

TEST_CASE("summation order does not depend on input order") {
  std::mt19937_64 rng(13);
  const auto cloud = oracle::random_cloud(rng, 9);
  std::vector<Pixel> shuffled = cloud.pixels();
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto a = compute_moment_table(cloud, 6);
  const auto b = compute_moment_table(PixelCloud(shuffled), 6);
  for (int j = 0; j <= 6; ++j) {
    for (int l = 0; l <= 6; ++l) CHECK(a(j, l) == b(j, l));
  }
}

TEST_CASE("zero-intensity pixels stay in the cloud but not in the moments") {
  const auto cloud = cloud_of({{1.0, 1}, {2.0 + I, 0}});
  CHECK(cloud.size() == 2);
  CHECK(cloud.nonzero_count() == 1);
  CHECK(compute_moment(cloud, 3, 1) == Complex(1.0));
}

TEST_CASE("binomials") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(10, 5) == 252);
  for (int n = 0; n <= 60; ++n) {
    CHECK(binomial(n, 0) == 1);
    for (int k = 0; k <= n; ++k) CHECK(binomial(n, k) == oracle::binomial_exact(n, k));
  }
  CHECK_THROWS_AS(binomial(4, 5), ValidationError);
  CHECK_THROWS_AS(binomial(4, -1), ValidationError);
  CHECK_THROWS_AS(binomial(kDefaultMaxOrder + 1, 1), ValidationError);

  set_max_order(130);
  CHECK(binomial(130, 65) == oracle::binomial_exact(130, 65));
  set_max_order(kDefaultMaxOrder);
  CHECK_THROWS_AS(set_max_order(131), ValidationError);
}

TEST_CASE("pascal triangle layout") {
  const auto t = compute_moment_table(roots4(), 4);
  const PascalTriangle tri = pascal_triangle(t, 4);
  CHECK(tri.rows.size() == 5);
  CHECK(tri.rows[0].size() == 1);
  CHECK(tri.rows[0][0] == t(0, 0));
  CHECK(std::abs(tri.rows[4][2] - 24.0) < 1e-14);
  CHECK(tri.frame_tags.empty());
  for (int n = 0; n <= 4; ++n) {
    for (int l = 0; l <= n; ++l) {
      CHECK(std::abs(tri.rows[n][l] - std::conj(tri.rows[n][n - l])) < 1e-13);
    }
  }
  CHECK_THROWS_AS(pascal_triangle(t, 5), ValidationError);
}

TEST_CASE("triangle of a single pixel is rho C(n,l) z^l conj(z)^(n-l)") {
  const Complex z(0.7, -0.4);
  const double rho = 1.3;
  const auto tri = pascal_triangle(compute_moment_table(cloud_of({{z, rho}}), 6), 6);
  for (int n = 0; n <= 6; ++n) {
    for (int l = 0; l <= n; ++l) {
      const Complex ref = rho * oracle::binomial(n, l) * std::pow(z, l) * std::pow(std::conj(z), n - l);
      CHECK(std::abs(tri.rows[n][l] - ref) <= 1e-14 * (1.0 + std::abs(ref)));
    }
  }
}

TEST_CASE("table_from_triangle inverts pascal_triangle") {
  std::mt19937_64 rng(14);
  const auto cloud = oracle::random_cloud(rng, 4);
  const auto t = compute_moment_table(cloud, 6);
  const auto back = table_from_triangle(pascal_triangle(t, 6));
  CHECK(back.order() == 6);
  CHECK(back.max_degree() == 6);
  CHECK(back.has(3, 3));
  CHECK_FALSE(back.has(4, 3));
  for (int j = 0; j <= 6; ++j) {
    for (int l = 0; j + l <= 6; ++l) CHECK(std::abs(back(j, l) - t(j, l)) <= 1e-13 * (1 + std::abs(t(j, l))));
  }
  CHECK_THROWS_AS(static_cast<void>(back.at(4, 3)), ValidationError);

  PascalTriangle broken = pascal_triangle(t, 3);
  broken.rows[3][1] += 0.5;
  CHECK_THROWS_AS(table_from_triangle(broken), ValidationError);
}

TEST_CASE("non-finite moments are reported with their index") {
  const auto far = cloud_of({{1e200, 1}});
  try {
    compute_moment_table(far, 3);
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("moment (0,2)") != std::string::npos);
  }
}

TEST_CASE("cloud validation") {
  CHECK_THROWS_AS(cloud_of({{1.0, -1.0}}), ValidationError);
  CHECK_THROWS_AS(cloud_of({{Complex(NAN, 0.0), 1.0}}), ValidationError);
  CHECK_THROWS_AS(cloud_of({{1.0, 1}, {1.0, 2}}).require_distinct(), ValidationError);
  CHECK(cloud_of({{1.0, 1}, {2.0, 2}}).distinct());
}

TEST_CASE("normalize_coordinates") {
  const auto [single, rec1] = normalize_coordinates(cloud_of({{Complex(10, 10), 1}}));
  CHECK(single.pixels()[0].location == Complex(0.0));
  CHECK(rec1.shift == Complex(10, 10));
  CHECK(rec1.scale == 1.0);

  const auto [pair, rec2] = normalize_coordinates(cloud_of({{0.0, 1}, {4.0, 1}}));
  CHECK(rec2.shift == Complex(2.0));
  CHECK(rec2.scale == 0.5);
  CHECK(pair.pixels()[0].location == Complex(-1.0));
  CHECK(pair.pixels()[1].location == Complex(1.0));

  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = oracle::map_points(oracle::random_cloud(rng, 7),
                                          [](Complex z) { return 300.0 * z + Complex(120, 80); });
    const auto [normalized, record] = normalize_coordinates(cloud);
    double extent = 0.0;
    for (const auto& p : normalized.pixels()) extent = std::max(extent, std::abs(p.location));
    CHECK(std::abs(extent - 1.0) < 1e-14);
    const auto back = undo_record(normalized, record);
    for (std::size_t k = 0; k < cloud.size(); ++k) {
      CHECK(std::abs(back.pixels()[k].location - cloud.pixels()[k].location) <=
            1e-12 * std::abs(cloud.pixels()[k].location));
    }
  }
  CHECK_THROWS_AS(normalize_coordinates(cloud_of({{1.0, 0}})), ValidationError);
}

TEST_CASE("JSON round trip of tables and triangles") {
  std::mt19937_64 rng(16);
  const auto t = compute_moment_table(oracle::random_cloud(rng, 3), 4);
  const auto t2 = table_from_json(nlohmann::json::parse(dump_json(to_json(t))));
  for (int j = 0; j <= 4; ++j) {
    for (int l = 0; l <= 4; ++l) CHECK(t2(j, l) == t(j, l));
  }
  PascalTriangle tri = pascal_triangle(t, 4);
  tri.frame_tags = {FrameTag::translation, FrameTag::rotation};
  tri.frame = MovingFrame{Complex(0.25, -1), 0.5, 1.25, false, true};
  tri.affine = AffineRecord{Complex(3, 4), 0.125};
  const auto doc = to_json(tri);
  CHECK(doc["rows"][1][0] == nlohmann::json::array({tri.rows[1][0].real(), tri.rows[1][0].imag()}));
  const auto tri2 = triangle_from_json(nlohmann::json::parse(dump_json(doc)));
  CHECK(tri2.rows == tri.rows);
  CHECK(tri2.frame_tags == tri.frame_tags);
  REQUIRE(tri2.frame);
  CHECK(tri2.frame->z0 == tri.frame->z0);
  CHECK(tri2.frame->degenerate_scale);
  REQUIRE(tri2.affine);
  CHECK(tri2.affine->scale == 0.125);
  CHECK_THROWS_AS(triangle_from_json(nlohmann::json::parse(R"({"order": 1})")), ValidationError);
  CHECK_THROWS_AS(frame_tag_from_string("shear"), ValidationError);
}

TEST_CASE("cloud CSV uses 17 significant digits") {
  std::ostringstream out;
  write_cloud_csv(out, cloud_of({{Complex(0.1, 1.0 / 3.0), 2.0}}));
  CHECK(out.str() == "x,y,intensity\n0.10000000000000001,0.33333333333333331,2\n");
}
