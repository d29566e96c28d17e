// Tests for the triangle/hexagon decomposition: maximal inscribed triangle,
// width parameters, the constructed hexagons and their side relations, the
// sandwich chain of deficits, and the triangle-side inequality check.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "bwstab/hexagon.hpp"
#include "bwstab/mixed_area.hpp"
#include "bwstab/polygon.hpp"
#include "support.hpp"

using bwstab::ConvexPolygon;
using bwstab::Vec2;
using bwstab_test::bump_hexagon;
using bwstab_test::kPi;
using bwstab_test::random_polygon;
using bwstab_test::regular_polygon;

TEST_CASE("maximal inscribed triangle") {
    SECTION("a triangle is its own maximum") {
        auto t = regular_polygon(3, 2.0, 0.1);
        auto m = bwstab::max_inscribed_triangle(t);
        REQUIRE(m.size() == 3);
        CHECK(bwstab::area(m) == Catch::Approx(bwstab::area(t)));
    }
    SECTION("regular hexagon: alternate vertices, half the area") {
        auto h = regular_polygon(6, 1.0, 0.0);
        auto m = bwstab::max_inscribed_triangle(h);
        CHECK(bwstab::area(m) == Catch::Approx(0.5 * bwstab::area(h)).epsilon(1e-12));
        // one of the two alternate-vertex triples
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (m[j] == h[i]) idx.push_back(i);
        REQUIRE(idx.size() == 3);
        CHECK(idx[0] % 2 == idx[1] % 2);
        CHECK(idx[1] % 2 == idx[2] % 2);
    }
    SECTION("unit square: half the area, lexicographic tie-break") {
        ConvexPolygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
        auto m = bwstab::max_inscribed_triangle(sq);
        CHECK(bwstab::area(m) == Catch::Approx(0.5));
        // all four triples tie exactly; the first three vertices win
        CHECK(m[0] == Vec2{0, 0});
        CHECK(m[1] == Vec2{1, 0});
        CHECK(m[2] == Vec2{1, 1});
    }
}

TEST_CASE("width parameters") {
    SECTION("K = T gives zeros") {
        auto t = regular_polygon(3, 1.7, 0.4);
        const auto ts = bwstab::width_params(t, bwstab::max_inscribed_triangle(t));
        for (double ti : ts) CHECK(ti == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("regular hexagon gives one third each") {
        // width of the unit-circumradius hexagon across a side of the
        // alternate-vertex triangle is 2, the triangle height is 3/2
        auto h = regular_polygon(6, 1.0, 0.0);
        const auto ts = bwstab::width_params(h, bwstab::max_inscribed_triangle(h));
        for (double ti : ts) CHECK(ti == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SECTION("bumped triangle gives sqrt(eps)/sqrt(3) each") {
        const double eps = 1e-2;
        auto h = bump_hexagon(eps);
        const auto ts = bwstab::width_params(h, bwstab::max_inscribed_triangle(h));
        for (double ti : ts)
            CHECK(ti == Catch::Approx(std::sqrt(eps) / std::sqrt(3.0)).epsilon(1e-9));
    }
}

TEST_CASE("decomposition geometry on random polygons") {
    std::mt19937_64 rng(20260815);
    for (int trial = 0; trial < 200; ++trial) {
        auto k = random_polygon(rng);
        const auto dec = bwstab::decompose(k);
        const double at = bwstab::area(dec.T);

        // 2 area(T) = a_i h_i and t bounds
        double tsum = 0.0;
        for (int i = 0; i < 3; ++i) {
            CHECK(dec.a[i] * dec.h[i] == Catch::Approx(2.0 * at).epsilon(1e-9));
            CHECK(dec.t[i] >= 0.0);
            CHECK(dec.t[i] <= 1.0);
            tsum += dec.t[i];
        }
        CHECK(tsum < 1.5);

        // H2 side lengths: through v_i it is (t_j+t_l) a_i, opposite (1-t_i) a_i
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, l = (i + 2) % 3;
            CHECK((dec.w[i][j] - dec.w[i][l]).norm() ==
                  Catch::Approx((dec.t[j] + dec.t[l]) * dec.a[i]).margin(1e-9));
            CHECK((dec.w[j][i] - dec.w[l][i]).norm() ==
                  Catch::Approx((1.0 - dec.t[i]) * dec.a[i]).margin(1e-9));
        }

        // area(H1) = (1 + t1 + t2 + t3) area(T)
        CHECK(bwstab::area(dec.H1) == Catch::Approx((1.0 + tsum) * at).epsilon(1e-9));

        // closed-form mixed area of H2 with its reflection
        const double want = 2.0 * at *
                            (1.0 + dec.t[0] * dec.t[1] + dec.t[1] * dec.t[2] +
                             dec.t[2] * dec.t[0]);
        CHECK(bwstab::mixed_area_minkowski(dec.H2, bwstab::reflect(dec.H2)) ==
              Catch::Approx(want).epsilon(1e-9));

        // closed-form perimeter of H0
        double l0 = 0.0;
        for (int i = 0; i < 3; ++i)
            l0 += std::sqrt(dec.a[i] * dec.a[i] +
                            4.0 * dec.t[i] * dec.t[i] * dec.h[i] * dec.h[i]);
        CHECK(dec.perimeter_h0 == Catch::Approx(l0).epsilon(1e-12));

        // inscribed-triangle area lower bound via H1
        CHECK(at >= 3.0 * std::sqrt(3.0) / (4.0 * kPi) * bwstab::area(dec.H1) - 1e-9);

        // the convexity flag matches an attempted strict construction
        bool constructible = true;
        try {
            constructible = ConvexPolygon(dec.h0).size() >= 3;
        } catch (const bwstab::DomainError&) {
            constructible = false;
        }
        CHECK(dec.h0_convex == constructible);
    }
}

TEST_CASE("degenerate decomposition of a plain triangle") {
    auto t = regular_polygon(3, 2.0, 0.2);
    const auto dec = bwstab::decompose(t);
    CHECK(dec.H1.size() == 3);
    CHECK(dec.H2.size() == 3);
    CHECK(bwstab::area(dec.H2) == Catch::Approx(bwstab::area(t)).epsilon(1e-12));
    CHECK(dec.perimeter_h0 == Catch::Approx(bwstab::perimeter(t)).epsilon(1e-12));
    CHECK(dec.h0_convex);
}

TEST_CASE("equilateral closed form for equal width parameters") {
    // For T of side 2 and t = (t,t,t): A(H2,-H2) = 2 area(T) (1+3t^2).
    auto base = regular_polygon(3, 2.0 / std::sqrt(3.0), kPi / 2.0);
    for (double tv : {0.1, 0.25, 0.4}) {
        const auto dec = bwstab::build_hexagons(
            bump_hexagon(3.0 * tv * tv),  // bump height sqrt(3)*t = t*h
            base, {tv, tv, tv});
        const double want = 2.0 * bwstab::area(base) * (1.0 + 3.0 * tv * tv);
        CHECK(bwstab::mixed_area_minkowski(dec.H2, bwstab::reflect(dec.H2)) ==
              Catch::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("a decomposition with nonconvex H0") {
    // Quadrilateral found by randomized search: one large width parameter
    // next to two zero ones bends the bump chain inward at a vertex of T.
    ConvexPolygon k({{-5.5914744784972772, 7.0889434447723119},
                     {-1.8031471537530503, -1.1987913247565789},
                     {8.0162841690044964, -8.4355969657779895},
                     {5.0552091724993069, -1.7397728389682214}});
    const auto dec = bwstab::decompose(k);
    CHECK_FALSE(dec.h0_convex);
    CHECK_THROWS_AS(ConvexPolygon(dec.h0), bwstab::DomainError);
    // the chain still holds through the closed-form perimeter
    CHECK_NOTHROW(bwstab::chain_check(k));
}

TEST_CASE("sandwich chain of deficits") {
    SECTION("regular triangle: all three vanish") {
        const auto rep = bwstab::chain_check(regular_polygon(3, 2.0, 0.9));
        CHECK(std::abs(rep.deficit_k) <= 1e-9);
        CHECK(std::abs(rep.deficit_h1) <= 1e-9);
        CHECK(std::abs(rep.deficit_h0) <= 1e-9);
    }
    SECTION("bumped triangle at eps = 1e-2") {
        const auto rep = bwstab::chain_check(bump_hexagon(1e-2));
        CHECK(rep.deficit_k == Catch::Approx(0.36).epsilon(1e-9));
        CHECK(rep.deficit_k >= rep.deficit_h1 - 1e-12);
        CHECK(rep.deficit_h1 >= rep.deficit_h0 - 1e-12);
    }
    SECTION("200 perturbed regular triangles") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> jitter(-0.05, 0.05);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<Vec2> pts;
            for (int i = 0; i < 3; ++i) {
                const double ang = kPi / 2.0 + 2.0 * kPi * i / 3.0;
                pts.push_back({2.0 * std::cos(ang) + jitter(rng),
                               2.0 * std::sin(ang) + jitter(rng)});
            }
            CHECK_NOTHROW(bwstab::chain_check(ConvexPolygon(pts)));
        }
    }
    SECTION("random convex polygons") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 100; ++trial) {
            const auto rep = bwstab::chain_check(random_polygon(rng));
            CHECK(rep.deficit_k >= rep.deficit_h1 - 1e-9 * std::max(1.0, rep.deficit_k));
            CHECK(rep.deficit_h1 >= rep.deficit_h0 - 1e-9 * std::max(1.0, rep.deficit_k));
            CHECK(rep.deficit_h0 >= -1e-9);
        }
    }
}

TEST_CASE("inscribed-triangle area bound of a regular triangle") {
    // Claim: a triangle inscribed in a regular triangle of side b with some
    // side of length a (b/2 <= a <= b) has area at most (a/b) of the whole.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double b = 2.0;
    auto t0 = regular_polygon(3, b / std::sqrt(3.0), kPi / 2.0);
    const double a0 = bwstab::area(t0);
    for (int trial = 0; trial < 1000; ++trial) {
        // uniform points in t0 by barycentric folding
        std::vector<Vec2> pts;
        for (int i = 0; i < 3; ++i) {
            double r1 = u(rng), r2 = u(rng);
            if (r1 + r2 > 1.0) {
                r1 = 1.0 - r1;
                r2 = 1.0 - r2;
            }
            pts.push_back(t0[0] + (t0[1] - t0[0]) * r1 + (t0[2] - t0[0]) * r2);
        }
        const double area =
            0.5 * std::abs(bwstab::cross(pts[1] - pts[0], pts[2] - pts[0]));
        double shortest = (pts[1] - pts[0]).norm();
        shortest = std::min(shortest, (pts[2] - pts[1]).norm());
        shortest = std::min(shortest, (pts[0] - pts[2]).norm());
        const double a = std::max(shortest, b / 2.0);
        CHECK(area <= a / b * a0 + 1e-9);
    }
}

TEST_CASE("triangle side-length inequality check") {
    SECTION("xi = 0 reduces to the triangle inequality") {
        CHECK(bwstab::claim_33_check(3.0, 2.0, 1.5, 0.0));
    }
    SECTION("isosceles with height exactly 2 xi") {
        for (double rho1 : {0.5, 1.0, 2.0, 5.0}) {
            for (double f : {0.1, 0.5, 1.0}) {
                const double xi = f * rho1;  // area = xi*rho1 exactly
                const double side = 0.5 * std::sqrt(rho1 * rho1 + 16.0 * xi * xi);
                CHECK(bwstab::claim_33_check(rho1, side, side, xi));
            }
        }
    }
    SECTION("random valid triangles") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int done = 0;
        while (done < 10000) {
            const double r1 = 0.1 + 9.9 * u(rng);
            const double r2 = 0.1 + 9.9 * u(rng);
            const double r3 = 0.1 + 9.9 * u(rng);
            if (r1 > r2 + r3 || r2 > r3 + r1 || r3 > r1 + r2) continue;
            const double s = (r1 + r2 + r3) / 2.0;
            const double area = std::sqrt(
                std::max(0.0, s * (s - r1) * (s - r2) * (s - r3)));
            const double xi = u(rng) * std::min(r1, area / r1);
            CHECK(bwstab::claim_33_check(r1, r2, r3, xi));
            ++done;
        }
    }
    SECTION("precondition violations") {
        CHECK_THROWS_AS(bwstab::claim_33_check(10.0, 1.0, 1.0, 0.0), bwstab::DomainError);
        CHECK_THROWS_AS(bwstab::claim_33_check(1.0, 1.0, 1.0, 2.0), bwstab::DomainError);
        CHECK_THROWS_AS(bwstab::claim_33_check(1.0, 1.0, 1.0, -0.1), bwstab::DomainError);
        // area of the unit equilateral triangle is ~0.433 < xi*rho1 = 0.9
        CHECK_THROWS_AS(bwstab::claim_33_check(1.0, 1.0, 1.0, 0.9), bwstab::DomainError);
    }
}
