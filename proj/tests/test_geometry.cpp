#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conebesov/geometry.hpp"

using namespace conebesov;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent oracle for the ray distance: dense 1-D minimization over t >= 0.
double ray_distance_brute(const Vec3& x, const Vec3& dir, double t_max = 20.0) {
    double best = norm(x);  // t = 0
    for (int i = 0; i <= 200000; ++i) {
        const double t = t_max * i / 200000.0;
        best = std::min(best, norm(x - dir * t));
    }
    return best;
}
}  // namespace

TEST_CASE("distance to vertex is the Euclidean norm") {
    CHECK(PolyhedralCone::distance_to_vertex({0, 0, 0}) == 0.0);
    CHECK(PolyhedralCone::distance_to_vertex({1, 2, 2}) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(PolyhedralCone::distance_to_vertex({0, 0, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("distance to an edge half-line") {
    const auto cone = make_octant_cone();  // edges +x, +y, +z
    CHECK(cone.distance_to_edge({1, 1, 0}, 2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(cone.distance_to_edge({0, 0, 5}, 2) == doctest::Approx(0.0));

    // Negative projection parameter: the foot is the origin.
    const Vec3 x{0, 1, -1};
    CHECK(cone.distance_to_edge(x, 2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(cone.distance_to_edge(x, 2) ==
          doctest::Approx(ray_distance_brute(x, {0, 0, 1})).epsilon(1e-6));

    CHECK_THROWS_AS((void)cone.distance_to_edge({1, 1, 1}, 3), std::out_of_range);
}

TEST_CASE("min singular distance caps at 1 and covers the apex") {
    const auto cone = make_octant_cone();
    CHECK(cone.min_singular_distance({0, 0, 0}) == doctest::Approx(0.0));
    CHECK(cone.min_singular_distance({3, 3, 3}) == doctest::Approx(1.0));

    // Brute-force oracle over the three coordinate-axis rays.
    const Vec3 x{0.1, 0.1, 1.0};
    const double expected = std::min({ray_distance_brute(x, {1, 0, 0}),
                                      ray_distance_brute(x, {0, 1, 0}),
                                      ray_distance_brute(x, {0, 0, 1})});
    CHECK(cone.min_singular_distance(x) == doctest::Approx(expected).epsilon(1e-6));
    CHECK(cone.min_singular_distance(x) == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("octant membership") {
    const auto cone = make_octant_cone();
    CHECK(cone.contains({1, 1, 1}));
    CHECK_FALSE(cone.contains({-1, 1, 1}));
    CHECK_FALSE(cone.contains({0, 0, 0}));
    CHECK_FALSE(cone.contains({1, 1, 0}));  // boundary excluded
}

TEST_CASE("Fichera complement membership: winding test against the octant decomposition") {
    const auto cone = make_fichera_complement_cone();
    CHECK(cone.contains({-1, 1, 1}));
    CHECK_FALSE(cone.contains({1, 1, 1}));

    REQUIRE(cone.octant_mask().has_value());
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        Vec3 x{u(rng), u(rng), u(rng)};
        if (std::min({std::abs(x.x), std::abs(x.y), std::abs(x.z)}) < 1e-3) continue;
        const bool in_union = !(x.x > 0 && x.y > 0 && x.z > 0);
        CHECK(cone.cap_contains_generic(normalized(x)) == in_union);
        CHECK(cone.contains(x) == in_union);
    }
}

TEST_CASE("membership is scale invariant") {
    const auto cone = make_reentrant_wedge_cone();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        Vec3 x{u(rng), u(rng), u(rng)};
        if (norm(x) < 1e-6) continue;
        for (double t : {0.01, 0.5, 7.0})
            CHECK(cone.contains(x) == cone.contains(x * t));
    }
}

TEST_CASE("edge angles") {
    const auto octant = make_octant_cone();
    double total = 0.0;
    for (int j = 0; j < 3; ++j) {
        CHECK(octant.edge_angle(j) == doctest::Approx(kPi / 2).epsilon(1e-12));
        total += octant.edge_angle(j);
    }
    CHECK(total == doctest::Approx(3.0 * kPi / 2));

    const auto wedge = make_reentrant_wedge_cone();
    CHECK(wedge.edge_angle(0) == doctest::Approx(3.0 * kPi / 2).epsilon(1e-12));
    CHECK(wedge.edge_angle(1) == doctest::Approx(kPi / 2));
    CHECK(wedge.edge_angle(2) == doctest::Approx(kPi / 2));

    const auto fichera = make_fichera_complement_cone();
    for (int j = 0; j < 3; ++j)
        CHECK(fichera.edge_angle(j) == doctest::Approx(3.0 * kPi / 2).epsilon(1e-12));
}

TEST_CASE("edge distance never exceeds vertex distance") {
    const auto cone = make_reentrant_wedge_cone();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        const Vec3 x{u(rng), u(rng), u(rng)};
        for (int j = 0; j < cone.edge_count(); ++j)
            CHECK(cone.distance_to_edge(x, j) <= norm(x) + 1e-12);
    }
}

TEST_CASE("validation names the violated invariant") {
    // Non-unit edge direction.
    CHECK_THROWS_WITH_AS(
        PolyhedralCone::create({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                               {{0, 1, {0, 0, -1}}, {1, 2, {-1, 0, 0}}, {2, 0, {0, -1, 0}}}, true),
        doctest::Contains("unit vector"), ValidationError);

    // Normal not orthogonal to its edges.
    CHECK_THROWS_WITH_AS(
        PolyhedralCone::create({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                               {{0, 1, {0, 0.6, -0.8}}, {1, 2, {-1, 0, 0}}, {2, 0, {0, -1, 0}}},
                               true),
        doctest::Contains("orthogonal"), ValidationError);

    // Adjacency not a single cycle (two faces starting at the same edge).
    CHECK_THROWS_WITH_AS(
        PolyhedralCone::create({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                               {{0, 1, {0, 0, -1}}, {0, 2, {0, -1, 0}}, {2, 0, {0, -1, 0}}},
                               true),
        doctest::Contains("cycle"), ValidationError);
}

TEST_CASE("flat dihedral angles are rejected") {
    // Two faces in the same plane meeting at the +z edge: theta = pi.
    const double s = std::sqrt(0.5);
    CHECK_THROWS_WITH_AS(
        PolyhedralCone::create(
            {{0, 0, 1}, {1, 0, 0}, {-s, -s, 0}},
            {{0, 1, {0, -1, 0}}, {1, 2, {0, 0, -1}}, {2, 0, {s, -s, 0}}}, false),
        doctest::Contains("theta = pi"), ValidationError);
}

TEST_CASE("box queries agree with brute force") {
    const auto cone = make_octant_cone();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 300; ++i) {
        Vec3 lo{u(rng), u(rng), u(rng)};
        Vec3 sz{std::abs(u(rng)) * 0.3 + 0.01, std::abs(u(rng)) * 0.3 + 0.01,
                std::abs(u(rng)) * 0.3 + 0.01};
        const Box3 box{lo, lo + sz};

        // Brute-force min/max distance over a box lattice.
        double bf_min = 1e30, bf_max = 0.0;
        for (int a = 0; a <= 8; ++a)
            for (int b = 0; b <= 8; ++b)
                for (int c = 0; c <= 8; ++c) {
                    const Vec3 p{box.lo.x + (box.hi.x - box.lo.x) * a / 8.0,
                                 box.lo.y + (box.hi.y - box.lo.y) * b / 8.0,
                                 box.lo.z + (box.hi.z - box.lo.z) * c / 8.0};
                    const double d = point_to_ray_distance(p, {0, 0, 1});
                    bf_min = std::min(bf_min, d);
                    bf_max = std::max(bf_max, d);
                }
        CHECK(cone.box_distance_to_edge(box, 2) <= bf_min + 1e-9);
        CHECK(cone.box_distance_to_edge(box, 2) >= bf_min - 0.1);  // lattice resolution slack
        CHECK(cone.box_max_distance_to_edge(box, 2) == doctest::Approx(bf_max).epsilon(1e-9));
    }
}

TEST_CASE("box-to-ray distance for oblique directions matches the brute force") {
    const Vec3 dir = normalized({1.0, 2.0, -0.5});
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        Vec3 lo{u(rng), u(rng), u(rng)};
        const Box3 box{lo, lo + Vec3{0.4, 0.3, 0.2}};
        double bf = 1e30;
        for (int a = 0; a <= 12; ++a)
            for (int b = 0; b <= 12; ++b)
                for (int c = 0; c <= 12; ++c) {
                    const Vec3 p{box.lo.x + 0.4 * a / 12, box.lo.y + 0.3 * b / 12,
                                 box.lo.z + 0.2 * c / 12};
                    bf = std::min(bf, point_to_ray_distance(p, dir));
                }
        const double got = box_to_ray_distance(box, dir);
        CHECK(got <= bf + 1e-9);
        CHECK(got >= bf - 0.06);
    }
}

TEST_CASE("truncated box intersection on the octant") {
    const auto cone = make_octant_cone();
    // Inside.
    CHECK(cone.box_intersects_truncated({{0.1, 0.1, 0.1}, {0.2, 0.2, 0.2}}, 1.0));
    // Outside the ball.
    CHECK_FALSE(cone.box_intersects_truncated({{0.9, 0.9, 0.9}, {1.2, 1.2, 1.2}}, 1.0));
    // Outside the cone but touching its boundary plane.
    CHECK_FALSE(cone.box_intersects_truncated({{-0.5, 0.2, 0.2}, {0.0, 0.4, 0.4}}, 1.0));
    // Straddling a face.
    CHECK(cone.box_intersects_truncated({{-0.1, 0.2, 0.2}, {0.1, 0.4, 0.4}}, 1.0));
}
