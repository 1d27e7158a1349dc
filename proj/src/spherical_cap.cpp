#include "conebesov/spherical_cap.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace conebesov {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 rotate_about_unit_axis(const Vec3& v, const Vec3& axis, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    // L'Huilier via the vector formula tan(E/2) = |a.(bxc)| / (1 + a.b + b.c + c.a)
    const double num = std::abs(dot(a, cross(b, c)));
    const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    return 2.0 * std::atan2(num, den);
}

int refinements_for_resolution(int resolution) {
    if (resolution < 1) throw std::invalid_argument("cap resolution must be >= 1");
    int r = 0;
    while ((1 << r) < resolution) ++r;
    return r;
}

}  // namespace

double SphericalCap::flat_area() const {
    double s = 0.0;
    for (const auto& t : triangles) {
        const Vec3& a = vertices[static_cast<size_t>(t[0])];
        const Vec3& b = vertices[static_cast<size_t>(t[1])];
        const Vec3& c = vertices[static_cast<size_t>(t[2])];
        s += 0.5 * norm(cross(b - a, c - a));
    }
    return s;
}

double SphericalCap::spherical_area() const {
    double s = 0.0;
    for (const auto& t : triangles)
        s += spherical_triangle_area(vertices[static_cast<size_t>(t[0])],
                                     vertices[static_cast<size_t>(t[1])],
                                     vertices[static_cast<size_t>(t[2])]);
    return s;
}

SphericalCap SphericalCap::refined() const {
    SphericalCap out;
    out.vertices = vertices;
    out.corner_vertices = corner_vertices;
    out.refinement_level = refinement_level + 1;

    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const Vec3 m = normalized(vertices[static_cast<size_t>(a)] + vertices[static_cast<size_t>(b)]);
        const int idx = static_cast<int>(out.vertices.size());
        out.vertices.push_back(m);
        midpoint.emplace(key, idx);
        return idx;
    };

    for (const auto& t : triangles) {
        const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({ab, t[1], bc});
        out.triangles.push_back({ca, bc, t[2]});
        out.triangles.push_back({ab, bc, ca});
    }
    for (const auto& e : boundary) {
        const int m = mid(e.a, e.b);
        out.boundary.push_back({e.a, m, e.face});
        out.boundary.push_back({m, e.b, e.face});
    }
    return out;
}

SphericalCap SphericalCap::refined(int times) const {
    SphericalCap cap = *this;
    for (int i = 0; i < times; ++i) cap = cap.refined();
    return cap;
}

SphericalCap SphericalCap::base_from_cone(const PolyhedralCone& cone) {
    SphericalCap cap;
    const auto& arcs = cone.cap_arcs();

    // Polygon path: arcs pre-split so every piece is <= pi/2 (fan triangles
    // need sides shorter than pi).
    struct PathPoint { Vec3 p; int corner_edge; };  // corner_edge >= 0 at cap corners
    std::vector<PathPoint> path;
    std::vector<int> piece_face;  // face label of path segment i -> i+1
    for (const auto& arc : arcs) {
        const Vec3 start = cone.edge_dir(arc.from_edge);
        const int pieces = std::max(1, static_cast<int>(std::ceil(arc.angle / (kPi / 2.0))));
        for (int i = 0; i < pieces; ++i) {
            path.push_back({rotate_about_unit_axis(start, arc.axis, arc.angle * i / pieces),
                            i == 0 ? arc.from_edge : -1});
            piece_face.push_back(arc.face);
        }
    }
    const int np = static_cast<int>(path.size());

    cap.corner_vertices.assign(static_cast<size_t>(cone.edge_count()), -1);

    const bool plain_triangle =
        np == 3 && cone.contains(normalized(path[0].p + path[1].p + path[2].p));
    if (plain_triangle) {
        for (int i = 0; i < 3; ++i) {
            cap.vertices.push_back(path[static_cast<size_t>(i)].p);
            cap.corner_vertices[static_cast<size_t>(path[static_cast<size_t>(i)].corner_edge)] = i;
        }
        cap.triangles.push_back({0, 1, 2});
        for (int i = 0; i < 3; ++i)
            cap.boundary.push_back({i, (i + 1) % 3, piece_face[static_cast<size_t>(i)]});
        return cap;
    }

    // Fan around the interior point.
    cap.vertices.push_back(cone.cap_interior_point());
    for (int i = 0; i < np; ++i) {
        cap.vertices.push_back(path[static_cast<size_t>(i)].p);
        if (path[static_cast<size_t>(i)].corner_edge >= 0)
            cap.corner_vertices[static_cast<size_t>(path[static_cast<size_t>(i)].corner_edge)] = i + 1;
    }
    for (int i = 0; i < np; ++i) {
        const int a = 1 + i, b = 1 + (i + 1) % np;
        cap.triangles.push_back({0, a, b});
        cap.boundary.push_back({a, b, piece_face[static_cast<size_t>(i)]});
    }

    // Sanity: fan triangles must cover the cap (star-shapedness w.r.t. the
    // interior point); verified via triangle centroids.
    for (const auto& t : cap.triangles) {
        const Vec3 c = normalized(cap.vertices[static_cast<size_t>(t[0])] +
                                  cap.vertices[static_cast<size_t>(t[1])] +
                                  cap.vertices[static_cast<size_t>(t[2])]);
        if (!cone.contains(c))
            throw ValidationError(
                "cap is not star-shaped with respect to the chosen interior point; cannot mesh");
    }
    return cap;
}

SphericalCap SphericalCap::from_cone(const PolyhedralCone& cone, int resolution) {
    return base_from_cone(cone).refined(refinements_for_resolution(resolution));
}

SphericalCap SphericalCap::hemisphere(int resolution) {
    SphericalCap cap;
    cap.vertices = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
    for (int i = 0; i < 4; ++i) {
        const int a = 1 + i, b = 1 + (i + 1) % 4;
        cap.triangles.push_back({0, a, b});
        cap.boundary.push_back({a, b, 0});
    }
    return cap.refined(refinements_for_resolution(resolution));
}

SphericalCap SphericalCap::full_sphere(int resolution) {
    SphericalCap cap;
    cap.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    cap.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                     {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    return cap.refined(refinements_for_resolution(resolution));
}

}  // namespace conebesov
