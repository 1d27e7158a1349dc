#pragma once

#include <array>
#include <vector>

#include "conebesov/geometry.hpp"
#include "conebesov/vec3.hpp"

namespace conebesov {

/// Geodesic triangulation of a spherical domain Omega (a cap of a cone, a
/// hemisphere, or the full sphere). Vertices lie on the unit sphere; boundary
/// edges carry the index of the cone face whose arc they approximate.
struct SphericalCap {
    struct BoundaryEdge {
        int a = -1, b = -1;  // vertex indices
        int face = -1;       // face label of the arc
    };

    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary;
    /// Vertex index of each cone edge direction present in the mesh
    /// (the cap corners); empty for hemisphere/full sphere.
    std::vector<int> corner_vertices;
    int refinement_level = 0;

    bool has_boundary() const { return !boundary.empty(); }

    /// Sum of flat triangle areas; converges to the spherical area from below
    /// under refinement.
    double flat_area() const;

    /// Sum of spherical (geodesic) triangle areas.
    double spherical_area() const;

    /// One midpoint refinement: each triangle splits in four, new vertices
    /// renormalized to the sphere. Boundary labels are inherited, so boundary
    /// vertices stay on the great-circle arcs exactly.
    SphericalCap refined() const;

    /// Refined `times` times.
    SphericalCap refined(int times) const;

    /// Base triangulation of the cone cap: the single corner triangle when
    /// the cap is a proper spherical triangle, otherwise a fan around an
    /// interior point (arcs longer than pi/2 are pre-split).
    static SphericalCap base_from_cone(const PolyhedralCone& cone);

    /// Geodesic triangulation with max edge length <= C / resolution
    /// (resolution >= 1; ceil(log2(resolution)) midpoint refinements).
    static SphericalCap from_cone(const PolyhedralCone& cone, int resolution);

    /// Upper half sphere; boundary = equator, face label 0. Base mesh: north
    /// pole plus 4 equator vertices.
    static SphericalCap hemisphere(int resolution);

    /// Octahedral triangulation of the whole sphere (no boundary).
    static SphericalCap full_sphere(int resolution);
};

}  // namespace conebesov
