#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conebesov/vec3.hpp"

namespace conebesov {

/// Thrown when constructed geometry (or parsed config) violates an invariant.
/// The message names the violated invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// One flat face of the cone. The face is the sector swept from
/// edge `edge_from` to edge `edge_to` by rotating positively around the
/// *inward* normal (-outward_normal). The edge pair order therefore fixes
/// which of the two candidate sectors the face covers; reflex faces
/// (sector angle > pi) are allowed.
struct Face {
    int edge_from = -1;
    int edge_to = -1;
    Vec3 outward_normal;
};

/// Great-circle boundary arc of the spherical cap, one per face, in cycle
/// order. `axis` is the inward face normal; rotating `start` around `axis`
/// by `angle` reaches the next cap corner.
struct CapArc {
    int face = -1;
    int from_edge = -1;
    int to_edge = -1;
    Vec3 axis;
    double angle = 0.0;
};

/// Infinite polyhedral cone with apex at the origin: n edge half-lines and
/// n flat faces forming a single cycle. Immutable after construction; all
/// queries are pure functions.
class PolyhedralCone {
public:
    /// Validates all type invariants; throws ValidationError naming the
    /// violated invariant otherwise.
    static PolyhedralCone create(std::vector<Vec3> edge_dirs, std::vector<Face> faces,
                                 bool convex_hint);

    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Vec3& edge_dir(int j) const;
    const Face& face(int j) const { return faces_.at(static_cast<size_t>(j)); }
    bool convex_hint() const { return convex_; }

    /// Distance |x| to the apex.
    static double distance_to_vertex(const Vec3& x) { return norm(x); }

    /// Distance to the edge half-line {t*e_j : t >= 0}; equals |x| when the
    /// projection parameter is negative.
    double distance_to_edge(const Vec3& x, int j) const;

    /// min(1, dist(x, S)) with S the apex together with all edges.
    double min_singular_distance(const Vec3& x) const;

    /// True iff x/|x| lies in the open spherical cap; false at the apex and
    /// on the boundary.
    bool contains(const Vec3& x) const;

    /// Interior dihedral angle at edge j, measured inside the cone.
    double edge_angle(int j) const;

    /// Boundary arcs of the cap in cycle order (starts at edges_[cycle_[0]]).
    const std::vector<CapArc>& cap_arcs() const { return arcs_; }

    /// A point of the open cap, bounded away from the boundary. Used as the
    /// fan apex for cap meshing and as the reference point of the generic
    /// membership test.
    const Vec3& cap_interior_point() const { return interior_point_; }

    /// Generic membership test on the unit sphere (winding number plus
    /// crossing parity against the interior reference point). Exposed
    /// separately so it can be cross-checked against fast paths.
    bool cap_contains_generic(const Vec3& unit_dir) const;

    /// When every face lies in a coordinate plane the cone is a union of
    /// coordinate octants; mask bit o = ((sx)|(sy<<1)|(sz<<2)) with s* the
    /// sign bits. Empty when the fast path does not apply.
    std::optional<unsigned> octant_mask() const { return octant_mask_; }

    // -- box queries (wavelet support cubes, dyadic cells) -----------------

    double box_distance_to_edge(const Box3& b, int j) const;
    double box_max_distance_to_edge(const Box3& b, int j) const;
    /// min over edges of box_distance_to_edge.
    double box_min_edge_distance(const Box3& b) const;

    /// True iff the box meets the open truncated cone K n B(0, radius).
    /// Exact for cones with axis-aligned faces (octant decomposition);
    /// hierarchical sampling otherwise.
    bool box_intersects_truncated(const Box3& b, double radius) const;

private:
    PolyhedralCone() = default;

    std::vector<Vec3> edges_;
    std::vector<Face> faces_;
    std::vector<CapArc> arcs_;          // cycle order
    std::vector<double> edge_angles_;   // theta_j per edge
    std::vector<int> arc_of_face_;      // face index -> position in arcs_
    bool convex_ = false;
    Vec3 interior_point_;
    std::optional<unsigned> octant_mask_;

    bool octant_cell_intersects(unsigned octant, const Box3& b, double radius) const;
};

/// K tilde = K n B(0, radius).
struct TruncatedCone {
    PolyhedralCone cone;
    double radius = 1.0;

    TruncatedCone(PolyhedralCone c, double r);

    bool contains(const Vec3& x) const {
        return norm(x) < radius && cone.contains(x);
    }
};

/// Distance from a point to the half-line {t*dir : t >= 0}, dir unit.
double point_to_ray_distance(const Vec3& x, const Vec3& dir);

/// Distance from a box to the half-line {t*dir : t >= 0}. Closed form for
/// axis-aligned directions, convex 1-D minimization otherwise.
double box_to_ray_distance(const Box3& b, const Vec3& dir);

/// Max over the box of the distance to the half-line (attained at a corner).
double box_to_ray_max_distance(const Box3& b, const Vec3& dir);

// -- canonical cones used across experiments and tests ----------------------

/// The positive octant: edges +x,+y,+z, right-angle edges.
PolyhedralCone make_octant_cone();

/// Complement of the closed positive octant (union of the other 7 coordinate
/// octants); three reentrant edges of angle 3*pi/2.
PolyhedralCone make_fichera_complement_cone();

/// {z > 0} minus the quadrant {x >= 0, y <= 0}: three edges +z, +x, -y with
/// dihedral angles 3*pi/2, pi/2, pi/2. The +z edge carries the reentrant
/// wedge of opening theta = 3*pi/2.
PolyhedralCone make_reentrant_wedge_cone();

}  // namespace conebesov
