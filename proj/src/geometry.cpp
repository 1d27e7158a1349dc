#include "conebesov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace conebesov {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 rotate_about_unit_axis(const Vec3& v, const Vec3& axis, double angle) {
    // Rodrigues rotation, axis unit.
    const double c = std::cos(angle), s = std::sin(angle);
    return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

double wrap_angle_0_2pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

/// Angle of `v` measured from `ref` rotating positively around `axis`;
/// v, ref unit and orthogonal to axis. Result in [0, 2*pi).
double angle_around_axis(const Vec3& v, const Vec3& ref, const Vec3& axis) {
    const Vec3 ref_perp = cross(axis, ref);
    return wrap_angle_0_2pi(std::atan2(dot(v, ref_perp), dot(v, ref)));
}

int axis_aligned_component(const Vec3& n, double tol) {
    // Returns the single nonzero component index, or -1.
    int idx = -1;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(n[i]) > tol) {
            if (idx >= 0) return -1;
            idx = i;
        }
    }
    return idx;
}

/// Deterministic quasi-uniform directions on the sphere (Fibonacci lattice).
std::vector<Vec3> fibonacci_sphere(int count) {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<size_t>(count));
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return pts;
}

}  // namespace

double point_to_ray_distance(const Vec3& x, const Vec3& dir) {
    const double t = std::max(0.0, dot(x, dir));
    return norm(x - dir * t);
}

double box_to_ray_distance(const Box3& b, const Vec3& dir) {
    const int ax = axis_aligned_component(dir, 1e-14);
    if (ax >= 0) {
        // Separable: cross-plane distance plus the axial defect.
        const bool positive = dir[ax] > 0.0;
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            double d;
            if (i == ax) {
                d = positive ? std::max(0.0, -b.hi[i]) : std::max(0.0, b.lo[i]);
            } else {
                d = std::max({b.lo[i], -b.hi[i], 0.0});
            }
            s += d * d;
        }
        return std::sqrt(s);
    }
    // dist(t) = dist(t*dir, box) is convex in t; golden-section on [0, tmax].
    auto fdist = [&](double t) {
        const Vec3 p = dir * t;
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double d = std::max({b.lo[i] - p[i], p[i] - b.hi[i], 0.0});
            s += d * d;
        }
        return s;
    };
    double tmax = 0.0;
    for (int c = 0; c < 8; ++c) tmax = std::max(tmax, dot(b.corner(c), dir));
    tmax = std::max(tmax, 0.0) + 1e-9;
    double a = 0.0, c2 = tmax;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c2 - gr * (c2 - a), x2 = a + gr * (c2 - a);
    double f1 = fdist(x1), f2 = fdist(x2);
    for (int it = 0; it < 120 && (c2 - a) > 1e-14 * (1.0 + tmax); ++it) {
        if (f1 < f2) {
            c2 = x2; x2 = x1; f2 = f1;
            x1 = c2 - gr * (c2 - a); f1 = fdist(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (c2 - a); f2 = fdist(x2);
        }
    }
    return std::sqrt(std::min({fdist(a), f1, f2, fdist(c2)}));
}

double box_to_ray_max_distance(const Box3& b, const Vec3& dir) {
    double m = 0.0;
    for (int c = 0; c < 8; ++c) m = std::max(m, point_to_ray_distance(b.corner(c), dir));
    return m;
}

// ---------------------------------------------------------------------------
// Construction and validation
// ---------------------------------------------------------------------------

PolyhedralCone PolyhedralCone::create(std::vector<Vec3> edge_dirs, std::vector<Face> faces,
                                      bool convex_hint) {
    PolyhedralCone cone;
    const int n = static_cast<int>(edge_dirs.size());
    if (n < 3)
        throw ValidationError("cone must have at least 3 edges, got " + std::to_string(n));
    if (static_cast<int>(faces.size()) != n)
        throw ValidationError("face count must equal edge count n (faces=" +
                              std::to_string(faces.size()) + ", n=" + std::to_string(n) + ")");

    for (int j = 0; j < n; ++j) {
        const double len = norm(edge_dirs[static_cast<size_t>(j)]);
        if (std::abs(len - 1.0) > 1e-12)
            throw ValidationError("edge " + std::to_string(j) +
                                  " direction must be a unit vector (|e|-1 = " +
                                  std::to_string(len - 1.0) + ", tolerance 1e-12)");
    }
    for (int f = 0; f < n; ++f) {
        Face& face = faces[static_cast<size_t>(f)];
        if (face.edge_from < 0 || face.edge_from >= n || face.edge_to < 0 || face.edge_to >= n ||
            face.edge_from == face.edge_to)
            throw ValidationError("face " + std::to_string(f) +
                                  " must reference two distinct valid edge indices");
        const double nn = norm(face.outward_normal);
        if (std::abs(nn - 1.0) > 1e-10)
            throw ValidationError("face " + std::to_string(f) + " normal must be unit (|n|-1 = " +
                                  std::to_string(nn - 1.0) + ")");
        for (int which : {face.edge_from, face.edge_to}) {
            const double d = dot(edge_dirs[static_cast<size_t>(which)], face.outward_normal);
            if (std::abs(d) > 1e-10)
                throw ValidationError("face " + std::to_string(f) + " normal must be orthogonal to its edge directions (|e.n| = " +
                                      std::to_string(std::abs(d)) + ", tolerance 1e-10)");
        }
    }

    // Each edge must start exactly one face arc and end exactly one, and the
    // directed face arcs must form a single cycle of length n.
    std::vector<int> out_face(static_cast<size_t>(n), -1), in_face(static_cast<size_t>(n), -1);
    for (int f = 0; f < n; ++f) {
        const Face& face = faces[static_cast<size_t>(f)];
        if (out_face[static_cast<size_t>(face.edge_from)] != -1)
            throw ValidationError("edge " + std::to_string(face.edge_from) +
                                  " is the start of more than one face; adjacency must be a single cycle");
        if (in_face[static_cast<size_t>(face.edge_to)] != -1)
            throw ValidationError("edge " + std::to_string(face.edge_to) +
                                  " is the end of more than one face; adjacency must be a single cycle");
        out_face[static_cast<size_t>(face.edge_from)] = f;
        in_face[static_cast<size_t>(face.edge_to)] = f;
    }
    std::vector<int> cycle;
    {
        int e = 0;
        for (int step = 0; step < n; ++step) {
            cycle.push_back(e);
            const int f = out_face[static_cast<size_t>(e)];
            if (f < 0) throw ValidationError("edge " + std::to_string(e) + " starts no face");
            e = faces[static_cast<size_t>(f)].edge_to;
        }
        if (e != 0)
            throw ValidationError("face/edge adjacency graph is not a single cycle of length n");
    }

    cone.edges_ = std::move(edge_dirs);
    cone.faces_ = std::move(faces);
    cone.convex_ = convex_hint;

    // Build boundary arcs in cycle order and face arc angles.
    cone.arc_of_face_.assign(static_cast<size_t>(n), -1);
    for (int pos = 0; pos < n; ++pos) {
        const int e = cycle[static_cast<size_t>(pos)];
        const int f = out_face[static_cast<size_t>(e)];
        const Face& face = cone.faces_[static_cast<size_t>(f)];
        CapArc arc;
        arc.face = f;
        arc.from_edge = face.edge_from;
        arc.to_edge = face.edge_to;
        arc.axis = -face.outward_normal;  // positive rotation around the inward normal
        arc.angle = angle_around_axis(cone.edges_[static_cast<size_t>(arc.to_edge)],
                                      cone.edges_[static_cast<size_t>(arc.from_edge)], arc.axis);
        if (arc.angle < 1e-9 || arc.angle > 2.0 * kPi - 1e-9)
            throw ValidationError("face " + std::to_string(f) + " sweeps a degenerate sector (angle " +
                                  std::to_string(arc.angle) + ")");
        cone.arc_of_face_[static_cast<size_t>(f)] = pos;
        cone.arcs_.push_back(arc);
    }

    // Interior dihedral angle at each edge from the two adjacent boundary
    // tangents; the arc orientation disambiguates the interior side.
    cone.edge_angles_.assign(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        const CapArc& leaving = cone.arcs_[static_cast<size_t>(cone.arc_of_face_[static_cast<size_t>(out_face[static_cast<size_t>(j)])])];
        const CapArc& arriving = cone.arcs_[static_cast<size_t>(cone.arc_of_face_[static_cast<size_t>(in_face[static_cast<size_t>(j)])])];
        const Vec3& e = cone.edges_[static_cast<size_t>(j)];
        const Vec3 t_out = cross(leaving.axis, e);           // along the leaving arc
        const Vec3 t_in = -cross(arriving.axis, e);          // back along the arriving arc
        const double theta = angle_around_axis(t_in, t_out, e);
        if (std::abs(theta - kPi) < 1e-9)
            throw ValidationError("edge " + std::to_string(j) +
                                  " has a flat dihedral angle (theta = pi), rejected as degenerate");
        if (theta < 1e-9 || theta > 2.0 * kPi - 1e-9)
            throw ValidationError("edge " + std::to_string(j) + " dihedral angle out of (0, 2*pi)");
        cone.edge_angles_[static_cast<size_t>(j)] = theta;
    }

    // Octant-decomposition fast path when every face is in a coordinate plane.
    bool axis_aligned = true;
    for (const Face& f : cone.faces_)
        if (axis_aligned_component(f.outward_normal, 1e-12) < 0) axis_aligned = false;

    // Interior reference point: definitive winding +1 candidates, farthest
    // from the boundary arcs.
    {
        auto boundary_dist = [&](const Vec3& u) {
            double dmin = kPi;
            for (const CapArc& arc : cone.arcs_) {
                const int pieces = std::max(1, static_cast<int>(std::ceil(arc.angle / 0.1)));
                for (int i = 0; i <= pieces; ++i) {
                    const Vec3 p = rotate_about_unit_axis(
                        cone.edges_[static_cast<size_t>(arc.from_edge)], arc.axis,
                        arc.angle * i / pieces);
                    dmin = std::min(dmin, std::acos(std::clamp(dot(u, p), -1.0, 1.0)));
                }
            }
            return dmin;
        };
        double best = -1.0;
        for (const Vec3& u : fibonacci_sphere(2000)) {
            // Winding +1 identifies interior points unambiguously.
            // (Computed inline; cap_contains_generic needs interior_point_.)
            const double d = boundary_dist(u);
            if (d < 0.05 || d <= best) continue;
            // compute winding for u
            double total = 0.0;
            bool degenerate = false;
            for (const CapArc& arc : cone.arcs_) {
                const int pieces = std::max(2, static_cast<int>(std::ceil(arc.angle / 0.2)));
                Vec3 prev = cone.edges_[static_cast<size_t>(arc.from_edge)];
                for (int i = 1; i <= pieces; ++i) {
                    const Vec3 cur = rotate_about_unit_axis(prev, arc.axis, arc.angle / pieces);
                    // longitude increment of prev->cur around pole u
                    const Vec3 a = prev - u * dot(prev, u);
                    const Vec3 b = cur - u * dot(cur, u);
                    if (norm(a) < 1e-12 || norm(b) < 1e-12) { degenerate = true; break; }
                    const double inc = std::atan2(dot(cross(a, b), u), dot(a, b));
                    total += inc;
                    prev = cur;
                }
                if (degenerate) break;
            }
            if (degenerate) continue;
            const int w = static_cast<int>(std::lround(total / (2.0 * kPi)));
            if (w == 1) {
                best = d;
                cone.interior_point_ = u;
            }
        }
        if (best < 0.0)
            throw ValidationError("could not locate an interior point of the spherical cap; geometry degenerate");
    }

    if (axis_aligned) {
        unsigned mask = 0;
        for (unsigned o = 0; o < 8; ++o) {
            const Vec3 center{(o & 1) ? 1.0 : -1.0, (o & 2) ? 1.0 : -1.0, (o & 4) ? 1.0 : -1.0};
            if (cone.cap_contains_generic(normalized(center))) mask |= (1u << o);
        }
        if (mask == 0)
            throw ValidationError("axis-aligned cone contains no coordinate octant; geometry degenerate");
        cone.octant_mask_ = mask;
    }

    return cone;
}

const Vec3& PolyhedralCone::edge_dir(int j) const {
    if (j < 0 || j >= edge_count())
        throw std::out_of_range("edge index " + std::to_string(j) + " out of range [0, " +
                                std::to_string(edge_count()) + ")");
    return edges_[static_cast<size_t>(j)];
}

double PolyhedralCone::distance_to_edge(const Vec3& x, int j) const {
    return point_to_ray_distance(x, edge_dir(j));
}

double PolyhedralCone::min_singular_distance(const Vec3& x) const {
    double d = norm(x);  // apex; also an upper bound for every edge distance
    for (int j = 0; j < edge_count(); ++j)
        d = std::min(d, point_to_ray_distance(x, edges_[static_cast<size_t>(j)]));
    return std::min(1.0, d);
}

double PolyhedralCone::edge_angle(int j) const {
    if (j < 0 || j >= edge_count())
        throw std::out_of_range("edge index " + std::to_string(j) + " out of range [0, " +
                                std::to_string(edge_count()) + ")");
    return edge_angles_[static_cast<size_t>(j)];
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

bool PolyhedralCone::cap_contains_generic(const Vec3& u) const {
    // Winding number of the boundary path around u decides when it is +-1;
    // winding 0 means u and its antipode lie on the same side, resolved by
    // crossing parity of the geodesic u -> interior reference point.
    double total = 0.0;
    bool degenerate = false;
    for (const CapArc& arc : arcs_) {
        const int pieces = std::max(2, static_cast<int>(std::ceil(arc.angle / 0.2)));
        Vec3 prev = edges_[static_cast<size_t>(arc.from_edge)];
        for (int i = 1; i <= pieces; ++i) {
            const Vec3 cur = rotate_about_unit_axis(prev, arc.axis, arc.angle / pieces);
            const Vec3 a = prev - u * dot(prev, u);
            const Vec3 b = cur - u * dot(cur, u);
            if (norm(a) < 1e-12 || norm(b) < 1e-12) { degenerate = true; break; }
            total += std::atan2(dot(cross(a, b), u), dot(a, b));
            prev = cur;
        }
        if (degenerate) break;
    }
    if (!degenerate) {
        const int w = static_cast<int>(std::lround(total / (2.0 * kPi)));
        if (w == 1) return true;
        if (w == -1) return false;
    }

    // Crossing parity against the interior reference point.
    const Vec3& ref = interior_point_;
    if (std::abs(dot(u, ref)) > 1.0 - 1e-12) return dot(u, ref) > 0.0;
    const Vec3 seg_normal = normalized(cross(u, ref));
    const double seg_len = std::acos(std::clamp(dot(u, ref), -1.0, 1.0));
    const Vec3 seg_perp = cross(seg_normal, u);  // frame: u, seg_perp
    int crossings = 0;
    for (const CapArc& arc : arcs_) {
        const Vec3& start = edges_[static_cast<size_t>(arc.from_edge)];
        // Intersection candidates of the two great circles.
        Vec3 c = cross(seg_normal, arc.axis);
        const double cn = norm(c);
        if (cn < 1e-13) continue;  // coplanar circles: treat as no transversal crossing
        c = c / cn;
        for (int sgn = 0; sgn < 2; ++sgn) {
            const Vec3 p = sgn ? -c : c;
            const double along_seg = std::atan2(dot(p, seg_perp), dot(p, u));
            if (along_seg < 1e-12 || along_seg > seg_len - 1e-12) continue;
            const double along_arc = angle_around_axis(p, start, arc.axis);
            if (along_arc < 1e-12 || along_arc > arc.angle - 1e-12) continue;
            ++crossings;
        }
    }
    return (crossings % 2) == 0;
}

bool PolyhedralCone::contains(const Vec3& x) const {
    const double r = norm(x);
    if (r < 1e-300) return false;  // apex excluded by convention
    const Vec3 u = x / r;

    if (octant_mask_) {
        // Interior iff every octant consistent with the sign pattern of u is
        // part of the cone (zero coordinates make several octants consistent).
        const unsigned mask = *octant_mask_;
        for (unsigned o = 0; o < 8; ++o) {
            bool consistent = true;
            for (int i = 0; i < 3; ++i) {
                const bool pos = (o >> i) & 1u;
                if ((pos && u[i] < 0.0) || (!pos && u[i] > 0.0)) { consistent = false; break; }
            }
            if (consistent && !((mask >> o) & 1u)) return false;
        }
        return true;
    }
    if (convex_) {
        for (const Face& f : faces_)
            if (dot(u, f.outward_normal) >= 0.0) return false;
        return true;
    }
    return cap_contains_generic(u);
}

// ---------------------------------------------------------------------------
// Box queries
// ---------------------------------------------------------------------------

double PolyhedralCone::box_distance_to_edge(const Box3& b, int j) const {
    return box_to_ray_distance(b, edge_dir(j));
}

double PolyhedralCone::box_max_distance_to_edge(const Box3& b, int j) const {
    return box_to_ray_max_distance(b, edge_dir(j));
}

double PolyhedralCone::box_min_edge_distance(const Box3& b) const {
    double d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < edge_count(); ++j)
        d = std::min(d, box_to_ray_distance(b, edges_[static_cast<size_t>(j)]));
    return d;
}

bool PolyhedralCone::octant_cell_intersects(unsigned o, const Box3& b, double radius) const {
    // Clip the box to the open octant, then require the clipped box to meet
    // the open ball.
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        const bool pos = (o >> i) & 1u;
        if (pos) {
            if (b.hi[i] <= 0.0) return false;       // no interior overlap
            const double lo = std::max(b.lo[i], 0.0);
            s += lo * lo;
        } else {
            if (b.lo[i] >= 0.0) return false;
            const double hi = std::min(b.hi[i], 0.0);
            s += hi * hi;
        }
    }
    return s < radius * radius;
}

bool PolyhedralCone::box_intersects_truncated(const Box3& b, double radius) const {
    if (box_distance_to_origin(b) >= radius) return false;
    if (octant_mask_) {
        for (unsigned o = 0; o < 8; ++o)
            if ((*octant_mask_ >> o) & 1u)
                if (octant_cell_intersects(o, b, radius)) return true;
        return false;
    }
    // Generic fallback: hierarchical center sampling (catches any overlap
    // thicker than ~1/16 of the box).
    struct Item { Box3 box; int depth; };
    std::vector<Item> stack{{b, 0}};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const Vec3 c = it.box.center();
        if (norm(c) < radius && contains(c)) return true;
        if (it.depth >= 4) continue;
        const Vec3 mid = c;
        for (int o = 0; o < 8; ++o) {
            Box3 sub;
            for (int i = 0; i < 3; ++i) {
                const bool hi = (o >> i) & 1;
                sub.lo[i] = hi ? mid[i] : it.box.lo[i];
                sub.hi[i] = hi ? it.box.hi[i] : mid[i];
            }
            if (box_distance_to_origin(sub) < radius) stack.push_back({sub, it.depth + 1});
        }
    }
    return false;
}

TruncatedCone::TruncatedCone(PolyhedralCone c, double r) : cone(std::move(c)), radius(r) {
    if (!(r > 0.0)) throw ValidationError("truncation radius must be positive, got " + std::to_string(r));
}

// ---------------------------------------------------------------------------
// Canonical cones
// ---------------------------------------------------------------------------

PolyhedralCone make_octant_cone() {
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
    // Faces: z=0 plane (edges x->y), x=0 plane (y->z), y=0 plane (z->x).
    std::vector<Face> faces{
        {0, 1, {0, 0, -1}},
        {1, 2, {-1, 0, 0}},
        {2, 0, {0, -1, 0}},
    };
    return PolyhedralCone::create({ex, ey, ez}, faces, /*convex=*/true);
}

PolyhedralCone make_fichera_complement_cone() {
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
    // Same three quarter-plane faces as the octant, but outward normals point
    // into the removed octant; the cap polygon is traversed in the opposite
    // direction (y->x etc.) so the swept quarter sectors stay correct.
    std::vector<Face> faces{
        {1, 0, {0, 0, 1}},
        {0, 2, {0, 1, 0}},
        {2, 1, {1, 0, 0}},
    };
    return PolyhedralCone::create({ex, ey, ez}, faces, /*convex=*/false);
}

PolyhedralCone make_reentrant_wedge_cone() {
    const Vec3 ez{0, 0, 1}, ex{1, 0, 0}, emy{0, -1, 0};
    // Edges: 0:+z (reentrant, theta=3*pi/2), 1:+x, 2:-y.
    // Faces: phi=0 quarter plane (z->x, outward -y), the 3/4 floor sector in
    // z=0 (x->-y through +y and -x, outward -z), phi=3*pi/2 quarter plane
    // (-y->z, outward +x).
    std::vector<Face> faces{
        {0, 1, {0, -1, 0}},
        {1, 2, {0, 0, -1}},
        {2, 0, {1, 0, 0}},
    };
    return PolyhedralCone::create({ez, ex, emy}, faces, /*convex=*/false);
}

}  // namespace conebesov
