#include "conebesov/weighted_norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "conebesov/spherical_cap.hpp"

namespace conebesov {

namespace {

// Degree-4 symmetric triangle rule (6 points), barycentric + weights.
struct TriRulePoint {
    double b0, b1, b2, w;
};
constexpr TriRulePoint kTriRule[6] = {
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
};

// 4-point Gauss-Legendre on [-1, 1].
constexpr double kGaussX[4] = {-0.861136311594053, -0.339981043584856, 0.339981043584856,
                               0.861136311594053};
constexpr double kGaussW[4] = {0.347854845137454, 0.652145154862546, 0.652145154862546,
                               0.347854845137454};

constexpr int kMaxDepthCap = 26;  // 2^-26 > the 1e-8*radius exclusion zone

struct AngularNode {
    Vec3 omega;
    double weight;  // solid-angle measure
    std::vector<double> s;  // dist(omega, edge ray k)
    double smin;
    int ring;  // 0 for smooth pieces, ring index for corner pieces
};

struct RadialNode {
    double rho;
    double weight;  // includes rho^2
    int ring;
};

/// Appends quadrature nodes for the flat triangle (p0,p1,p2) projected onto
/// the sphere; `plane_normal`/`plane_dist` describe the containing plane.
void add_flat_triangle_nodes(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                             const Vec3& plane_normal, double plane_dist, int ring,
                             const PolyhedralCone& cone, std::vector<AngularNode>& out) {
    const double area = 0.5 * norm(cross(p1 - p0, p2 - p0));
    if (area < 1e-30) return;
    for (const auto& rp : kTriRule) {
        const Vec3 u = p0 * rp.b0 + p1 * rp.b1 + p2 * rp.b2;
        const double ulen = norm(u);
        AngularNode node;
        node.omega = u / ulen;
        node.weight = rp.w * area * plane_dist / (ulen * ulen * ulen);
        node.s.resize(static_cast<size_t>(cone.edge_count()));
        node.smin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < cone.edge_count(); ++k) {
            node.s[static_cast<size_t>(k)] = point_to_ray_distance(node.omega, cone.edge_dir(k));
            node.smin = std::min(node.smin, node.s[static_cast<size_t>(k)]);
        }
        node.ring = ring;
        out.push_back(std::move(node));
    }
}

std::vector<AngularNode> build_angular_nodes(const PolyhedralCone& cone, int angular_resolution,
                                             int max_depth) {
    const SphericalCap cap = SphericalCap::from_cone(cone, std::max(2, angular_resolution));
    std::vector<AngularNode> nodes;
    for (const auto& t : cap.triangles) {
        const Vec3& a = cap.vertices[static_cast<size_t>(t[0])];
        const Vec3& b = cap.vertices[static_cast<size_t>(t[1])];
        const Vec3& c = cap.vertices[static_cast<size_t>(t[2])];
        Vec3 n = normalized(cross(b - a, c - a));
        if (dot(n, a) < 0.0) n = -n;
        const double d = dot(n, a);

        int corner_slot = -1;
        for (int i = 0; i < 3; ++i)
            for (int cv : cap.corner_vertices)
                if (cv == t[static_cast<size_t>(i)]) corner_slot = i;
        if (corner_slot < 0) {
            add_flat_triangle_nodes(a, b, c, n, d, 0, cone, nodes);
            continue;
        }
        // Dyadic rings toward the corner (flat subdivision tiles the triangle
        // exactly; the innermost triangle at scale 2^-max_depth is dropped).
        const Vec3 verts[3] = {a, b, c};
        const Vec3& corner = verts[corner_slot];
        const Vec3& va = verts[(corner_slot + 1) % 3];
        const Vec3& vb = verts[(corner_slot + 2) % 3];
        for (int ring = 0; ring < max_depth; ++ring) {
            const double so = std::ldexp(1.0, -ring);      // outer scale
            const double si = 0.5 * so;                    // inner scale
            const Vec3 ao = corner + (va - corner) * so, bo = corner + (vb - corner) * so;
            const Vec3 ai = corner + (va - corner) * si, bi = corner + (vb - corner) * si;
            add_flat_triangle_nodes(ai, bi, bo, n, d, ring, cone, nodes);
            add_flat_triangle_nodes(ai, bo, ao, n, d, ring, cone, nodes);
        }
    }
    return nodes;
}

std::vector<RadialNode> build_radial_nodes(double radius, int max_depth) {
    std::vector<RadialNode> nodes;
    for (int ring = 0; ring < max_depth; ++ring) {
        const double hi = radius * std::ldexp(1.0, -ring);
        const double lo = 0.5 * hi;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int g = 0; g < 4; ++g) {
            RadialNode node;
            node.rho = mid + half * kGaussX[g];
            node.weight = half * kGaussW[g] * node.rho * node.rho;
            node.ring = ring;
            nodes.push_back(node);
        }
    }
    return nodes;
}

std::vector<std::array<int, 3>> multi_indices_up_to(int l) {
    std::vector<std::array<int, 3>> out;
    for (int a0 = 0; a0 <= l; ++a0)
        for (int a1 = 0; a1 + a0 <= l; ++a1)
            for (int a2 = 0; a2 + a1 + a0 <= l; ++a2) out.push_back({a0, a1, a2});
    return out;
}

double pow_p(double v, double p) {
    const double av = std::abs(v);
    if (p == 2.0) return av * av;
    return std::pow(av, p);
}

/// Shared driver: evaluates the p-th power contribution of every
/// (radial, angular) node pair once, then accumulates partial sums over the
/// depth schedule and applies the increment-ratio divergence heuristic.
template <typename WeightFn>
NormResult run_graded(const DerivativeOracle& u, int order, double p,
                      const TruncatedCone& domain, const GradedQuadrature& q,
                      const WeightFn& weight_of) {
    q.validate();
    if (u.max_order < order)
        throw std::invalid_argument("derivative oracle order " + std::to_string(u.max_order) +
                                    " is below the requested norm order " + std::to_string(order));
    const int max_depth = std::min(q.depth_schedule.back(), kMaxDepthCap);
    const auto alphas = multi_indices_up_to(order);
    const auto ang = build_angular_nodes(domain.cone, q.angular_resolution, max_depth);
    const auto rad = build_radial_nodes(domain.radius, max_depth);

    // contribution[ring_rad][ring_ang] accumulated as a flat table
    std::vector<double> ring_table(static_cast<size_t>(max_depth) * static_cast<size_t>(max_depth),
                                   0.0);
    for (const auto& rn : rad) {
        for (const auto& an : ang) {
            const Vec3 x = an.omega * rn.rho;
            double total = 0.0;
            for (const auto& alpha : alphas) {
                const int at = alpha[0] + alpha[1] + alpha[2];
                const double w = weight_of(rn.rho, an, at);
                if (w == 0.0) continue;
                total += w * pow_p(u.eval(alpha, x), p);
            }
            ring_table[static_cast<size_t>(rn.ring) * static_cast<size_t>(max_depth) +
                       static_cast<size_t>(an.ring)] += total * rn.weight * an.weight;
        }
    }

    NormResult res;
    double prev_power = 0.0, prev_increment = 0.0, prev_value = 0.0;
    int run = 0;
    for (int depth : q.depth_schedule) {
        const int d = std::min(depth, max_depth);
        double power = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                power += ring_table[static_cast<size_t>(i) * static_cast<size_t>(max_depth) +
                                    static_cast<size_t>(j)];
        const double value = std::pow(power, 1.0 / p);
        NormRefinementRow row;
        row.depth = d;
        row.value = value;
        row.ratio = prev_value > 0.0 ? value / prev_value : 0.0;
        res.table.push_back(row);

        const double increment = power - prev_power;
        if (prev_increment > 1e-12 * power && increment > 1e-12 * power) {
            if (increment / prev_increment > q.divergence_ratio)
                ++run;
            else
                run = 0;
        }
        if (!std::isfinite(power)) res.diverged = true;
        prev_power = power;
        prev_increment = increment;
        prev_value = value;
        res.value = value;
    }
    if (run >= q.divergence_run) res.diverged = true;
    return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// WeightParams
// ---------------------------------------------------------------------------

WeightParams WeightParams::v_space(int l, double p, double beta, std::vector<double> delta) {
    return {l, p, beta, std::move(delta), SpaceVariant::V, {}};
}

WeightParams WeightParams::w_space(int l, double p, double beta, std::vector<double> delta) {
    return {l, p, beta, std::move(delta), SpaceVariant::W, {}};
}

WeightParams WeightParams::wcal_space(int l, double p, double beta, std::vector<double> delta,
                                      std::vector<int> jtilde) {
    return {l, p, beta, std::move(delta), SpaceVariant::Wcal, std::move(jtilde)};
}

bool WeightParams::order_dependent_edge(int j) const {
    switch (variant) {
        case SpaceVariant::V: return true;
        case SpaceVariant::W: return false;
        case SpaceVariant::Wcal:
            return std::find(wcal_edges.begin(), wcal_edges.end(), j) != wcal_edges.end();
    }
    return true;
}

double WeightParams::edge_exponent(int j, int alpha_total) const {
    const double d = delta.at(static_cast<size_t>(j));
    return order_dependent_edge(j) ? d - l + alpha_total : d;
}

void WeightParams::validate(int edge_count) const {
    if (l < 0) throw ValidationError("smoothness order l must be nonnegative");
    if (!(p >= 1.0)) throw ValidationError("integrability p must satisfy p >= 1");
    if (static_cast<int>(delta.size()) != edge_count)
        throw ValidationError("delta length " + std::to_string(delta.size()) +
                              " must equal the cone edge count " + std::to_string(edge_count));
    for (int j : wcal_edges)
        if (j < 0 || j >= edge_count)
            throw ValidationError("Wcal edge index " + std::to_string(j) + " out of range");
    for (int j = 0; j < edge_count; ++j) {
        if (!order_dependent_edge(j) && !(delta[static_cast<size_t>(j)] > -2.0 / p))
            throw ValidationError("delta_" + std::to_string(j) + " = " +
                                  std::to_string(delta[static_cast<size_t>(j)]) +
                                  " violates delta_j > -2/p on edges outside J~");
    }
}

void GradedQuadrature::validate() const {
    if (angular_resolution < 2)
        throw ValidationError("angular resolution must be >= 2 (corner triangles must be isolated)");
    if (depth_schedule.empty()) throw ValidationError("depth schedule must be nonempty");
    int prev = 0;
    for (int d : depth_schedule) {
        if (d <= prev) throw ValidationError("depth schedule must be strictly increasing");
        prev = d;
    }
}

void NormResult::write_csv(std::ostream& os) const {
    os << "level,norm_value,ratio\n";
    for (const auto& row : table)
        os << row.depth << "," << row.value << "," << row.ratio << "\n";
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

NormResult weighted_norm(const DerivativeOracle& u, const WeightParams& params,
                         const TruncatedCone& domain, const GradedQuadrature& q) {
    params.validate(domain.cone.edge_count());
    const double p = params.p;
    const int n = domain.cone.edge_count();
    return run_graded(u, params.l, p, domain, q,
                      [&](double rho, const AngularNode& an, int alpha_total) {
                          double w = std::pow(rho, p * (params.beta - params.l + alpha_total));
                          for (int k = 0; k < n; ++k)
                              w *= std::pow(an.s[static_cast<size_t>(k)],
                                            p * params.edge_exponent(k, alpha_total));
                          return w;
                      });
}

NormResult kondratiev_norm(const DerivativeOracle& u, int m, double a, double p,
                           const TruncatedCone& domain, const GradedQuadrature& q) {
    if (m < 0) throw std::invalid_argument("Kondratiev order m must be nonnegative");
    return run_graded(u, m, p, domain, q, [&](double rho, const AngularNode& an, int alpha_total) {
        const double dist_s = std::min(1.0, rho * an.smin);
        return std::pow(dist_s, p * (alpha_total - a));
    });
}

ChainCheckResult norm_chain_check(const DerivativeOracle& u, int l, double p, double beta,
                                  const std::vector<double>& delta,
                                  const std::vector<int>& jtilde, const TruncatedCone& domain,
                                  const GradedQuadrature& q) {
    ChainCheckResult res;
    const WeightParams pv = WeightParams::v_space(l, p, beta, delta);
    const WeightParams pw = WeightParams::w_space(l, p, beta, delta);
    const WeightParams pc = WeightParams::wcal_space(l, p, beta, delta, jtilde);
    res.v_norm = weighted_norm(u, pv, domain, q);
    res.wcal_norm = weighted_norm(u, pc, domain, q);
    res.w_norm = weighted_norm(u, pw, domain, q);

    // Pointwise domination of the weights: s_k <= 1 on the unit sphere, so
    // the order-dependent exponents (<= the fixed ones) give larger weights.
    const int max_depth = std::min(q.depth_schedule.back(), kMaxDepthCap);
    const auto ang = build_angular_nodes(domain.cone, q.angular_resolution, max_depth);
    bool ok = true;
    for (const auto& an : ang) {
        for (int at = 0; at <= l && ok; ++at) {
            double wv = 1.0, wc = 1.0, ww = 1.0;
            for (int k = 0; k < domain.cone.edge_count(); ++k) {
                const double s = an.s[static_cast<size_t>(k)];
                wv *= std::pow(s, p * pv.edge_exponent(k, at));
                wc *= std::pow(s, p * pc.edge_exponent(k, at));
                ww *= std::pow(s, p * pw.edge_exponent(k, at));
            }
            if (!(wv >= wc * (1.0 - 1e-12) && wc >= ww * (1.0 - 1e-12))) ok = false;
        }
        if (!ok) break;
    }
    res.domination_at_all_nodes = ok;
    return res;
}

}  // namespace conebesov
