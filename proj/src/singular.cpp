#include "conebesov/singular.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace conebesov {

namespace {

constexpr double kPi = std::numbers::pi;

/// r^lambda e^{i lambda phi} and its first two complex derivatives, with the
/// angle branch phi in [phi_cut - 2*pi, phi_cut).
struct PowerBranch {
    double re[3], im[3];  // F, F', F''
};

PowerBranch complex_power(double xi, double eta, double lambda, double phi_cut) {
    PowerBranch out{};
    const double r = std::hypot(xi, eta);
    double phi = std::atan2(eta, xi);  // (-pi, pi]
    if (phi >= phi_cut) phi -= 2.0 * kPi;
    if (phi < phi_cut - 2.0 * kPi) phi += 2.0 * kPi;
    // F^{(k)} = lambda (lambda-1) ... * r^{lambda-k} e^{i(lambda-k)phi}
    double coef = 1.0;
    for (int k = 0; k < 3; ++k) {
        const double lk = lambda - k;
        const double mag = coef * std::pow(r, lk);
        out.re[k] = mag * std::cos(lk * phi);
        out.im[k] = mag * std::sin(lk * phi);
        coef *= lk;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cutoff
// ---------------------------------------------------------------------------

double Cutoff::value(double rho) const {
    if (rho <= r1) return 1.0;
    if (rho >= r2) return 0.0;
    const double t = (rho - r1) / (r2 - r1);
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double Cutoff::d1(double rho) const {
    if (rho <= r1 || rho >= r2) return 0.0;
    const double w = r2 - r1;
    const double t = (rho - r1) / w;
    return -30.0 * t * t * (1.0 - t) * (1.0 - t) / w;
}

double Cutoff::d2(double rho) const {
    if (rho <= r1 || rho >= r2) return 0.0;
    const double w = r2 - r1;
    const double t = (rho - r1) / w;
    return -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (w * w);
}

Jet2 Cutoff::jet(const Vec3& x) const {
    const double rho = norm(x);
    if (rho < 1e-14) return Jet2::constant(1.0);  // flat region around the apex
    return radial_jet(x, value(rho), d1(rho), d2(rho));
}

// ---------------------------------------------------------------------------
// Mesh-based vertex profile
// ---------------------------------------------------------------------------

struct SingularFunction::MeshProfile {
    CapEigenfunction ef;
    double lambda_plus = 0.0;

    struct Located {
        std::array<int, 3> verts;
        double w[3];          // normalized barycentric weights at the projection
        Vec3 grad_flat;       // in-plane PL gradient
        Vec3 plane_normal;    // unit normal of the flat triangle
        double plane_dist;    // distance of the plane from the origin
    };

    /// Linear scan with early exit at the first containing triangle; falls
    /// back to the best margin for points on mesh edges. Mesh profiles are
    /// evaluated at test-point counts, not at quadrature scale.
    Located locate(const Vec3& omega) const {
        int best = -1;
        double best_margin = -1e30;
        const auto& tris = ef.mesh.triangles;
        for (size_t ti = 0; ti < tris.size(); ++ti) {
            const Vec3& a = ef.mesh.vertices[static_cast<size_t>(tris[ti][0])];
            const Vec3& b = ef.mesh.vertices[static_cast<size_t>(tris[ti][1])];
            const Vec3& c = ef.mesh.vertices[static_cast<size_t>(tris[ti][2])];
            const double m = std::min({dot(omega, cross(a, b)), dot(omega, cross(b, c)),
                                       dot(omega, cross(c, a))});
            if (m > best_margin) {
                best_margin = m;
                best = static_cast<int>(ti);
            }
            if (m >= 0.0) break;  // strictly inside; first hit is fine
        }
        const auto& t = tris[static_cast<size_t>(best)];
        const Vec3& a = ef.mesh.vertices[static_cast<size_t>(t[0])];
        const Vec3& b = ef.mesh.vertices[static_cast<size_t>(t[1])];
        const Vec3& c = ef.mesh.vertices[static_cast<size_t>(t[2])];
        Located loc;
        loc.verts = t;
        Vec3 n = cross(b - a, c - a);
        const double n2 = dot(n, n);
        loc.plane_normal = n / std::sqrt(n2);
        if (dot(loc.plane_normal, a) < 0.0) loc.plane_normal = -loc.plane_normal;
        loc.plane_dist = dot(loc.plane_normal, a);
        // Radial projection q of omega onto the triangle plane.
        const double denom = dot(loc.plane_normal, omega);
        const double tscale = dot(loc.plane_normal, a) / denom;
        const Vec3 q = omega * tscale;
        // Barycentric weights of q.
        const Vec3 qa = q - a;
        const Vec3 ab = b - a, ac = c - a;
        const double d00 = dot(ab, ab), d01 = dot(ab, ac), d11 = dot(ac, ac);
        const double d20 = dot(qa, ab), d21 = dot(qa, ac);
        const double det = d00 * d11 - d01 * d01;
        const double w1 = (d11 * d20 - d01 * d21) / det;
        const double w2 = (d00 * d21 - d01 * d20) / det;
        loc.w[0] = 1.0 - w1 - w2;
        loc.w[1] = w1;
        loc.w[2] = w2;
        // In-plane PL gradient: sum f_i * grad lambda_i.
        const double inv2A = 1.0 / std::sqrt(n2);
        const Vec3 g0 = cross(loc.plane_normal, c - b) * inv2A;
        const Vec3 g1 = cross(loc.plane_normal, a - c) * inv2A;
        const Vec3 g2 = cross(loc.plane_normal, b - a) * inv2A;
        const double f0 = ef.values[static_cast<size_t>(t[0])];
        const double f1 = ef.values[static_cast<size_t>(t[1])];
        const double f2 = ef.values[static_cast<size_t>(t[2])];
        loc.grad_flat = g0 * f0 + g1 * f1 + g2 * f2;
        // Orientation of grad lambda is sign-checked against the vertices.
        if (dot(g0, a - (b + c) * 0.5) < 0.0) loc.grad_flat = -loc.grad_flat;
        return loc;
    }

    double value_at(const Vec3& omega) const {
        const Located loc = locate(omega);
        double v = 0.0;
        for (int i = 0; i < 3; ++i)
            v += loc.w[i] * ef.values[static_cast<size_t>(loc.verts[static_cast<size_t>(i)])];
        return v;
    }
};

// ---------------------------------------------------------------------------
// SingularFunction
// ---------------------------------------------------------------------------

SingularFunction SingularFunction::edge(double theta, EdgeBc bc, int m, Cutoff cutoff,
                                        bool dirichlet_at_zero) {
    if (!(theta > 0.0) || !(theta < 2.0 * kPi))
        throw std::invalid_argument("edge model requires theta in (0, 2*pi)");
    if (m < 1) throw std::invalid_argument("edge model requires m >= 1");
    SingularFunction f;
    f.kind_ = Kind::Edge;
    f.theta_ = theta;
    f.cutoff_ = cutoff;
    f.max_order_ = 2;
    f.exponent_ = edge_eigenvalue(theta, bc, m);
    if (!(f.exponent_ > 0.0))
        throw std::invalid_argument("edge model requires a positive exponent (got lambda = " +
                                    std::to_string(f.exponent_) + ")");
    switch (bc) {
        case EdgeBc::DD: f.sin_profile_ = true; break;
        case EdgeBc::NN: f.sin_profile_ = false; break;
        case EdgeBc::Mixed: f.sin_profile_ = dirichlet_at_zero; break;
    }
    // Branch cut in the middle of the exterior sector: the only discontinuity
    // of the global formula stays at angular distance (2*pi - theta)/2 from
    // both faces.
    f.phi_cut_ = theta / 2.0 + kPi;
    return f;
}

SingularFunction SingularFunction::vertex_analytic(VertexProfile profile, Cutoff cutoff) {
    SingularFunction f;
    f.kind_ = Kind::Vertex;
    f.cutoff_ = cutoff;
    f.vertex_profile_ = profile;
    f.max_order_ = 2;
    switch (profile) {
        case VertexProfile::OctantAnalytic: f.exponent_ = 3.0; break;
        case VertexProfile::HemisphereAnalytic: f.exponent_ = 1.0; break;
        case VertexProfile::NeumannConstant: f.exponent_ = 0.0; break;
    }
    return f;
}

SingularFunction SingularFunction::vertex_mesh(CapEigenfunction eigenfunction, Cutoff cutoff) {
    SingularFunction f;
    f.kind_ = Kind::Vertex;
    f.cutoff_ = cutoff;
    f.max_order_ = 1;  // piecewise-linear profile: first derivatives only
    auto mp = std::make_shared<MeshProfile>();
    mp->ef = std::move(eigenfunction);
    mp->lambda_plus = -0.5 + std::sqrt(mp->ef.lambda_tilde + 0.25);
    f.exponent_ = mp->lambda_plus;
    f.mesh_profile_ = std::move(mp);
    return f;
}

Jet2 SingularFunction::profile_jet(const Vec3& x) const {
    if (kind_ == Kind::Edge) {
        const PowerBranch F = complex_power(x.x, x.y, exponent_, phi_cut_);
        Jet2 j;
        if (sin_profile_) {
            j.v = F.im[0];
            j.g = {F.im[1], F.re[1], 0.0};
            j.h[0][0] = F.im[2];
            j.h[0][1] = j.h[1][0] = F.re[2];
            j.h[1][1] = -F.im[2];
        } else {
            j.v = F.re[0];
            j.g = {F.re[1], -F.im[1], 0.0};
            j.h[0][0] = F.re[2];
            j.h[0][1] = j.h[1][0] = -F.im[2];
            j.h[1][1] = -F.re[2];
        }
        return j;
    }
    switch (vertex_profile_) {
        case VertexProfile::OctantAnalytic: {
            Jet2 j;
            j.v = x.x * x.y * x.z;
            j.g = {x.y * x.z, x.x * x.z, x.x * x.y};
            j.h[0][1] = j.h[1][0] = x.z;
            j.h[0][2] = j.h[2][0] = x.y;
            j.h[1][2] = j.h[2][1] = x.x;
            return j;
        }
        case VertexProfile::HemisphereAnalytic: {
            Jet2 j;
            j.v = x.z;
            j.g = {0.0, 0.0, 1.0};
            return j;
        }
        case VertexProfile::NeumannConstant:
            return Jet2::constant(1.0);
    }
    throw std::logic_error("mesh profiles have no order-2 jet");
}

double SingularFunction::profile_value(const Vec3& x) const {
    if (mesh_profile_) {
        const double rho = norm(x);
        if (rho < 1e-14) return 0.0;
        return std::pow(rho, exponent_) * mesh_profile_->value_at(x / rho);
    }
    return profile_jet(x).v;
}

double SingularFunction::value(const Vec3& x) const {
    return cutoff_.value(norm(x)) * profile_value(x);
}

double SingularFunction::derivative(const std::array<int, 3>& alpha, const Vec3& x) const {
    const int total = alpha[0] + alpha[1] + alpha[2];
    if (total > max_order_)
        throw std::invalid_argument("derivative order " + std::to_string(total) +
                                    " exceeds the declared oracle order " +
                                    std::to_string(max_order_));
    if (!mesh_profile_) {
        const Jet2 full = cutoff_.jet(x) * profile_jet(x);
        return full.partial(alpha);
    }
    // Mesh profile: u = chi(rho) * rho^Lambda * psi(omega), order <= 1.
    const double rho = norm(x);
    const Vec3 omega = x / rho;
    const auto loc = mesh_profile_->locate(omega);
    double psi = 0.0;
    for (int i = 0; i < 3; ++i)
        psi += loc.w[i] *
               mesh_profile_->ef.values[static_cast<size_t>(loc.verts[static_cast<size_t>(i)])];
    const double lam = exponent_;
    const double chi = cutoff_.value(rho), dchi = cutoff_.d1(rho);
    if (total == 0) return chi * std::pow(rho, lam) * psi;
    // psi~(x) = psi_flat(q(x)) with q = (d / (n.x)) x, the radial projection
    // onto the triangle plane, so
    //   grad psi~ = (d/(n.x)) g - (d (x.g)/(n.x)^2) n,   g in-plane.
    const Vec3 g = loc.grad_flat;
    const double nx = dot(loc.plane_normal, x);
    const Vec3 grad_hom = g * (loc.plane_dist / nx) -
                          loc.plane_normal * (loc.plane_dist * dot(x, g) / (nx * nx));
    const Vec3 grad = omega * (dchi * std::pow(rho, lam) * psi) +
                      x * (chi * lam * std::pow(rho, lam - 2.0) * psi) +
                      grad_hom * (chi * std::pow(rho, lam));
    for (int i = 0; i < 3; ++i)
        if (alpha[static_cast<size_t>(i)] == 1) return grad[i];
    return 0.0;
}

DerivativeOracle SingularFunction::oracle() const {
    DerivativeOracle o;
    o.max_order = max_order_;
    o.eval = [fn = *this](const std::array<int, 3>& alpha, const Vec3& x) {
        return fn.derivative(alpha, x);
    };
    return o;
}

std::optional<double> SingularFunction::membership_threshold(int l) const {
    if (kind_ == Kind::Edge) return static_cast<double>(l) - exponent_ - 1.0;
    if (mesh_profile_) return std::nullopt;  // no closed form for PL profiles
    return static_cast<double>(l) - exponent_ - 1.5;
}

}  // namespace conebesov
