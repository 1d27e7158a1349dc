#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "conebesov/jets.hpp"
#include "conebesov/pencil.hpp"
#include "conebesov/vec3.hpp"

namespace conebesov {

/// Exact derivative oracle: partial derivative named by a multi-index at a
/// point. `max_order` is the declared differentiation order.
struct DerivativeOracle {
    int max_order = 0;
    std::function<double(const std::array<int, 3>&, const Vec3&)> eval;
};

/// Radial cutoff: identically 1 on [0, r1], identically 0 on [r2, inf),
/// quintic-smooth transition (two continuous derivatives at the junctions,
/// which is all the order-2 oracles need).
struct Cutoff {
    double r1 = 0.5;
    double r2 = 0.9;

    double value(double rho) const;
    double d1(double rho) const;
    double d2(double rho) const;
    Jet2 jet(const Vec3& x) const;
};

/// Closed-form model singular function: either an edge-type profile
/// chi(|x|) r^lambda T(lambda phi) in cylindrical coordinates around the +z
/// axis (Dirichlet face at phi = 0 unless flipped), or a vertex-type profile
/// chi(|x|) rho^Lambda psi(omega).
class SingularFunction {
public:
    enum class Kind { Edge, Vertex };

    Kind kind() const { return kind_; }
    double exponent() const { return exponent_; }  // lambda (edge) or Lambda_+ (vertex)
    int max_order() const { return max_order_; }
    const Cutoff& cutoff() const { return cutoff_; }

    double value(const Vec3& x) const;
    /// Partial derivative, |alpha| <= max_order().
    double derivative(const std::array<int, 3>& alpha, const Vec3& x) const;
    DerivativeOracle oracle() const;

    /// Profile without the cutoff (r^lambda T or rho^Lambda psi); used by
    /// boundary-condition and harmonicity checks.
    double profile_value(const Vec3& x) const;
    Jet2 profile_jet(const Vec3& x) const;  // order-2 kinds only

    /// Edge model on the wedge of opening theta around the +z axis.
    /// The branch cut of r^lambda sits in the bisector of the exterior
    /// sector, so the global extension is smooth everywhere the cone can see.
    static SingularFunction edge(double theta, EdgeBc bc, int m, Cutoff cutoff,
                                 bool dirichlet_at_zero = true);

    enum class VertexProfile { OctantAnalytic, HemisphereAnalytic, NeumannConstant };

    /// Analytic vertex models: octant chi*xyz (Lambda=3), hemisphere chi*z
    /// (Lambda=1), constant Neumann profile chi (Lambda=0).
    static SingularFunction vertex_analytic(VertexProfile profile, Cutoff cutoff);

    /// Vertex model from a computed cap eigenfunction, piecewise linear on
    /// the mesh and extended 0-homogeneously; derivative order limited to 1.
    static SingularFunction vertex_mesh(CapEigenfunction eigenfunction, Cutoff cutoff);

    /// Minimal admissible weight exponent for membership at order l:
    /// edge kind:   delta_min = l - lambda - 1  (2-D cross-section measure),
    /// vertex kind: beta_min  = l - Lambda - 3/2 (3-D radial measure).
    /// Empty for mesh-based vertex profiles (no closed form).
    std::optional<double> membership_threshold(int l) const;

private:
    struct MeshProfile;

    Kind kind_ = Kind::Edge;
    double exponent_ = 0.0;
    int max_order_ = 2;
    Cutoff cutoff_;

    // edge parameters
    double theta_ = 0.0;
    bool sin_profile_ = true;   // sin(lambda*phi) vs cos(lambda*phi)
    double phi_cut_ = 0.0;      // branch cut angle
    // vertex parameters
    VertexProfile vertex_profile_ = VertexProfile::OctantAnalytic;
    std::shared_ptr<const MeshProfile> mesh_profile_;
};

}  // namespace conebesov
