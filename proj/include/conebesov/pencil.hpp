#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conebesov/geometry.hpp"
#include "conebesov/spherical_cap.hpp"

namespace conebesov {

enum class Bc { Dirichlet, Neumann };

/// Boundary condition of the two faces meeting at an edge.
enum class EdgeBc { DD, NN, Mixed };

/// Per-face boundary conditions with the derived index sets.
struct BCAssignment {
    std::vector<Bc> face_bc;

    explicit BCAssignment(std::vector<Bc> bc) : face_bc(std::move(bc)) {}

    int face_count() const { return static_cast<int>(face_bc.size()); }
    bool is_pure_dirichlet() const;
    bool is_pure_neumann() const;
    bool is_mixed() const { return !is_pure_dirichlet() && !is_pure_neumann(); }

    /// Edge bc pair from the two adjacent faces of the cone.
    EdgeBc edge_bc(const PolyhedralCone& cone, int edge) const;

    /// Edges with at least one adjacent Dirichlet face.
    std::vector<int> jtilde(const PolyhedralCone& cone) const;
};

/// Closed-form eigenvalues of the edge pencil for the Laplacian:
/// DD: m*pi/theta (m != 0), NN: (m-1)*pi/theta, mixed: (m-1/2)*pi/theta.
/// Requested for m in [m_first, m_last]; the DD value m=0 is skipped.
/// The NN value m=1 gives lambda=0, which is returned but is exempt from the
/// strip (see edge_strip).
std::vector<double> edge_eigenvalues(double theta, EdgeBc bc, int m_first, int m_last);

/// Single-m convenience.
double edge_eigenvalue(double theta, EdgeBc bc, int m);

/// Width (delta_plus, delta_minus) of the widest eigenvalue-free strip around
/// Re lambda = 0 (lambda = 0 exempt for NN): pi/theta for DD and NN,
/// pi/(2*theta) for mixed.
std::pair<double, double> edge_strip(double theta, EdgeBc bc);

/// One computed Laplace-Beltrami eigenvalue with the derived vertex pencil
/// pair Lambda_{+-} = -1/2 +- sqrt(lambda_tilde + 1/4).
struct VertexEigenvalue {
    double lambda_tilde = 0.0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double error_estimate = 0.0;  // Richardson estimate from two refinements
};

struct PencilSpectrum {
    struct EdgeEntry {
        int edge = -1;
        double theta = 0.0;
        EdgeBc bc = EdgeBc::DD;
        double delta_plus = 0.0, delta_minus = 0.0;
        std::vector<double> eigenvalues;  // m = 1..M
    };
    std::vector<EdgeEntry> edges;
    std::vector<VertexEigenvalue> vertex;
};

/// Eigenvector of the discrete cap problem, piecewise linear on the mesh.
struct CapEigenfunction {
    SphericalCap mesh;
    std::vector<double> values;  // per mesh vertex
    double lambda_tilde = 0.0;
};

struct VertexSolveResult {
    std::vector<VertexEigenvalue> eigenvalues;
    SphericalCap mesh;                            // finest mesh used
    std::vector<std::vector<double>> eigenvectors;  // per eigenvalue, per vertex
};

/// Lowest `count` eigenvalues of the Laplace-Beltrami operator on the cap
/// with Dirichlet arcs constrained and Neumann arcs natural (piecewise-linear
/// surface FEM, generalized symmetric eigenproblem solved by shift-inverted
/// subspace iteration to 1e-8 relative residual). The cap is refined
/// `refinements` times from its base; the error estimate comes from the two
/// finest levels.
VertexSolveResult vertex_eigenvalues(const SphericalCap& base_cap, const BCAssignment& bc,
                                     int count, int refinements);

struct StripCheckResult {
    bool free_of_eigenvalues = false;
    double line = 0.0;                  // l - beta - 3/2
    double nearest_eigenvalue = 0.0;    // nearest Lambda_{+-}
    double distance = 0.0;
};

/// Checks that the line Re lambda = l - beta - 3/2 keeps a distance greater
/// than tol plus the eigenvalue error estimate from every computed vertex
/// pencil eigenvalue. Throws if the computed spectrum cannot bracket the line.
StripCheckResult strip_free_check(int l, double beta, const PencilSpectrum& spectrum, double tol);

/// Full spectrum for a cone: closed-form edge data plus the FEM vertex solve.
PencilSpectrum compute_pencil_spectrum(const PolyhedralCone& cone, const BCAssignment& bc,
                                       int edge_m_max, int vertex_count, int vertex_refinements);

/// Thrown on eigensolver non-convergence or degenerate meshes.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace conebesov
