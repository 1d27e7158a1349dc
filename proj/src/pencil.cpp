#include "conebesov/pencil.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace conebesov {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Closed-form edge pencil
// ---------------------------------------------------------------------------

double edge_eigenvalue(double theta, EdgeBc bc, int m) {
    if (!(theta > 0.0) || !(theta <= 2.0 * kPi))
        throw std::invalid_argument("edge pencil requires theta in (0, 2*pi]");
    switch (bc) {
        case EdgeBc::DD: return m * kPi / theta;
        case EdgeBc::NN: return (m - 1) * kPi / theta;
        case EdgeBc::Mixed: return (m - 0.5) * kPi / theta;
    }
    return 0.0;
}

std::vector<double> edge_eigenvalues(double theta, EdgeBc bc, int m_first, int m_last) {
    std::vector<double> out;
    for (int m = m_first; m <= m_last; ++m) {
        if (bc == EdgeBc::DD && m == 0) continue;  // m = 0 is not an eigenvalue for DD
        out.push_back(edge_eigenvalue(theta, bc, m));
    }
    return out;
}

std::pair<double, double> edge_strip(double theta, EdgeBc bc) {
    if (!(theta > 0.0) || !(theta <= 2.0 * kPi))
        throw std::invalid_argument("edge strip requires theta in (0, 2*pi]");
    const double d = (bc == EdgeBc::Mixed) ? kPi / (2.0 * theta) : kPi / theta;
    return {d, d};
}

// ---------------------------------------------------------------------------
// BCAssignment
// ---------------------------------------------------------------------------

bool BCAssignment::is_pure_dirichlet() const {
    return std::all_of(face_bc.begin(), face_bc.end(), [](Bc b) { return b == Bc::Dirichlet; });
}

bool BCAssignment::is_pure_neumann() const {
    return std::all_of(face_bc.begin(), face_bc.end(), [](Bc b) { return b == Bc::Neumann; });
}

EdgeBc BCAssignment::edge_bc(const PolyhedralCone& cone, int edge) const {
    int d = 0, n = 0;
    for (int f = 0; f < cone.edge_count(); ++f) {
        const Face& face = cone.face(f);
        if (face.edge_from == edge || face.edge_to == edge) {
            (face_bc.at(static_cast<size_t>(f)) == Bc::Dirichlet ? d : n) += 1;
        }
    }
    if (d == 2) return EdgeBc::DD;
    if (n == 2) return EdgeBc::NN;
    if (d == 1 && n == 1) return EdgeBc::Mixed;
    throw std::logic_error("edge " + std::to_string(edge) + " does not have two adjacent faces");
}

std::vector<int> BCAssignment::jtilde(const PolyhedralCone& cone) const {
    std::vector<int> out;
    for (int j = 0; j < cone.edge_count(); ++j)
        if (edge_bc(cone, j) != EdgeBc::NN) out.push_back(j);
    return out;
}

// ---------------------------------------------------------------------------
// Surface FEM: piecewise-linear Laplace-Beltrami on the cap mesh
// ---------------------------------------------------------------------------

namespace {

struct Assembled {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> mass;
    std::vector<int> free_of_full;  // free dof -> mesh vertex
};

Assembled assemble(const SphericalCap& cap, const BCAssignment& bc) {
    const int nv = static_cast<int>(cap.vertices.size());

    std::vector<bool> constrained(static_cast<size_t>(nv), false);
    for (const auto& e : cap.boundary) {
        if (bc.face_bc.at(static_cast<size_t>(e.face)) == Bc::Dirichlet) {
            constrained[static_cast<size_t>(e.a)] = true;
            constrained[static_cast<size_t>(e.b)] = true;
        }
    }

    std::vector<int> full_to_free(static_cast<size_t>(nv), -1);
    std::vector<int> free_of_full;
    for (int i = 0; i < nv; ++i)
        if (!constrained[static_cast<size_t>(i)]) {
            full_to_free[static_cast<size_t>(i)] = static_cast<int>(free_of_full.size());
            free_of_full.push_back(i);
        }
    const int nf = static_cast<int>(free_of_full.size());
    if (nf == 0) throw NumericalError("all mesh vertices constrained; no free dofs");

    std::vector<Eigen::Triplet<double>> ka, ma;
    ka.reserve(cap.triangles.size() * 9);
    ma.reserve(cap.triangles.size() * 9);
    for (const auto& t : cap.triangles) {
        const Vec3& a = cap.vertices[static_cast<size_t>(t[0])];
        const Vec3& b = cap.vertices[static_cast<size_t>(t[1])];
        const Vec3& c = cap.vertices[static_cast<size_t>(t[2])];
        const Vec3 n = cross(b - a, c - a);
        const double two_area = norm(n);
        if (two_area < 1e-14) throw NumericalError("degenerate mesh triangle (zero area)");
        const double area = 0.5 * two_area;
        const Vec3 nh = n / two_area;
        // Barycentric gradients up to a common sign, which cancels in the
        // stiffness products.
        const Vec3 grad[3] = {cross(nh, c - b) / two_area, cross(nh, a - c) / two_area,
                              cross(nh, b - a) / two_area};
        for (int i = 0; i < 3; ++i) {
            const int gi = full_to_free[static_cast<size_t>(t[static_cast<size_t>(i)])];
            if (gi < 0) continue;
            for (int k = 0; k < 3; ++k) {
                const int gk = full_to_free[static_cast<size_t>(t[static_cast<size_t>(k)])];
                if (gk < 0) continue;
                ka.emplace_back(gi, gk, dot(grad[i], grad[k]) * area);
                ma.emplace_back(gi, gk, area / 12.0 * (i == k ? 2.0 : 1.0));
            }
        }
    }

    Assembled out;
    out.stiffness.resize(nf, nf);
    out.mass.resize(nf, nf);
    out.stiffness.setFromTriplets(ka.begin(), ka.end());
    out.mass.setFromTriplets(ma.begin(), ma.end());
    out.free_of_full = std::move(free_of_full);
    return out;
}

struct EigSolution {
    std::vector<double> values;
    Eigen::MatrixXd vectors;  // free dofs x count
};

/// Shift-inverted subspace iteration with Rayleigh-Ritz projection for the
/// symmetric generalized problem A x = lambda M x, smallest `count` pairs.
EigSolution lowest_eigenpairs(const Assembled& sys, int count) {
    const int n = static_cast<int>(sys.stiffness.rows());
    if (count < 1) throw std::invalid_argument("eigenpair count must be >= 1");
    if (count > n)
        throw NumericalError("requested " + std::to_string(count) + " eigenpairs but only " +
                             std::to_string(n) + " free dofs");
    const int q = std::min(n, count + std::max(5, count / 2));
    const double sigma = 1.0;

    Eigen::SparseMatrix<double> shifted = sys.stiffness + sigma * sys.mass;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(shifted);
    if (solver.info() != Eigen::Success)
        throw NumericalError("factorization of the shifted stiffness matrix failed");

    std::mt19937 rng(20240915u);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(n, q);
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = gauss(rng);

    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(q);
    for (int iter = 0; iter < 300; ++iter) {
        const Eigen::MatrixXd Z = solver.solve(sys.mass * X);
        const Eigen::MatrixXd Ar = Z.transpose() * (sys.stiffness * Z).eval();
        const Eigen::MatrixXd Mr = Z.transpose() * (sys.mass * Z).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Ar, Mr);
        if (ges.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz projection failed");
        X = Z * ges.eigenvectors();
        ritz = ges.eigenvalues();

        bool converged = true;
        for (int i = 0; i < count; ++i) {
            const Eigen::VectorXd x = X.col(i);
            const Eigen::VectorXd mx = sys.mass * x;
            const Eigen::VectorXd r = sys.stiffness * x - ritz(i) * mx;
            const double rel = r.norm() / ((std::abs(ritz(i)) + sigma) * mx.norm());
            if (!(rel <= 1e-8)) {
                converged = false;
                break;
            }
        }
        if (converged) {
            EigSolution sol;
            sol.values.assign(ritz.data(), ritz.data() + count);
            sol.vectors = X.leftCols(count);
            return sol;
        }
    }
    throw NumericalError("subspace iteration did not reach 1e-8 residual within 300 iterations");
}

}  // namespace

VertexSolveResult vertex_eigenvalues(const SphericalCap& base_cap, const BCAssignment& bc,
                                     int count, int refinements) {
    if (count < 1) throw std::invalid_argument("vertex eigenvalue count must be >= 1");
    if (refinements < 1) throw std::invalid_argument("at least one refinement required");

    const SphericalCap coarse = base_cap.refined(refinements - 1);
    const SphericalCap fine = coarse.refined();

    const Assembled sys_coarse = assemble(coarse, bc);
    const Assembled sys_fine = assemble(fine, bc);
    const EigSolution sol_coarse = lowest_eigenpairs(sys_coarse, count);
    const EigSolution sol_fine = lowest_eigenpairs(sys_fine, count);

    VertexSolveResult out;
    out.mesh = fine;
    for (int i = 0; i < count; ++i) {
        VertexEigenvalue ev;
        ev.lambda_tilde = sol_fine.values[static_cast<size_t>(i)];
        // PL eigenvalues converge at second order; the two-level difference
        // over (4 - 1) estimates the remaining error.
        ev.error_estimate =
            std::abs(sol_coarse.values[static_cast<size_t>(i)] - ev.lambda_tilde) / 3.0;
        const double s = std::sqrt(std::max(0.0, ev.lambda_tilde) + 0.25);
        ev.lambda_plus = -0.5 + s;
        ev.lambda_minus = -0.5 - s;
        out.eigenvalues.push_back(ev);

        std::vector<double> full(fine.vertices.size(), 0.0);
        for (size_t f = 0; f < sys_fine.free_of_full.size(); ++f)
            full[static_cast<size_t>(sys_fine.free_of_full[f])] =
                sol_fine.vectors(static_cast<Eigen::Index>(f), i);
        out.eigenvectors.push_back(std::move(full));
    }
    return out;
}

StripCheckResult strip_free_check(int l, double beta, const PencilSpectrum& spectrum, double tol) {
    if (spectrum.vertex.empty())
        throw std::invalid_argument("strip check requires a computed vertex spectrum");
    StripCheckResult res;
    res.line = static_cast<double>(l) - beta - 1.5;

    double max_plus = -std::numeric_limits<double>::infinity();
    double min_minus = std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    double best_err = 0.0, best_ev = 0.0;
    for (const auto& ev : spectrum.vertex) {
        max_plus = std::max(max_plus, ev.lambda_plus);
        min_minus = std::min(min_minus, ev.lambda_minus);
        for (double lam : {ev.lambda_plus, ev.lambda_minus}) {
            const double d = std::abs(res.line - lam);
            if (d < best) {
                best = d;
                best_err = ev.error_estimate;
                best_ev = lam;
            }
        }
    }
    if (res.line > max_plus || res.line < min_minus)
        throw std::invalid_argument(
            "computed vertex spectrum does not bracket the line l - beta - 3/2 = " +
            std::to_string(res.line) + "; request more eigenvalues");
    res.nearest_eigenvalue = best_ev;
    res.distance = best;
    res.free_of_eigenvalues = best > tol + best_err;
    return res;
}

PencilSpectrum compute_pencil_spectrum(const PolyhedralCone& cone, const BCAssignment& bc,
                                       int edge_m_max, int vertex_count, int vertex_refinements) {
    if (bc.face_count() != cone.edge_count())
        throw std::invalid_argument("boundary assignment must cover every face of the cone");
    PencilSpectrum sp;
    for (int j = 0; j < cone.edge_count(); ++j) {
        PencilSpectrum::EdgeEntry e;
        e.edge = j;
        e.theta = cone.edge_angle(j);
        e.bc = bc.edge_bc(cone, j);
        std::tie(e.delta_plus, e.delta_minus) = edge_strip(e.theta, e.bc);
        e.eigenvalues = edge_eigenvalues(e.theta, e.bc, 1, edge_m_max);
        sp.edges.push_back(std::move(e));
    }
    const SphericalCap base = SphericalCap::base_from_cone(cone);
    const VertexSolveResult vres = vertex_eigenvalues(base, bc, vertex_count, vertex_refinements);
    sp.vertex = vres.eigenvalues;
    return sp;
}

}  // namespace conebesov
