#include <doctest.h>

#include <cmath>
#include <numbers>

#include "conebesov/pencil.hpp"

using namespace conebesov;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("edge eigenvalue closed forms") {
    CHECK(edge_eigenvalue(kPi / 2, EdgeBc::DD, 1) == doctest::Approx(2.0));
    CHECK(edge_eigenvalue(2 * kPi, EdgeBc::DD, 1) == doctest::Approx(0.5));
    CHECK(edge_eigenvalue(2 * kPi, EdgeBc::NN, 2) == doctest::Approx(0.5));
    CHECK(edge_eigenvalue(2 * kPi, EdgeBc::Mixed, 1) == doctest::Approx(0.25));
    CHECK(edge_eigenvalue(3 * kPi / 2, EdgeBc::DD, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(edge_eigenvalue(3 * kPi / 2, EdgeBc::Mixed, 1) == doctest::Approx(1.0 / 3.0));

    const auto dd = edge_eigenvalues(kPi / 2, EdgeBc::DD, -1, 2);
    REQUIRE(dd.size() == 3);  // m = 0 skipped
    CHECK(dd[0] == doctest::Approx(-2.0));
    CHECK(dd[1] == doctest::Approx(2.0));
    CHECK(dd[2] == doctest::Approx(4.0));

    // The Neumann list includes lambda = 0 at m = 1 (flagged via the strip
    // exemption, not omitted).
    const auto nn = edge_eigenvalues(kPi / 2, EdgeBc::NN, 1, 3);
    CHECK(nn[0] == doctest::Approx(0.0));

    CHECK_THROWS_AS((void)edge_eigenvalue(-0.5, EdgeBc::DD, 1), std::invalid_argument);
}

TEST_CASE("edge strips") {
    const auto s1 = edge_strip(kPi / 2, EdgeBc::DD);
    CHECK(s1.first == doctest::Approx(2.0));
    CHECK(s1.second == doctest::Approx(2.0));
    const auto s2 = edge_strip(3 * kPi / 2, EdgeBc::DD);
    CHECK(s2.first == doctest::Approx(2.0 / 3.0));
    const auto s3 = edge_strip(kPi / 2, EdgeBc::Mixed);
    CHECK(s3.first == doctest::Approx(1.0));
    const auto s4 = edge_strip(kPi / 2, EdgeBc::NN);
    CHECK(s4.first == doctest::Approx(2.0));
}

TEST_CASE("BCAssignment derives edge pairs and Jtilde") {
    const auto cone = make_octant_cone();
    const BCAssignment mixed({Bc::Dirichlet, Bc::Neumann, Bc::Neumann});
    // Faces: 0 spans edges (0,1), 1 spans (1,2), 2 spans (2,0).
    CHECK(mixed.edge_bc(cone, 0) == EdgeBc::Mixed);  // faces 0 (D) and 2 (N)
    CHECK(mixed.edge_bc(cone, 1) == EdgeBc::Mixed);  // faces 0 (D) and 1 (N)
    CHECK(mixed.edge_bc(cone, 2) == EdgeBc::NN);     // faces 1, 2
    const auto jt = mixed.jtilde(cone);
    REQUIRE(jt.size() == 2);
    CHECK(jt[0] == 0);
    CHECK(jt[1] == 1);

    CHECK(BCAssignment({Bc::Dirichlet, Bc::Dirichlet, Bc::Dirichlet}).is_pure_dirichlet());
    CHECK(BCAssignment({Bc::Neumann, Bc::Neumann, Bc::Neumann}).is_pure_neumann());
    CHECK(mixed.is_mixed());
}

TEST_CASE("full sphere spectrum: 0 then the triple eigenvalue 2") {
    const BCAssignment bc({Bc::Neumann});
    const auto res = vertex_eigenvalues(SphericalCap::full_sphere(1), bc, 5, 5);
    REQUIRE(res.eigenvalues.size() == 5);
    CHECK(std::abs(res.eigenvalues[0].lambda_tilde) < 1e-8);
    for (int i = 1; i <= 3; ++i)
        CHECK(res.eigenvalues[static_cast<size_t>(i)].lambda_tilde ==
              doctest::Approx(2.0).epsilon(0.01));
    CHECK(res.eigenvalues[4].lambda_tilde == doctest::Approx(6.0).epsilon(0.02));
}

TEST_CASE("hemisphere Dirichlet: lambda_1 = 2, Lambda_+ = 1") {
    const BCAssignment bc({Bc::Dirichlet});
    const auto res = vertex_eigenvalues(SphericalCap::hemisphere(1), bc, 3, 5);
    CHECK(res.eigenvalues[0].lambda_tilde == doctest::Approx(2.0).epsilon(0.01));
    CHECK(res.eigenvalues[0].lambda_plus == doctest::Approx(1.0).epsilon(0.005));
    CHECK(res.eigenvalues[0].lambda_minus == doctest::Approx(-2.0).epsilon(0.005));
}

TEST_CASE("octant Dirichlet: lambda_1 = 12 via mesh refinement, Lambda_+ = 3") {
    const auto base = SphericalCap::base_from_cone(make_octant_cone());
    const BCAssignment bc({Bc::Dirichlet, Bc::Dirichlet, Bc::Dirichlet});
    const auto res = vertex_eigenvalues(base, bc, 2, 5);
    CHECK(res.eigenvalues[0].lambda_tilde == doctest::Approx(12.0).epsilon(0.01));
    CHECK(res.eigenvalues[0].lambda_plus == doctest::Approx(3.0).epsilon(0.005));
}

TEST_CASE("Neumann cap has the zero eigenvalue with a constant eigenvector") {
    const auto base = SphericalCap::base_from_cone(make_octant_cone());
    const BCAssignment bc({Bc::Neumann, Bc::Neumann, Bc::Neumann});
    const auto res = vertex_eigenvalues(base, bc, 2, 4);
    CHECK(std::abs(res.eigenvalues[0].lambda_tilde) < 1e-8);
    // Constant eigenvector: all entries equal up to normalization.
    const auto& v = res.eigenvectors[0];
    double vmin = 1e300, vmax = -1e300;
    for (double x : v) {
        vmin = std::min(vmin, x);
        vmax = std::max(vmax, x);
    }
    CHECK(std::abs(vmax - vmin) < 1e-6 * std::max(std::abs(vmax), std::abs(vmin)));
}

TEST_CASE("domain monotonicity: octant above hemisphere") {
    const BCAssignment bc1({Bc::Dirichlet});
    const auto hemi = vertex_eigenvalues(SphericalCap::hemisphere(1), bc1, 1, 4);
    const BCAssignment bc3({Bc::Dirichlet, Bc::Dirichlet, Bc::Dirichlet});
    const auto oct =
        vertex_eigenvalues(SphericalCap::base_from_cone(make_octant_cone()), bc3, 1, 4);
    CHECK(oct.eigenvalues[0].lambda_tilde > hemi.eigenvalues[0].lambda_tilde);
}

TEST_CASE("Lambda pair relations and second-order mesh convergence") {
    const auto base = SphericalCap::base_from_cone(make_octant_cone());
    const BCAssignment bc({Bc::Dirichlet, Bc::Dirichlet, Bc::Dirichlet});

    std::vector<double> values;
    for (int r = 3; r <= 5; ++r) {
        const auto res = vertex_eigenvalues(base, bc, 1, r);
        values.push_back(res.eigenvalues[0].lambda_tilde);
        const auto& ev = res.eigenvalues[0];
        CHECK(ev.lambda_plus + ev.lambda_minus == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(ev.lambda_plus * ev.lambda_minus == doctest::Approx(-ev.lambda_tilde).epsilon(1e-10));
    }
    // Conforming PL eigenvalues decrease toward the limit; the decrements
    // shrink by roughly a factor 4 per refinement.
    CHECK(values[1] < values[0]);
    CHECK(values[2] < values[1]);
    const double ratio = (values[0] - values[1]) / (values[1] - values[2]);
    CHECK(ratio > 2.5);
    CHECK(ratio < 6.0);
}

TEST_CASE("strip check on the octant Dirichlet spectrum") {
    PencilSpectrum sp;
    // Analytic values: lambda_tilde = 12 -> Lambda = (3, -4).
    VertexEigenvalue ev;
    ev.lambda_tilde = 12.0;
    ev.lambda_plus = 3.0;
    ev.lambda_minus = -4.0;
    ev.error_estimate = 1e-4;
    sp.vertex.push_back(ev);

    const auto ok = strip_free_check(2, 0.0, sp, 1e-3);  // line at 0.5
    CHECK(ok.free_of_eigenvalues);
    CHECK(ok.distance == doctest::Approx(2.5));

    const auto hit = strip_free_check(2, -2.5, sp, 1e-3);  // line at 3.0
    CHECK_FALSE(hit.free_of_eigenvalues);
    CHECK(hit.nearest_eigenvalue == doctest::Approx(3.0));

    // Hemisphere Dirichlet: lambda_1 = 2 -> Lambda_+ = 1; line at 1.0 hits.
    PencilSpectrum hemi;
    VertexEigenvalue h;
    h.lambda_tilde = 2.0;
    h.lambda_plus = 1.0;
    h.lambda_minus = -2.0;
    hemi.vertex.push_back(h);
    CHECK_FALSE(strip_free_check(2, 0.5, hemi, 1e-3).free_of_eigenvalues);

    // A line beyond the computed spectrum cannot be certified.
    CHECK_THROWS_AS((void)strip_free_check(9, 0.0, sp, 1e-3), std::invalid_argument);
}

TEST_CASE("full pencil spectrum for the octant") {
    const auto cone = make_octant_cone();
    const BCAssignment bc({Bc::Dirichlet, Bc::Dirichlet, Bc::Dirichlet});
    const PencilSpectrum sp = compute_pencil_spectrum(cone, bc, 3, 2, 4);
    REQUIRE(sp.edges.size() == 3);
    for (const auto& e : sp.edges) {
        CHECK(e.bc == EdgeBc::DD);
        CHECK(e.delta_plus == doctest::Approx(2.0));
        REQUIRE(e.eigenvalues.size() == 3);
        CHECK(e.eigenvalues[0] == doctest::Approx(2.0));
    }
    CHECK(sp.vertex[0].lambda_tilde == doctest::Approx(12.0).epsilon(0.05));
}
