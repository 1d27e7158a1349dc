#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conebesov/weighted_norms.hpp"

using namespace conebesov;

namespace {
constexpr double kPi = std::numbers::pi;

DerivativeOracle constant_one(int order = 2) {
    DerivativeOracle o;
    o.max_order = order;
    o.eval = [](const std::array<int, 3>& alpha, const Vec3&) {
        return (alpha[0] + alpha[1] + alpha[2]) == 0 ? 1.0 : 0.0;
    };
    return o;
}

GradedQuadrature quick_quadrature() {
    GradedQuadrature q;
    q.angular_resolution = 8;
    q.depth_schedule = {2, 4, 8, 16, 24};
    return q;
}
}  // namespace

TEST_CASE("plain L2 norm of 1 on the truncated octant is sqrt(pi/6)") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    const auto params = WeightParams::v_space(0, 2.0, 0.0, {0, 0, 0});
    const NormResult res = weighted_norm(constant_one(0), params, domain, quick_quadrature());
    CHECK_FALSE(res.diverged);
    CHECK(res.value == doctest::Approx(std::sqrt(kPi / 6.0)).epsilon(1e-3));
}

TEST_CASE("Kondratiev norm of 1 with a = 0 equals the same volume") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    const NormResult res = kondratiev_norm(constant_one(0), 0, 0.0, 2.0, domain, quick_quadrature());
    CHECK_FALSE(res.diverged);
    CHECK(res.value == doctest::Approx(std::sqrt(kPi / 6.0)).epsilon(1e-3));
}

TEST_CASE("edge-singular membership: delta above/below the threshold") {
    // u = chi * r^{2/3} sin(2 phi / 3) on the reentrant wedge, l = 2:
    // the radial oracle integral t^{2(delta - l + lambda) + 1} flips
    // integrability at delta_min = l - lambda - 1 = 1/3.
    const TruncatedCone domain(make_reentrant_wedge_cone(), 1.0);
    const auto fn = SingularFunction::edge(3 * kPi / 2, EdgeBc::DD, 1, {0.5, 0.9});
    const auto oracle = fn.oracle();

    SUBCASE("delta = 0.5 > 1/3 converges with a stable refinement tail") {
        const auto params = WeightParams::v_space(2, 2.0, 0.0, {0.5, 0.2, 0.2});
        const NormResult res = weighted_norm(oracle, params, domain, quick_quadrature());
        CHECK_FALSE(res.diverged);
        CHECK(std::isfinite(res.value));
        // Cauchy-like refinement: increments shrink over the last steps.
        const auto& t = res.table;
        REQUIRE(t.size() >= 4);
        const double d1 = t[t.size() - 3].value - t[t.size() - 4].value;
        const double d2 = t[t.size() - 2].value - t[t.size() - 3].value;
        const double d3 = t[t.size() - 1].value - t[t.size() - 2].value;
        CHECK(std::abs(d2) <= std::abs(d1) + 1e-12);
        CHECK(std::abs(d3) <= std::abs(d2) + 1e-12);
    }

    SUBCASE("delta = 0.2 < 1/3 raises the divergence flag") {
        const auto params = WeightParams::v_space(2, 2.0, 0.0, {0.2, 0.2, 0.2});
        const NormResult res = weighted_norm(oracle, params, domain, quick_quadrature());
        CHECK(res.diverged);
    }
}

TEST_CASE("Kondratiev divergence example: rho * cutoff with m = 1, a = 2") {
    // Near the edges dist(x, S) ~ r while u ~ 1, so the |alpha| = 0 term
    // carries r^{-4} against the r dr cross-measure: divergent.
    const TruncatedCone domain(make_octant_cone(), 1.0);
    DerivativeOracle o;
    o.max_order = 1;
    Cutoff chi{0.5, 0.9};
    o.eval = [chi](const std::array<int, 3>& alpha, const Vec3& x) {
        const int total = alpha[0] + alpha[1] + alpha[2];
        const double rho = norm(x);
        if (total == 0) return chi.value(rho) * rho;
        const int i = alpha[0] == 1 ? 0 : (alpha[1] == 1 ? 1 : 2);
        return chi.d1(rho) * (x[i] / rho) * rho + chi.value(rho) * (x[i] / rho);
    };
    const NormResult res = kondratiev_norm(o, 1, 2.0, 2.0, domain, quick_quadrature());
    CHECK(res.diverged);
}

TEST_CASE("homogeneity: norm scales linearly in the coefficient") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    const auto fn = SingularFunction::edge(kPi / 2, EdgeBc::DD, 1, {0.5, 0.9});
    const auto params = WeightParams::v_space(2, 2.0, 0.0, {0.3, 0.3, 0.3});
    GradedQuadrature q = quick_quadrature();
    q.depth_schedule = {2, 4, 8};

    DerivativeOracle base = fn.oracle();
    DerivativeOracle scaled;
    scaled.max_order = base.max_order;
    scaled.eval = [&base](const std::array<int, 3>& alpha, const Vec3& x) {
        return -7.5 * base.eval(alpha, x);
    };
    const double n1 = weighted_norm(base, params, domain, q).value;
    const double n2 = weighted_norm(scaled, params, domain, q).value;
    CHECK(n2 == doctest::Approx(7.5 * n1).epsilon(1e-12));
}

TEST_CASE("triangle inequality at fixed quadrature") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    const auto f = SingularFunction::edge(kPi / 2, EdgeBc::DD, 1, {0.5, 0.9});
    const auto g = SingularFunction::vertex_analytic(
        SingularFunction::VertexProfile::OctantAnalytic, {0.5, 0.9});
    const auto params = WeightParams::v_space(2, 2.0, 0.0, {0.3, 0.3, 0.3});
    GradedQuadrature q = quick_quadrature();
    q.depth_schedule = {2, 4, 8};

    DerivativeOracle of = f.oracle(), og = g.oracle(), sum;
    sum.max_order = 2;
    sum.eval = [&](const std::array<int, 3>& alpha, const Vec3& x) {
        return of.eval(alpha, x) + og.eval(alpha, x);
    };
    const double nf = weighted_norm(of, params, domain, q).value;
    const double ng = weighted_norm(og, params, domain, q).value;
    const double nsum = weighted_norm(sum, params, domain, q).value;
    CHECK(nsum <= nf + ng + 1e-9 * (nf + ng));
}

TEST_CASE("Kondratiev coincidence: m=l, delta=(l-a,...), beta=l-a brackets the V-norm") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    GradedQuadrature q = quick_quadrature();
    q.depth_schedule = {2, 4, 8};
    const int l = 2;
    const double a = 1.0;

    std::vector<SingularFunction> fns;
    fns.push_back(SingularFunction::edge(kPi / 2, EdgeBc::DD, 1, {0.5, 0.9}));
    fns.push_back(SingularFunction::edge(kPi / 2, EdgeBc::DD, 2, {0.5, 0.9}));
    fns.push_back(SingularFunction::edge(kPi / 2, EdgeBc::NN, 2, {0.4, 0.8}));
    fns.push_back(SingularFunction::edge(kPi / 2, EdgeBc::Mixed, 1, {0.5, 0.9}));
    fns.push_back(SingularFunction::edge(kPi / 2, EdgeBc::Mixed, 2, {0.3, 0.7}));
    fns.push_back(SingularFunction::vertex_analytic(
        SingularFunction::VertexProfile::OctantAnalytic, {0.5, 0.9}));
    fns.push_back(SingularFunction::vertex_analytic(
        SingularFunction::VertexProfile::HemisphereAnalytic, {0.5, 0.9}));
    fns.push_back(SingularFunction::vertex_analytic(
        SingularFunction::VertexProfile::NeumannConstant, {0.5, 0.9}));
    fns.push_back(SingularFunction::edge(kPi / 2, EdgeBc::DD, 3, {0.6, 0.9}));
    fns.push_back(SingularFunction::vertex_analytic(
        SingularFunction::VertexProfile::OctantAnalytic, {0.3, 0.6}));

    const auto params =
        WeightParams::v_space(l, 2.0, l - a, {double(l) - a, double(l) - a, double(l) - a});
    double rmin = 1e300, rmax = 0.0;
    for (const auto& fn : fns) {
        const auto oracle = fn.oracle();
        const double kn = kondratiev_norm(oracle, l, a, 2.0, domain, q).value;
        const double vn = weighted_norm(oracle, params, domain, q).value;
        REQUIRE(vn > 0.0);
        const double ratio = kn / vn;
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    // Equivalent norms: the ratio stays in a fixed bracket over the test set.
    CHECK(rmin > 1.0 / 50.0);
    CHECK(rmax < 50.0);
}

TEST_CASE("norm chain: V >= Wcal >= W with pointwise domination") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    GradedQuadrature q = quick_quadrature();
    q.depth_schedule = {2, 4, 8};

    SUBCASE("constant function, l = 1, Jtilde = {0}") {
        const auto res =
            norm_chain_check(constant_one(1), 1, 2.0, 0.0, {0.5, 0.5, 0.5}, {0}, domain, q);
        CHECK(res.domination_at_all_nodes);
        CHECK(res.v_norm.value >= res.wcal_norm.value - 1e-12);
        CHECK(res.wcal_norm.value >= res.w_norm.value - 1e-12);
    }

    SUBCASE("identical weights when delta = 0 and l = 0") {
        const auto res = norm_chain_check(constant_one(0), 0, 2.0, 0.0, {0, 0, 0}, {1}, domain, q);
        CHECK(res.v_norm.value == doctest::Approx(res.w_norm.value).epsilon(1e-12));
        CHECK(res.v_norm.value == doctest::Approx(res.wcal_norm.value).epsilon(1e-12));
    }

    SUBCASE("edge-singular function: W finite while V diverges is permitted") {
        const TruncatedCone wedge(make_reentrant_wedge_cone(), 1.0);
        const auto fn = SingularFunction::edge(3 * kPi / 2, EdgeBc::DD, 1, {0.5, 0.9});
        GradedQuadrature deep = quick_quadrature();
        const auto res =
            norm_chain_check(fn.oracle(), 2, 2.0, 0.0, {0.2, 0.2, 0.2}, {}, wedge, deep);
        CHECK(res.v_norm.diverged);       // delta below the V threshold 1/3
        CHECK_FALSE(res.w_norm.diverged); // fixed exponents stay integrable
        CHECK(res.domination_at_all_nodes);
    }
}

TEST_CASE("weight parameter validation names the violated invariant") {
    CHECK_THROWS_WITH_AS(WeightParams::v_space(2, 2.0, 0.0, {0.1, 0.2}).validate(3),
                         doctest::Contains("delta length"), ValidationError);
    CHECK_THROWS_WITH_AS(WeightParams::w_space(2, 2.0, 0.0, {-1.5, 0.2, 0.2}).validate(3),
                         doctest::Contains("-2/p"), ValidationError);
    CHECK_NOTHROW(WeightParams::wcal_space(2, 2.0, 0.0, {-1.5, 0.2, 0.2}, {0}).validate(3));
}

TEST_CASE("refinement table is written as CSV") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    GradedQuadrature q = quick_quadrature();
    q.depth_schedule = {2, 4};
    const auto params = WeightParams::v_space(0, 2.0, 0.0, {0, 0, 0});
    const NormResult res = weighted_norm(constant_one(0), params, domain, q);
    std::ostringstream os;
    res.write_csv(os);
    CHECK(os.str().find("level,norm_value,ratio") == 0);
    CHECK(std::count(os.str().begin(), os.str().end(), '\n') == 3);
}
