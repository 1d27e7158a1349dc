#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conebesov/besov.hpp"

using namespace conebesov;

namespace {

// Independent oracle: enumerate all dyadic cells intersecting the truncated
// octant with naive per-corner distance math; no fast paths.
std::map<std::pair<int, int>, long> octant_cube_oracle(int j, double radius) {
    std::map<std::pair<int, int>, long> counts;
    const double cell = std::ldexp(1.0, -j);
    const int hi = static_cast<int>(std::ceil(radius / cell));
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int a = 0; a < hi; ++a)
        for (int b = 0; b < hi; ++b)
            for (int c = 0; c < hi; ++c) {
                const Box3 box{{a * cell, b * cell, c * cell},
                               {(a + 1) * cell, (b + 1) * cell, (c + 1) * cell}};
                // Octant cells always meet the open octant; keep those whose
                // nearest corner is inside the ball.
                const double d0 = std::sqrt(double(a) * a + double(b) * b + double(c) * c) * cell;
                if (d0 >= radius) continue;
                double rmin = 1e300;
                for (const Vec3& axis : axes) {
                    // convex in t; fine ternary search
                    double lo = 0.0, hit = 2.0 * radius;
                    for (int it = 0; it < 200; ++it) {
                        const double m1 = lo + (hit - lo) / 3, m2 = hit - (hit - lo) / 3;
                        auto f = [&](double t) {
                            const Vec3 p = axis * t;
                            double s = 0.0;
                            for (int i = 0; i < 3; ++i) {
                                const double d = std::max({box.lo[i] - p[i], p[i] - box.hi[i], 0.0});
                                s += d * d;
                            }
                            return s;
                        };
                        (f(m1) < f(m2) ? hit : lo) = (f(m1) < f(m2) ? m2 : m1);
                    }
                    const Vec3 p = axis * (0.5 * (lo + hit));
                    double s = 0.0;
                    for (int i = 0; i < 3; ++i) {
                        const double d = std::max({box.lo[i] - p[i], p[i] - box.hi[i], 0.0});
                        s += d * d;
                    }
                    rmin = std::min(rmin, std::sqrt(s));
                }
                counts[{static_cast<int>(d0 / cell), static_cast<int>(rmin / cell)}] += 1;
            }
    return counts;
}

}  // namespace

TEST_CASE("octant cardinalities at j = 1 match the hand enumeration") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    const CardinalityTable t = bin_cardinalities(domain, 1);
    // 8 half-cells: 1 at the vertex (k=0,m=0), 3 touching one axis (k=1,m=0),
    // 4 away from every axis (k=1,m=1).
    REQUIRE(t.per_k.size() == 2);
    CHECK(t.per_k.at(0) == 1);
    CHECK(t.per_k.at(1) == 7);
    CHECK(t.per_km.at({0, 0}) == 1);
    CHECK(t.per_km.at({1, 0}) == 3);
    CHECK(t.per_km.at({1, 1}) == 4);
}

TEST_CASE("octant cardinalities match the independent cube oracle") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    for (int j : {2, 3, 4}) {
        const CardinalityTable t = bin_cardinalities(domain, j);
        const auto oracle = octant_cube_oracle(j, 1.0);
        long total_t = 0, total_o = 0;
        for (const auto& [km, c] : t.per_km) total_t += c;
        for (const auto& [km, c] : oracle) total_o += c;
        CHECK(total_t == total_o);
        for (const auto& [km, c] : oracle) {
            INFO("j=", j, " k=", km.first, " m=", km.second);
            CHECK(t.per_km.at(km) == c);
        }
    }
}

TEST_CASE("normalized cardinalities are bounded: |bin(j,k)| / k^2") {
    const TruncatedCone domain(make_octant_cone(), 1.0);
    double lo = 1e300, hi = 0.0;
    for (int j : {4, 5, 6}) {
        const CardinalityTable t = bin_cardinalities(domain, j);
        double sup = 0.0;
        for (const auto& [k, c] : t.per_k)
            if (k >= 2 && k <= (1 << (j - 1)))
                sup = std::max(sup, c / (static_cast<double>(k) * k));
        lo = std::min(lo, sup);
        hi = std::max(hi, sup);
    }
    CHECK(hi / lo < 2.0);
}

TEST_CASE("classification: vertex zone, floor bins, partition") {
    const auto sys = WaveletSystem::daubechies(2);
    const TruncatedCone domain(make_octant_cone(), 1.0);
    SampleGrid g;
    const int n = 32;
    g.origin = {-1, -1, -1};
    g.spacing = 2.0 / n;
    g.dims = {n, n, n};
    g.values.assign(static_cast<size_t>(n) * n * n, 0.0);
    std::mt19937 rng(4);
    std::normal_distribution<double> gauss;
    for (double& v : g.values) v = gauss(rng);
    const CoeffField field = analyze(g, sys, 3);

    const IndexBins bins = classify(field, domain);
    CHECK(bins.total_classified > 0);
    CHECK(bins.family_total() == bins.total_classified);
    long from_bins = 0;
    for (const auto& [key, bin] : bins.bins) from_bins += bin.count;
    CHECK(from_bins == bins.total_classified);

    // Spot-check the bin of one known coefficient: a support cube containing
    // the origin must land in the vertex zone.
    for (const auto& band : field.bands) {
        if (band.is_scaling) continue;
        const Box3 q = field.support_cube(band, -band.offset[0], -band.offset[1], -band.offset[2]);
        CHECK(box_distance_to_origin(q) == 0.0);
        break;
    }
}

TEST_CASE("signed bins appear only with a negative sign pattern") {
    const auto sys = WaveletSystem::daubechies(2);
    const TruncatedCone domain(make_octant_cone(), 1.0);
    SampleGrid g;
    const int n = 16;
    g.origin = {-1, -1, -1};
    g.spacing = 2.0 / n;
    g.dims = {n, n, n};
    g.values.assign(static_cast<size_t>(n) * n * n, 1.0);
    const CoeffField field = analyze(g, sys, 2);

    CHECK(classify(field, domain, {1, 1, 1}).signed_bins.empty());
    const IndexBins with_neg = classify(field, domain, {1, -1, 1});
    CHECK_FALSE(with_neg.signed_bins.empty());
    long signed_total = 0;
    for (const auto& [key, bin] : with_neg.signed_bins) signed_total += bin.count;
    CHECK(signed_total == with_neg.total_classified);
}

TEST_CASE("besov norm: single wavelet, zero field, p = q = 2 cross-check") {
    const auto sys = WaveletSystem::daubechies(2);
    const int n = 32, levels = 3;

    SUBCASE("single unit coefficient gives the closed form") {
        for (int band_index : {0, 7, 14}) {
            CoeffField unit =
                unit_coefficient_field(sys, {-1, -1, -1}, 2.0, n, levels, band_index, {3, 3, 3});
            const auto& band = unit.bands[static_cast<size_t>(band_index)];
            REQUIRE_FALSE(band.is_scaling);
            const double j = band.level();
            for (double s : {0.7, 1.3}) {
                for (double p : {2.0, 1.5}) {
                    const double expected = std::exp2(j * (s + 3.0 * (0.5 - 1.0 / p)));
                    CHECK(besov_norm(unit, s, p, p) == doctest::Approx(expected).epsilon(1e-12));
                }
            }
        }
    }

    SUBCASE("zero field has norm zero") {
        SampleGrid g;
        g.origin = {-1, -1, -1};
        g.spacing = 2.0 / n;
        g.dims = {n, n, n};
        g.values.assign(static_cast<size_t>(n) * n * n, 0.0);
        CHECK(besov_norm(analyze(g, sys, levels), 1.0, 2.0, 2.0) == 0.0);
    }

    SUBCASE("p = q = 2 matches the direct double sum") {
        SampleGrid g;
        g.origin = {-1, -1, -1};
        g.spacing = 2.0 / n;
        g.dims = {n, n, n};
        g.values.resize(static_cast<size_t>(n) * n * n);
        std::mt19937 rng(8);
        std::normal_distribution<double> gauss;
        for (double& v : g.values) v = gauss(rng);
        const CoeffField field = analyze(g, sys, levels);
        const double s = 0.9;

        double detail_sq = 0.0, p0_sq = 0.0;
        for (const auto& band : field.bands) {
            double acc = 0.0;
            for (double v : band.values) acc += v * v;
            if (band.is_scaling)
                p0_sq += acc;
            else
                detail_sq += std::exp2(2.0 * s * band.level()) * acc;
        }
        const double expected = std::sqrt(p0_sq) + std::sqrt(detail_sq);
        CHECK(besov_norm(field, s, 2.0, 2.0) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("parameter constraint violations throw") {
        CoeffField unit = unit_coefficient_field(sys, {-1, -1, -1}, 2.0, n, levels, 0, {3, 3, 3});
        CHECK_THROWS_AS((void)besov_norm(unit, -0.1, 2.0, 2.0), std::invalid_argument);
        CHECK_THROWS_AS((void)besov_norm(unit, 0.5, 0.5, 0.5), std::invalid_argument);
    }
}

TEST_CASE("n-term curve basics") {
    std::vector<LevelGroup> groups(1);
    groups[0].cell = 0.25;
    groups[0].magnitudes = {3.0, 2.0, 1.0};

    const NTermCurve c = nterm_curve(groups, {0, 1, 2, 3});
    CHECK(c.sigma[0] == doctest::Approx(std::sqrt(14.0)));
    CHECK(c.sigma[1] == doctest::Approx(std::sqrt(5.0)));
    CHECK(c.sigma[3] == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)nterm_curve(groups, {4}), std::invalid_argument);

    // sigma_N^2 + kept energy = total energy.
    const double total = 14.0;
    CHECK(c.sigma[1] * c.sigma[1] + 9.0 == doctest::Approx(total).epsilon(1e-10));
}

TEST_CASE("n-term: geometric coefficients match the closed-form tail") {
    std::vector<LevelGroup> groups(1);
    groups[0].cell = 0.5;
    std::vector<long> terms;
    for (int i = 0; i <= 20; ++i) groups[0].magnitudes.push_back(std::exp2(-i));
    for (long n = 0; n <= 20; ++n) terms.push_back(n);
    const NTermCurve c = nterm_curve(groups, terms);
    for (long n = 0; n <= 20; ++n) {
        // tail sum_{i>=n} 4^{-i} = 4^{-n} * 4/3, truncated at i = 20.
        double tail = 0.0;
        for (int i = static_cast<int>(n); i <= 20; ++i) tail += std::exp2(-2.0 * i);
        CHECK(c.sigma[static_cast<size_t>(n)] == doctest::Approx(std::sqrt(tail)).epsilon(1e-12));
    }
}

TEST_CASE("n-term depends only on the magnitude multiset (p = 2)") {
    std::vector<LevelGroup> a(2), b(1);
    a[0].cell = 0.5;
    a[0].magnitudes = {0.3, 1.7};
    a[1].cell = 0.25;
    a[1].magnitudes = {2.5, 0.1};
    b[0].cell = 0.125;
    b[0].magnitudes = {2.5, 0.3, 0.1, 1.7};
    const auto ca = nterm_curve(a, {1, 2, 3});
    const auto cb = nterm_curve(b, {1, 2, 3});
    for (size_t i = 0; i < ca.sigma.size(); ++i)
        CHECK(ca.sigma[i] == doctest::Approx(cb.sigma[i]).epsilon(1e-14));
}

TEST_CASE("fit_rate recovers exact power laws") {
    std::vector<long> terms;
    std::vector<double> s05, s1;
    for (long n : {8L, 16L, 32L, 64L, 128L, 256L}) {
        terms.push_back(n);
        s05.push_back(std::pow(n, -0.5));
        s1.push_back(7.0 * std::pow(n, -1.0));
    }
    CHECK(fit_rate(terms, s05, 0, terms.size() - 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit_rate(terms, s1, 0, terms.size() - 1) == doctest::Approx(-1.0).epsilon(1e-12));

    // Monte Carlo noise robustness: 100 draws of 1% multiplicative noise.
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> noisy;
        for (size_t i = 0; i < terms.size(); ++i) noisy.push_back(s05[i] * (1.0 + noise(rng)));
        CHECK(fit_rate(terms, noisy, 0, terms.size() - 1) == doctest::Approx(-0.5).epsilon(0.04));
    }

    CHECK_THROWS_AS((void)fit_rate(terms, s05, 0, 1), std::invalid_argument);
    std::vector<double> with_zero = s05;
    with_zero[2] = 0.0;
    CHECK_THROWS_AS((void)fit_rate(terms, with_zero, 0, terms.size() - 1), std::invalid_argument);
}

TEST_CASE("level truncation curve: counts accumulate, errors shrink") {
    std::vector<LevelGroup> groups(3);
    groups[0].cell = 0.5;
    groups[0].is_scaling = true;
    groups[0].magnitudes = {1.0, 2.0};
    groups[1].cell = 0.5;
    groups[1].magnitudes = {0.5};
    groups[2].cell = 0.25;
    groups[2].magnitudes = {0.25, 0.25};
    const LevelTruncationCurve c = level_truncation_curve(groups);
    REQUIRE(c.terms.size() == 2);  // scaling merged with the same-cell details
    CHECK(c.terms[0] == 3);
    CHECK(c.terms[1] == 5);
    CHECK(c.error[0] == doctest::Approx(std::sqrt(0.125)));
    CHECK(c.error[1] == doctest::Approx(0.0));
}
