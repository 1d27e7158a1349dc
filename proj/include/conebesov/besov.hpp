#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "conebesov/geometry.hpp"
#include "conebesov/wavelet.hpp"

namespace conebesov {

/// Distance-classified wavelet coefficients: dyadic bins relative to the
/// singular set. k = floor(rho_I * 2^j), m = floor(r_I * 2^j) with rho_I and
/// r_I the distances of the support cube Q(I) to the vertex and to the
/// nearest edge. Three disjoint families: the vertex zone (k = 0), the
/// interior set (k >= 1 and m >= 1), and the remaining edge zone
/// (k >= 1, m = 0).
struct IndexBins {
    struct Bin {
        long count = 0;
        double energy = 0.0;
    };

    enum class Family { VertexZone, Interior, EdgeRemainder };

    /// (j, k, m) -> bin; j is the integer dyadic level of the band.
    std::map<std::tuple<int, int, int>, Bin> bins;
    /// Only filled when a sign pattern with negative entries is supplied:
    /// (j, k, m_plus, m_minus) -> bin with m_plus from r_I^+ (min distance to
    /// the nonnegative edges) and m_minus from r_I^- (max distance over the
    /// negative edges).
    std::map<std::tuple<int, int, int, int>, Bin> signed_bins;

    long vertex_zone_count = 0;
    long interior_count = 0;
    long edge_remainder_count = 0;
    long total_classified = 0;

    long family_total() const {
        return vertex_zone_count + interior_count + edge_remainder_count;
    }
};

/// Classifies every detail coefficient whose support cube meets the truncated
/// cone. `delta_signs` (one entry per edge, +1/-1/0) activates the signed
/// (m_plus, m_minus) bins when it contains a negative entry.
IndexBins classify(const CoeffField& field, const TruncatedCone& domain,
                   const std::vector<int>& delta_signs = {});

/// Exact dyadic-cube counts at level j: every cube of side 2^-j intersecting
/// the truncated cone, binned by k and (k, m).
struct CardinalityTable {
    int j = 0;
    std::map<int, long> per_k;
    std::map<std::pair<int, int>, long> per_km;
};
CardinalityTable bin_cardinalities(const TruncatedCone& domain, int j);

/// Wavelet-coefficient Besov norm: the P0 part enters as an Lp norm of the
/// projected part (exact for p = 2, coefficient proxy otherwise).
/// Requires s > max(0, 3*(1/p - 1)).
double besov_norm(const CoeffField& field, double s, double p, double q);

/// Retained coefficient magnitudes per dyadic level after restricting to
/// support cubes that meet the truncated cone.
struct LevelGroup {
    double cell = 0.0;
    bool is_scaling = false;
    std::vector<double> magnitudes;
};
std::vector<LevelGroup> restrict_to_cone(const CoeffField& field, const TruncatedCone& domain);

struct NTermCurve {
    enum class Convention { L2Parseval, CoefficientProxy };
    std::vector<long> terms;
    std::vector<double> sigma;
    Convention convention = Convention::L2Parseval;
};

/// Best N-term tail errors for the given ascending N list. p = 2 keeps the
/// N largest magnitudes (Parseval); p != 2 ranks Lp-rescaled coefficients and
/// reports the lp tail, tagged as a proxy.
NTermCurve nterm_curve(const std::vector<LevelGroup>& groups, const std::vector<long>& terms,
                       double p = 2.0);

/// Uniform baseline: keep everything up to each level; N = cumulative count,
/// err = l2 norm of the finer levels.
struct LevelTruncationCurve {
    std::vector<double> level;
    std::vector<long> terms;
    std::vector<double> error;
};
LevelTruncationCurve level_truncation_curve(const std::vector<LevelGroup>& groups);

/// Least-squares slope of log(sigma) against log(N) over [first, last]
/// (inclusive indices). Requires >= 3 points, all sigma > 0.
double fit_rate(const std::vector<long>& terms, const std::vector<double>& sigma, size_t first,
                size_t last);

}  // namespace conebesov
