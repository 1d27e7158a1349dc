#pragma once

#include <iosfwd>
#include <vector>

#include "conebesov/geometry.hpp"
#include "conebesov/singular.hpp"

namespace conebesov {

enum class SpaceVariant { V, W, Wcal };

/// Parameter pack (l, p, beta, delta, variant) of the mixed-weight norms.
/// V applies derivative-order-dependent exponents delta_k - l + |alpha| on
/// every edge, Wcal only on the edges in `wcal_edges`, W on none.
struct WeightParams {
    int l = 0;
    double p = 2.0;
    double beta = 0.0;
    std::vector<double> delta;
    SpaceVariant variant = SpaceVariant::V;
    std::vector<int> wcal_edges;  // the set J~ (only read for Wcal)

    static WeightParams v_space(int l, double p, double beta, std::vector<double> delta);
    static WeightParams w_space(int l, double p, double beta, std::vector<double> delta);
    static WeightParams wcal_space(int l, double p, double beta, std::vector<double> delta,
                                   std::vector<int> jtilde);

    /// Throws ValidationError naming the violated invariant: delta length
    /// must equal n, and delta_j > -2/p on every edge without
    /// order-dependent weights (all j for W, j outside J~ for Wcal).
    void validate(int edge_count) const;

    /// True iff edge j carries the order-dependent exponent.
    bool order_dependent_edge(int j) const;

    double edge_exponent(int j, int alpha_total) const;
};

/// Graded quadrature over the truncated cone: dyadic radial rings toward the
/// vertex crossed with a cap triangulation whose corner triangles are split
/// into dyadic rings toward the edge directions (ratio 0.5 per level). Depth
/// L keeps rings 0..L-1 and drops the innermost piece, so no node lies within
/// 2^-L of the singular set (and never within the 1e-8 * radius exclusion
/// zone, since depths are capped at 26).
struct GradedQuadrature {
    int angular_resolution = 8;                       // uniform cap refinements = log2
    std::vector<int> depth_schedule = {2, 4, 8, 16, 24};
    double divergence_ratio = 1.5;                    // on refinement increments
    int divergence_run = 3;                           // consecutive ratios required

    void validate() const;
};

struct NormRefinementRow {
    int depth = 0;
    double value = 0.0;  // norm at this depth (p-th root of the partial sum)
    double ratio = 0.0;  // value / previous value (0 for the first row)
};

struct NormResult {
    double value = 0.0;
    bool diverged = false;
    std::vector<NormRefinementRow> table;

    /// CSV rows "level,norm_value,ratio".
    void write_csv(std::ostream& os) const;
};

/// Quadrature value of the mixed-weight norm. Divergence is flagged when the
/// refinement increments of the p-th power sums grow by more than
/// `divergence_ratio` for `divergence_run` consecutive schedule steps;
/// increments this slow stay below the heuristic only for exponents within
/// about 0.07 of the integrability boundary.
NormResult weighted_norm(const DerivativeOracle& u, const WeightParams& params,
                         const TruncatedCone& domain, const GradedQuadrature& q);

/// Single-weight norm with rho(x) = min(1, dist(x, S)).
NormResult kondratiev_norm(const DerivativeOracle& u, int m, double a, double p,
                           const TruncatedCone& domain, const GradedQuadrature& q);

struct ChainCheckResult {
    NormResult v_norm;
    NormResult wcal_norm;
    NormResult w_norm;
    /// Pointwise weight domination V >= Wcal >= W held at every node.
    bool domination_at_all_nodes = false;
};

/// Evaluates the three variants with identical (l, p, beta, delta) and
/// reports whether the integrand weights dominate pointwise.
ChainCheckResult norm_chain_check(const DerivativeOracle& u, int l, double p, double beta,
                                  const std::vector<double>& delta,
                                  const std::vector<int>& jtilde, const TruncatedCone& domain,
                                  const GradedQuadrature& q);

}  // namespace conebesov
