#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conebesov/pencil.hpp"
#include "conebesov/weighted_norms.hpp"

namespace conebesov {

/// Open interval (lo, hi); empty when hi <= lo.
struct Interval {
    double lo = 0.0, hi = 0.0;
    bool empty() const { return !(hi > lo); }
    bool contains(double r) const { return r > lo && r < hi; }
};

enum class ProblemVariant { Dirichlet, Neumann, Mixed };

/// Everything the regularity rules consume: the boundary value problem class
/// with its weighted data classes and the configurable fractional-regularity
/// constants.
struct ProblemSpec {
    ProblemVariant variant = ProblemVariant::Dirichlet;
    int l = 2;
    double beta = 0.0;
    std::vector<double> delta;

    bool homogeneous = true;
    std::optional<double> trace_s;  // fractional label s of the boundary data
    bool neumann_mean_zero = false; // boundary data has mean zero (Neumann)
    bool rhs_in_l2 = true;          // f in L2 of the truncated cone

    // Configured constants; the theory only pins the stated lower bounds.
    double alpha0_dirichlet = 1.5;
    double alpha0_neumann = 1.5;
    double alpha0_mixed = 1.25;
    double epsilon_mixed = 0.1;

    double strip_tolerance = 1e-3;
};

struct ConditionRecord {
    std::string id;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string detail;
};

/// A failed theorem hypothesis; carries exactly the violated condition.
class AdvisorFailure : public std::runtime_error {
public:
    AdvisorFailure(ConditionRecord condition, std::vector<ConditionRecord> trail)
        : std::runtime_error("condition failed: " + condition.id + " (" + condition.detail + ")"),
          condition(std::move(condition)),
          trail(std::move(trail)) {}

    ConditionRecord condition;
    std::vector<ConditionRecord> trail;
};

struct RegularityReport {
    double sobolev_bound = 0.0;
    bool sobolev_bound_open = false;  // true: alpha_bar is an open upper bound

    std::vector<Interval> besov_admissible;
    double r_max = 0.0;  // sup of the union (excluded supremum)
    double tau = 0.0;    // tau(r_max) = 1 / (r_max/3 + 1/2)
    double adaptive_rate = 0.0;   // r_max / 3
    double uniform_rate = 0.0;    // alpha_bar / 3
    double gain_factor = 0.0;

    bool negative_delta_route = false;
    /// Set on the negative-delta route: the admissible set is a union of
    /// sufficient regions and the positive-route bound min{l,3(l-|delta|)}
    /// is replaced by r < 3*alpha_bar only.
    bool remark_proviso = false;

    std::vector<ConditionRecord> trail;
};

/// r_max = min{l, 3(l - |delta|), 3s}; empty interval when r_max <= 0.
Interval admissible_r_positive(int l, const std::vector<double>& delta, double s);

/// Union of the eight sufficient regions for delta with at least one negative
/// component, intersected with (0, 3s). Requires l > beta and at least one
/// negative entry.
std::vector<Interval> admissible_r_negative(int l, double beta, const std::vector<double>& delta,
                                            double s);

/// Per-edge window -delta_plus < delta_j - l + 1 < delta_minus.
std::vector<ConditionRecord> dirichlet_weight_check(int l, const std::vector<double>& delta,
                                                    const std::vector<std::pair<double, double>>& strips);

/// Per-edge window max(l - delta_plus, 0) < delta_j + 1 < l.
std::vector<ConditionRecord> neumann_weight_check(int l, const std::vector<double>& delta,
                                                  const std::vector<std::pair<double, double>>& strips);

/// Per-edge window, tightened to max(l - delta_plus, l - 2) on edges outside
/// J~ (both adjacent faces Neumann).
std::vector<ConditionRecord> mixed_weight_check(int l, const std::vector<double>& delta,
                                                const std::vector<std::pair<double, double>>& strips,
                                                const std::vector<int>& jtilde);

/// Upper fractional-regularity bound: the configured alpha_0 for homogeneous
/// data (open bound), the trace label s otherwise. Throws AdvisorFailure when
/// s lies outside the variant's admissible interval.
double sobolev_bound(const ProblemSpec& spec, bool* open_bound = nullptr);

/// Runs every hypothesis of the variant's regularity theorem against the
/// computed pencil spectrum and assembles the report; throws AdvisorFailure
/// naming the first violated condition.
RegularityReport advise(const ProblemSpec& spec, const PolyhedralCone& cone,
                        const BCAssignment& bc, const PencilSpectrum& spectrum);

}  // namespace conebesov
