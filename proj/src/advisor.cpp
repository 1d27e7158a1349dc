#include "conebesov/advisor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conebesov {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double sum_nonneg(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
        if (x >= 0.0) s += x;
    return s;
}

std::vector<Interval> merge_union(std::vector<Interval> parts) {
    std::vector<Interval> nonempty;
    for (const auto& iv : parts)
        if (!iv.empty()) nonempty.push_back(iv);
    std::sort(nonempty.begin(), nonempty.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& iv : nonempty) {
        if (!out.empty() && iv.lo < out.back().hi - 1e-12)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

void push_and_maybe_throw(std::vector<ConditionRecord>& trail, ConditionRecord rec) {
    trail.push_back(rec);
    if (!rec.pass) throw AdvisorFailure(std::move(rec), trail);
}

}  // namespace

Interval admissible_r_positive(int l, const std::vector<double>& delta, double s) {
    if (l <= 0) throw std::invalid_argument("admissible_r_positive requires l > 0");
    if (!(s > 0.0)) throw std::invalid_argument("admissible_r_positive requires s > 0");
    for (double d : delta)
        if (!(d > 0.0))
            throw std::invalid_argument(
                "admissible_r_positive requires every delta component positive");
    const double r_max =
        std::min({static_cast<double>(l), 3.0 * (l - sum(delta)), 3.0 * s});
    return {0.0, std::max(0.0, r_max)};
}

std::vector<Interval> admissible_r_negative(int l, double beta, const std::vector<double>& delta,
                                            double s) {
    bool has_negative = false;
    for (double d : delta) has_negative |= (d < 0.0);
    if (!has_negative)
        throw std::invalid_argument(
            "admissible_r_negative requires at least one negative delta component");
    if (!(static_cast<double>(l) > beta))
        throw std::invalid_argument("admissible_r_negative requires l > beta");

    const double D = sum(delta);
    const double P = sum_nonneg(delta);
    const double L = static_cast<double>(l);
    const double lP = 1.5 * (L - P), bP = 1.5 * (beta - P);
    const double p32 = 1.5 * P, b34 = 0.75 * beta, l34 = 0.75 * L;
    const double inf = std::numeric_limits<double>::infinity();

    // The eight sufficient regions (lower bounds, upper bounds) for r.
    const std::vector<std::pair<std::vector<double>, std::vector<double>>> regions = {
        {{}, {D, bP}},                  // (A)
        {{bP}, {D, lP}},                // (B)
        {{lP, bP, D, b34}, {p32, l34}}, // (i)
        {{D, b34}, {p32, l34, bP}},     // (ii)
        {{D, bP}, {p32, b34, lP}},      // (iii)
        {{D}, {p32, b34, bP}},          // (iv)
        {{p32, b34}, {l34}},            // (C)
        {{p32}, {b34}},                 // (D)
    };

    std::vector<Interval> parts;
    for (const auto& [lows, highs] : regions) {
        double lo = 0.0, hi = std::min(3.0 * s, inf);
        for (double v : lows) lo = std::max(lo, v);
        for (double v : highs) hi = std::min(hi, v);
        parts.push_back({lo, hi});
    }
    return merge_union(parts);
}

std::vector<ConditionRecord> dirichlet_weight_check(
    int l, const std::vector<double>& delta,
    const std::vector<std::pair<double, double>>& strips) {
    std::vector<ConditionRecord> out;
    for (size_t j = 0; j < delta.size(); ++j) {
        const double v = delta[j] - l + 1.0;
        ConditionRecord rec;
        rec.id = "dirichlet_edge_weight_window";
        rec.lhs = v;
        rec.rhs = strips[j].second;
        rec.pass = (v > -strips[j].first) && (v < strips[j].second);
        rec.detail = "edge " + std::to_string(j) + ": delta_j - l + 1 = " + fmt(v) +
                     " must lie in (-" + fmt(strips[j].first) + ", " + fmt(strips[j].second) + ")";
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<ConditionRecord> neumann_weight_check(
    int l, const std::vector<double>& delta,
    const std::vector<std::pair<double, double>>& strips) {
    std::vector<ConditionRecord> out;
    for (size_t j = 0; j < delta.size(); ++j) {
        const double v = delta[j] + 1.0;
        const double lo = std::max(static_cast<double>(l) - strips[j].first, 0.0);
        ConditionRecord rec;
        rec.id = "neumann_edge_weight_window";
        rec.lhs = v;
        rec.rhs = static_cast<double>(l);
        rec.pass = (v > lo) && (v < l);
        rec.detail = "edge " + std::to_string(j) + ": delta_j + 1 = " + fmt(v) +
                     " must lie in (" + fmt(lo) + ", " + fmt(static_cast<double>(l)) + ")";
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<ConditionRecord> mixed_weight_check(int l, const std::vector<double>& delta,
                                                const std::vector<std::pair<double, double>>& strips,
                                                const std::vector<int>& jtilde) {
    std::vector<ConditionRecord> out;
    for (size_t j = 0; j < delta.size(); ++j) {
        const bool in_jtilde =
            std::find(jtilde.begin(), jtilde.end(), static_cast<int>(j)) != jtilde.end();
        const double v = delta[j] + 1.0;
        double lo = static_cast<double>(l) - strips[j].first;
        if (!in_jtilde) lo = std::max(lo, static_cast<double>(l) - 2.0);
        ConditionRecord rec;
        rec.id = "mixed_edge_weight_window";
        rec.lhs = v;
        rec.rhs = static_cast<double>(l);
        rec.pass = (v > lo) && (v < l);
        rec.detail = "edge " + std::to_string(j) + (in_jtilde ? " (in J~)" : " (outside J~)") +
                     ": delta_j + 1 = " + fmt(v) + " must lie in (" + fmt(lo) + ", " +
                     fmt(static_cast<double>(l)) + ")";
        out.push_back(std::move(rec));
    }
    return out;
}

double sobolev_bound(const ProblemSpec& spec, bool* open_bound) {
    if (spec.homogeneous) {
        if (open_bound) *open_bound = true;
        switch (spec.variant) {
            case ProblemVariant::Dirichlet: return spec.alpha0_dirichlet;
            case ProblemVariant::Neumann: return spec.alpha0_neumann;
            case ProblemVariant::Mixed: return spec.alpha0_mixed;
        }
    }
    if (open_bound) *open_bound = false;
    if (!spec.trace_s)
        throw std::invalid_argument("inhomogeneous data requires the trace label s");
    const double s = *spec.trace_s;

    ConditionRecord rec;
    rec.lhs = s;
    switch (spec.variant) {
        case ProblemVariant::Dirichlet:
            rec.id = "trace_smoothness_range_dirichlet";
            rec.pass = s > 0.5 && s < 1.5;
            rec.detail = "s = " + fmt(s) + " must lie in (1/2, 3/2)";
            break;
        case ProblemVariant::Neumann:
            rec.id = "trace_smoothness_range_neumann";
            rec.pass = s > 0.5 && s < 1.5 && spec.neumann_mean_zero;
            rec.detail = "s = " + fmt(s) +
                         " must lie in (1/2, 3/2) and the Neumann data must have mean zero";
            break;
        case ProblemVariant::Mixed:
            rec.id = "trace_smoothness_range_mixed";
            rec.pass = s > 1.0 - spec.epsilon_mixed && s < 1.0 + spec.epsilon_mixed;
            rec.detail = "s = " + fmt(s) + " must lie in (1 - eps, 1 + eps) with eps = " +
                         fmt(spec.epsilon_mixed);
            break;
    }
    if (!rec.pass) throw AdvisorFailure(rec, {rec});
    return s;
}

RegularityReport advise(const ProblemSpec& spec, const PolyhedralCone& cone,
                        const BCAssignment& bc, const PencilSpectrum& spectrum) {
    const int n = cone.edge_count();
    if (static_cast<int>(spec.delta.size()) != n)
        throw std::invalid_argument("delta length must match the cone edge count");
    if (bc.face_count() != n)
        throw std::invalid_argument("boundary assignment must cover every face");

    const ProblemVariant derived = bc.is_pure_dirichlet() ? ProblemVariant::Dirichlet
                                   : bc.is_pure_neumann() ? ProblemVariant::Neumann
                                                          : ProblemVariant::Mixed;
    if (derived != spec.variant)
        throw std::invalid_argument("problem variant does not match the boundary assignment");

    RegularityReport report;
    auto& trail = report.trail;

    // Base order requirement of the variant's regularity theorem.
    {
        const int min_l = (spec.variant == ProblemVariant::Dirichlet) ? 1 : 2;
        ConditionRecord rec;
        rec.id = "order_minimum";
        rec.lhs = spec.l;
        rec.rhs = min_l;
        rec.pass = spec.l >= min_l;
        rec.detail = "l = " + std::to_string(spec.l) + " must be >= " + std::to_string(min_l);
        push_and_maybe_throw(trail, std::move(rec));
    }

    // Mixed problems need the Dirichlet/Neumann split to meet along exactly
    // two edges.
    if (spec.variant == ProblemVariant::Mixed) {
        int mixed_edges = 0;
        for (int j = 0; j < n; ++j)
            if (bc.edge_bc(cone, j) == EdgeBc::Mixed) ++mixed_edges;
        ConditionRecord rec;
        rec.id = "boundary_split_two_edges";
        rec.lhs = mixed_edges;
        rec.rhs = 2;
        rec.pass = mixed_edges == 2;
        rec.detail = "the Dirichlet and Neumann boundary parts must meet along exactly two edges, "
                     "found " + std::to_string(mixed_edges);
        push_and_maybe_throw(trail, std::move(rec));
    }

    // Edge weight windows.
    {
        std::vector<std::pair<double, double>> strips;
        for (int j = 0; j < n; ++j)
            strips.push_back(edge_strip(cone.edge_angle(j), bc.edge_bc(cone, j)));
        std::vector<ConditionRecord> checks;
        switch (spec.variant) {
            case ProblemVariant::Dirichlet:
                checks = dirichlet_weight_check(spec.l, spec.delta, strips);
                break;
            case ProblemVariant::Neumann:
                checks = neumann_weight_check(spec.l, spec.delta, strips);
                break;
            case ProblemVariant::Mixed:
                checks = mixed_weight_check(spec.l, spec.delta, strips, bc.jtilde(cone));
                break;
        }
        for (auto& rec : checks) push_and_maybe_throw(trail, std::move(rec));
    }

    // Vertex strip condition at Re lambda = l - beta - 3/2.
    {
        const StripCheckResult strip =
            strip_free_check(spec.l, spec.beta, spectrum, spec.strip_tolerance);
        ConditionRecord rec;
        rec.id = "vertex_strip_free";
        rec.lhs = strip.distance;
        rec.rhs = spec.strip_tolerance;
        rec.pass = strip.free_of_eigenvalues;
        rec.detail = "the line l - beta - 3/2 = " + fmt(strip.line) +
                     " must avoid the vertex pencil spectrum; nearest eigenvalue " +
                     fmt(strip.nearest_eigenvalue) + " at distance " + fmt(strip.distance) +
                     (rec.pass ? "" : " (shift beta slightly)");
        push_and_maybe_throw(trail, std::move(rec));
    }

    // l > beta.
    {
        ConditionRecord rec;
        rec.id = "smoothness_exceeds_beta";
        rec.lhs = spec.l;
        rec.rhs = spec.beta;
        rec.pass = static_cast<double>(spec.l) > spec.beta;
        rec.detail = "l = " + std::to_string(spec.l) + " must exceed beta = " + fmt(spec.beta);
        push_and_maybe_throw(trail, std::move(rec));
    }

    // f must lie in L2 of the truncated cone on top of its weighted class.
    {
        ConditionRecord rec;
        rec.id = "rhs_in_l2";
        rec.lhs = spec.rhs_in_l2 ? 1.0 : 0.0;
        rec.rhs = 1.0;
        rec.pass = spec.rhs_in_l2;
        rec.detail = "the right-hand side must be declared in L2 of the truncated cone";
        push_and_maybe_throw(trail, std::move(rec));
    }

    report.sobolev_bound = sobolev_bound(spec, &report.sobolev_bound_open);
    {
        ConditionRecord rec;
        rec.id = "fractional_regularity_bound";
        rec.lhs = report.sobolev_bound;
        rec.rhs = 0.0;
        rec.pass = true;
        rec.detail = std::string("alpha_bar = ") + fmt(report.sobolev_bound) +
                     (report.sobolev_bound_open ? " (open bound, homogeneous data)"
                                                : " (trace label s)");
        trail.push_back(std::move(rec));
    }

    bool has_negative = false;
    for (double d : spec.delta) has_negative |= (d < 0.0);
    report.negative_delta_route = has_negative;
    if (has_negative) {
        report.besov_admissible =
            admissible_r_negative(spec.l, spec.beta, spec.delta, report.sobolev_bound);
        report.remark_proviso = true;
    } else {
        const Interval iv = admissible_r_positive(spec.l, spec.delta, report.sobolev_bound);
        if (!iv.empty()) report.besov_admissible.push_back(iv);
    }

    report.r_max = 0.0;
    for (const auto& iv : report.besov_admissible) report.r_max = std::max(report.r_max, iv.hi);
    report.adaptive_rate = report.r_max / 3.0;
    report.uniform_rate = report.sobolev_bound / 3.0;
    report.tau = report.r_max > 0.0 ? 1.0 / (report.r_max / 3.0 + 0.5) : 0.0;
    report.gain_factor =
        report.uniform_rate > 0.0 ? report.adaptive_rate / report.uniform_rate : 0.0;
    return report;
}

}  // namespace conebesov
