#include "conebesov/besov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace conebesov {

namespace {

int level_of(const Subband& band) {
    return static_cast<int>(std::lround(band.level()));
}

}  // namespace

IndexBins classify(const CoeffField& field, const TruncatedCone& domain,
                   const std::vector<int>& delta_signs) {
    const PolyhedralCone& cone = domain.cone;
    bool signed_mode = false;
    if (!delta_signs.empty()) {
        if (static_cast<int>(delta_signs.size()) != cone.edge_count())
            throw std::invalid_argument("delta sign pattern must have one entry per edge");
        for (int s : delta_signs) signed_mode |= (s < 0);
    }

    IndexBins out;
    for (const auto& band : field.bands) {
        if (band.is_scaling) continue;
        const int j = level_of(band);
        const double cell = band.cell;
        for (int i = 0; i < band.dims[0]; ++i)
            for (int jj = 0; jj < band.dims[1]; ++jj)
                for (int kk = 0; kk < band.dims[2]; ++kk) {
                    const Box3 q = field.support_cube(band, i, jj, kk);
                    if (!cone.box_intersects_truncated(q, domain.radius)) continue;
                    const double c =
                        band.values[(static_cast<size_t>(i) * band.dims[1] + jj) * band.dims[2] + kk];
                    const double rho_i = box_distance_to_origin(q);
                    const double r_i = cone.box_min_edge_distance(q);
                    const int k = static_cast<int>(rho_i / cell);
                    const int m = static_cast<int>(r_i / cell);
                    auto& bin = out.bins[{j, k, m}];
                    bin.count += 1;
                    bin.energy += c * c;
                    out.total_classified += 1;
                    if (k == 0)
                        out.vertex_zone_count += 1;
                    else if (m >= 1)
                        out.interior_count += 1;
                    else
                        out.edge_remainder_count += 1;

                    if (signed_mode) {
                        double r_plus = std::numeric_limits<double>::infinity();
                        double r_minus = 0.0;
                        for (int e = 0; e < cone.edge_count(); ++e) {
                            if (delta_signs[static_cast<size_t>(e)] >= 0)
                                r_plus = std::min(r_plus, cone.box_distance_to_edge(q, e));
                            else
                                r_minus = std::max(r_minus, cone.box_max_distance_to_edge(q, e));
                        }
                        if (!std::isfinite(r_plus)) r_plus = r_i;
                        auto& sbin = out.signed_bins[{j, k, static_cast<int>(r_plus / cell),
                                                      static_cast<int>(r_minus / cell)}];
                        sbin.count += 1;
                        sbin.energy += c * c;
                    }
                }
    }
    return out;
}

CardinalityTable bin_cardinalities(const TruncatedCone& domain, int j) {
    if (j < 1) throw std::invalid_argument("bin cardinalities require level j >= 1");
    CardinalityTable table;
    table.j = j;
    const double cell = std::ldexp(1.0, -j);
    const double R = domain.radius;
    const int hi = static_cast<int>(std::ceil(R / cell));

    // Tight integer bounds from the octant decomposition when available.
    int lo_idx[3] = {-hi - 1, -hi - 1, -hi - 1};
    int hi_idx[3] = {hi, hi, hi};
    if (auto mask = domain.cone.octant_mask()) {
        bool has_neg[3] = {false, false, false}, has_pos[3] = {false, false, false};
        for (unsigned o = 0; o < 8; ++o)
            if ((*mask >> o) & 1u)
                for (int a = 0; a < 3; ++a) ((o >> a) & 1u ? has_pos : has_neg)[a] = true;
        for (int a = 0; a < 3; ++a) {
            if (!has_neg[a]) lo_idx[a] = -1;
            if (!has_pos[a]) hi_idx[a] = 0;
        }
    }

    for (int a = lo_idx[0]; a <= hi_idx[0]; ++a)
        for (int b = lo_idx[1]; b <= hi_idx[1]; ++b)
            for (int c = lo_idx[2]; c <= hi_idx[2]; ++c) {
                Box3 box{{a * cell, b * cell, c * cell},
                         {(a + 1) * cell, (b + 1) * cell, (c + 1) * cell}};
                if (box_distance_to_origin(box) >= R) continue;
                if (!domain.cone.box_intersects_truncated(box, R)) continue;
                const int k = static_cast<int>(box_distance_to_origin(box) / cell);
                const int m = static_cast<int>(domain.cone.box_min_edge_distance(box) / cell);
                table.per_k[k] += 1;
                table.per_km[{k, m}] += 1;
            }
    return table;
}

double besov_norm(const CoeffField& field, double s, double p, double q) {
    if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("Besov norm requires p, q > 0");
    if (!(s > std::max(0.0, 3.0 * (1.0 / p - 1.0))))
        throw std::invalid_argument("Besov norm requires s > max(0, 3*(1/p - 1))");

    const double expo = s + 3.0 * (0.5 - 1.0 / p);
    std::map<int, double> level_sum;  // j -> sum |c|^p over detail coefficients
    double p0 = 0.0;
    for (const auto& band : field.bands) {
        if (band.is_scaling) {
            for (double v : band.values) p0 += (p == 2.0) ? v * v : std::pow(std::abs(v), p);
            continue;
        }
        double acc = 0.0;
        for (double v : band.values) acc += (p == 2.0) ? v * v : std::pow(std::abs(v), p);
        level_sum[level_of(band)] += acc;
    }
    double sum = 0.0;
    for (const auto& [j, inner] : level_sum) {
        if (inner == 0.0) continue;
        sum += std::exp2(static_cast<double>(j) * expo * q) * std::pow(inner, q / p);
    }
    return std::pow(p0, 1.0 / p) + std::pow(sum, 1.0 / q);
}

std::vector<LevelGroup> restrict_to_cone(const CoeffField& field, const TruncatedCone& domain) {
    std::map<std::pair<long, bool>, LevelGroup> groups;  // (level key, scaling)
    for (const auto& band : field.bands) {
        const long key = std::lround(band.level() * 4096.0);
        auto& group = groups[{key, band.is_scaling}];
        group.cell = band.cell;
        group.is_scaling = band.is_scaling;
        for (int i = 0; i < band.dims[0]; ++i)
            for (int j = 0; j < band.dims[1]; ++j)
                for (int k = 0; k < band.dims[2]; ++k) {
                    const Box3 q = field.support_cube(band, i, j, k);
                    if (!domain.cone.box_intersects_truncated(q, domain.radius)) continue;
                    group.magnitudes.push_back(std::abs(
                        band.values[(static_cast<size_t>(i) * band.dims[1] + j) * band.dims[2] + k]));
                }
    }
    std::vector<LevelGroup> out;
    for (auto& [key, g] : groups) out.push_back(std::move(g));
    std::sort(out.begin(), out.end(), [](const LevelGroup& a, const LevelGroup& b) {
        if (a.cell != b.cell) return a.cell > b.cell;  // coarse first
        return a.is_scaling && !b.is_scaling;          // scaling ahead of details
    });
    return out;
}

NTermCurve nterm_curve(const std::vector<LevelGroup>& groups, const std::vector<long>& terms,
                       double p) {
    for (size_t i = 1; i < terms.size(); ++i)
        if (terms[i] < terms[i - 1])
            throw std::invalid_argument("N list must be sorted ascending");

    NTermCurve curve;
    curve.terms = terms;
    curve.convention =
        (p == 2.0) ? NTermCurve::Convention::L2Parseval : NTermCurve::Convention::CoefficientProxy;

    std::vector<double> ranked;  // Lp-scaled magnitudes
    for (const auto& g : groups) {
        const double scale = (p == 2.0) ? 1.0 : std::pow(g.cell, 3.0 * (1.0 / p - 0.5));
        for (double m : g.magnitudes) ranked.push_back(m * scale);
    }
    const long count = static_cast<long>(ranked.size());
    for (long n : terms)
        if (n > count)
            throw std::invalid_argument("N = " + std::to_string(n) +
                                        " exceeds the coefficient count " + std::to_string(count));

    std::sort(ranked.begin(), ranked.end());  // ascending: tail sums are prefix sums
    std::vector<double> prefix(ranked.size() + 1, 0.0);
    for (size_t i = 0; i < ranked.size(); ++i)
        prefix[i + 1] = prefix[i] + ((p == 2.0) ? ranked[i] * ranked[i] : std::pow(ranked[i], p));

    for (long n : terms) {
        const double tail = prefix[static_cast<size_t>(count - n)];
        curve.sigma.push_back(std::pow(tail, 1.0 / p));
    }
    return curve;
}

LevelTruncationCurve level_truncation_curve(const std::vector<LevelGroup>& groups) {
    LevelTruncationCurve out;
    std::vector<double> group_energy(groups.size(), 0.0);
    for (size_t g = 0; g < groups.size(); ++g)
        for (double m : groups[g].magnitudes) group_energy[g] += m * m;

    long cumulative = 0;
    for (size_t g = 0; g < groups.size(); ++g) {
        cumulative += static_cast<long>(groups[g].magnitudes.size());
        // Merge the scaling band with the coarsest detail level (same cell).
        if (g + 1 < groups.size() && groups[g].is_scaling &&
            groups[g + 1].cell == groups[g].cell)
            continue;
        double tail = 0.0;
        for (size_t h = g + 1; h < groups.size(); ++h) tail += group_energy[h];
        out.level.push_back(-std::log2(groups[g].cell));
        out.terms.push_back(cumulative);
        out.error.push_back(std::sqrt(tail));
    }
    return out;
}

double fit_rate(const std::vector<long>& terms, const std::vector<double>& sigma, size_t first,
                size_t last) {
    if (terms.size() != sigma.size()) throw std::invalid_argument("mismatched curve arrays");
    if (last >= terms.size() || first > last || last - first + 1 < 3)
        throw std::invalid_argument("rate fit window must contain at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(last - first + 1);
    for (size_t i = first; i <= last; ++i) {
        if (!(sigma[i] > 0.0))
            throw std::invalid_argument("rate fit requires positive errors in the window");
        const double x = std::log(static_cast<double>(terms[i]));
        const double y = std::log(sigma[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace conebesov
