#include "conebesov/wavelet.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "conebesov/geometry.hpp"

namespace conebesov {

namespace {

int floor_div2(int a) { return (a >= 0) ? a / 2 : -((-a + 1) / 2); }
int ceil_div2(int a) { return floor_div2(a + 1); }

/// Internal working grid: logical indices [off, off+dims) per axis.
struct Grid3 {
    std::array<int, 3> off{0, 0, 0};
    std::array<int, 3> dims{0, 0, 0};
    std::vector<double> v;

    size_t size() const {
        return static_cast<size_t>(dims[0]) * static_cast<size_t>(dims[1]) *
               static_cast<size_t>(dims[2]);
    }
    size_t flat(int i, int j, int k) const {
        return (static_cast<size_t>(i) * dims[1] + j) * dims[2] + k;
    }
};

/// One filtering+downsampling pass along `axis`; returns (low, high) with the
/// expanded zero-extension index range.
std::pair<Grid3, Grid3> dwt_axis(const Grid3& in, int axis, const std::vector<double>& h,
                                 const std::vector<double>& g) {
    const int L = static_cast<int>(h.size());
    const int o = in.off[axis], n = in.dims[axis];
    const int m0 = ceil_div2(o - L + 1), m1 = floor_div2(o + n - 1);
    const int mlen = m1 - m0 + 1;

    Grid3 low, high;
    low.off = in.off;
    low.dims = in.dims;
    low.off[axis] = m0;
    low.dims[axis] = mlen;
    high = low;
    low.v.assign(low.size(), 0.0);
    high.v.assign(high.size(), 0.0);

    const int d0 = in.dims[0], d1 = in.dims[1], d2 = in.dims[2];
    std::vector<double> line(static_cast<size_t>(n));
    std::vector<double> lo_line(static_cast<size_t>(mlen)), hi_line(static_cast<size_t>(mlen));

    auto run_line = [&]() {
        for (int m = 0; m < mlen; ++m) {
            const int mm = m0 + m;
            double acc_l = 0.0, acc_h = 0.0;
            const int k_lo = std::max(o, 2 * mm), k_hi = std::min(o + n - 1, 2 * mm + L - 1);
            for (int k = k_lo; k <= k_hi; ++k) {
                const double c = line[static_cast<size_t>(k - o)];
                acc_l += h[static_cast<size_t>(k - 2 * mm)] * c;
                acc_h += g[static_cast<size_t>(k - 2 * mm)] * c;
            }
            lo_line[static_cast<size_t>(m)] = acc_l;
            hi_line[static_cast<size_t>(m)] = acc_h;
        }
    };

    if (axis == 2) {
        for (int i = 0; i < d0; ++i)
            for (int j = 0; j < d1; ++j) {
                std::memcpy(line.data(), &in.v[in.flat(i, j, 0)], sizeof(double) * static_cast<size_t>(n));
                run_line();
                std::memcpy(&low.v[low.flat(i, j, 0)], lo_line.data(), sizeof(double) * static_cast<size_t>(mlen));
                std::memcpy(&high.v[high.flat(i, j, 0)], hi_line.data(), sizeof(double) * static_cast<size_t>(mlen));
            }
    } else if (axis == 1) {
        for (int i = 0; i < d0; ++i)
            for (int k = 0; k < d2; ++k) {
                for (int j = 0; j < n; ++j) line[static_cast<size_t>(j)] = in.v[in.flat(i, j, k)];
                run_line();
                for (int m = 0; m < mlen; ++m) {
                    low.v[low.flat(i, m, k)] = lo_line[static_cast<size_t>(m)];
                    high.v[high.flat(i, m, k)] = hi_line[static_cast<size_t>(m)];
                }
            }
    } else {
        for (int j = 0; j < d1; ++j)
            for (int k = 0; k < d2; ++k) {
                for (int i = 0; i < n; ++i) line[static_cast<size_t>(i)] = in.v[in.flat(i, j, k)];
                run_line();
                for (int m = 0; m < mlen; ++m) {
                    low.v[low.flat(m, j, k)] = lo_line[static_cast<size_t>(m)];
                    high.v[high.flat(m, j, k)] = hi_line[static_cast<size_t>(m)];
                }
            }
    }
    return {std::move(low), std::move(high)};
}

/// Inverse of dwt_axis: upsample-and-filter both channels and sum over the
/// covering output range.
Grid3 idwt_axis(const Grid3& low, const Grid3& high, int axis, const std::vector<double>& h,
                const std::vector<double>& g) {
    const int L = static_cast<int>(h.size());
    const int m0 = low.off[axis], mlen = low.dims[axis];
    const int k0 = 2 * m0, k1 = 2 * (m0 + mlen - 1) + L - 1;
    Grid3 out;
    out.off = low.off;
    out.dims = low.dims;
    out.off[axis] = k0;
    out.dims[axis] = k1 - k0 + 1;
    out.v.assign(out.size(), 0.0);

    const int nlen = out.dims[axis];
    std::vector<double> lo_line(static_cast<size_t>(mlen)), hi_line(static_cast<size_t>(mlen));
    std::vector<double> line(static_cast<size_t>(nlen));

    auto run_line = [&]() {
        std::fill(line.begin(), line.end(), 0.0);
        for (int m = 0; m < mlen; ++m) {
            const double a = lo_line[static_cast<size_t>(m)], b = hi_line[static_cast<size_t>(m)];
            const int base = 2 * (m0 + m) - k0;
            for (int t = 0; t < L; ++t) {
                line[static_cast<size_t>(base + t)] +=
                    h[static_cast<size_t>(t)] * a + g[static_cast<size_t>(t)] * b;
            }
        }
    };

    const int d0 = out.dims[0], d1 = out.dims[1], d2 = out.dims[2];
    if (axis == 2) {
        for (int i = 0; i < d0; ++i)
            for (int j = 0; j < d1; ++j) {
                std::memcpy(lo_line.data(), &low.v[low.flat(i, j, 0)], sizeof(double) * static_cast<size_t>(mlen));
                std::memcpy(hi_line.data(), &high.v[high.flat(i, j, 0)], sizeof(double) * static_cast<size_t>(mlen));
                run_line();
                std::memcpy(&out.v[out.flat(i, j, 0)], line.data(), sizeof(double) * static_cast<size_t>(nlen));
            }
    } else if (axis == 1) {
        for (int i = 0; i < d0; ++i)
            for (int k = 0; k < d2; ++k) {
                for (int m = 0; m < mlen; ++m) {
                    lo_line[static_cast<size_t>(m)] = low.v[low.flat(i, m, k)];
                    hi_line[static_cast<size_t>(m)] = high.v[high.flat(i, m, k)];
                }
                run_line();
                for (int t = 0; t < nlen; ++t) out.v[out.flat(i, t, k)] = line[static_cast<size_t>(t)];
            }
    } else {
        for (int j = 0; j < d1; ++j)
            for (int k = 0; k < d2; ++k) {
                for (int m = 0; m < mlen; ++m) {
                    lo_line[static_cast<size_t>(m)] = low.v[low.flat(m, j, k)];
                    hi_line[static_cast<size_t>(m)] = high.v[high.flat(m, j, k)];
                }
                run_line();
                for (int t = 0; t < nlen; ++t) out.v[out.flat(t, j, k)] = line[static_cast<size_t>(t)];
            }
    }
    return out;
}

Subband make_subband(Grid3&& g, const std::array<int, 3>& type, double cell, bool scaling) {
    Subband b;
    b.type = type;
    b.cell = cell;
    b.offset = g.off;
    b.dims = g.dims;
    b.values = std::move(g.v);
    b.is_scaling = scaling;
    return b;
}

Grid3 grid_of_subband(const Subband& b) {
    Grid3 g;
    g.off = b.offset;
    g.dims = b.dims;
    g.v = b.values;
    return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// Filters
// ---------------------------------------------------------------------------

WaveletSystem WaveletSystem::daubechies(int K) {
    if (K < 1 || K > 10)
        throw std::invalid_argument("Daubechies order (vanishing moments) must be in [1, 10]");

    using cd = std::complex<double>;
    std::vector<cd> H;

    // sqrt(2) * ((1+z)/2)^K
    {
        std::vector<double> binom(static_cast<size_t>(K) + 1, 0.0);
        binom[0] = 1.0;
        for (int i = 1; i <= K; ++i)
            for (int j = i; j >= 1; --j) binom[static_cast<size_t>(j)] += binom[static_cast<size_t>(j - 1)];
        const double scale = std::sqrt(2.0) / std::ldexp(1.0, K);
        for (int i = 0; i <= K; ++i) H.push_back(cd(binom[static_cast<size_t>(i)] * scale, 0.0));
    }

    if (K >= 2) {
        // Halfband remainder P(y) = sum_{k<K} C(K-1+k, k) y^k; roots via the
        // companion matrix.
        std::vector<double> coef(static_cast<size_t>(K), 0.0);
        coef[0] = 1.0;
        for (int k = 1; k < K; ++k)
            coef[static_cast<size_t>(k)] = coef[static_cast<size_t>(k - 1)] *
                                           static_cast<double>(K - 1 + k) / static_cast<double>(k);
        const int deg = K - 1;
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i)
            comp(i, deg - 1) = -coef[static_cast<size_t>(i)] / coef[static_cast<size_t>(deg)];
        const Eigen::VectorXcd ys = Eigen::EigenSolver<Eigen::MatrixXd>(comp).eigenvalues();

        for (int r = 0; r < deg; ++r) {
            const cd y = ys(r);
            const cd w = cd(2.0, 0.0) - 4.0 * y;
            const cd disc = std::sqrt(w * w - 4.0);
            cd z = (w + disc) / 2.0;
            if (std::abs(z) > 1.0) z = (w - disc) / 2.0;
            // multiply H by (z - z_r) / (1 - z_r)
            const cd a = -z / (1.0 - z), b = 1.0 / (1.0 - z);
            std::vector<cd> next(H.size() + 1, cd(0.0, 0.0));
            for (size_t i = 0; i < H.size(); ++i) {
                next[i] += H[i] * a;
                next[i + 1] += H[i] * b;
            }
            H = std::move(next);
        }
    }

    WaveletSystem sys;
    sys.vanishing_moments = K;
    sys.lowpass.resize(H.size());
    for (size_t i = 0; i < H.size(); ++i) sys.lowpass[i] = H[i].real();
    const int L = static_cast<int>(sys.lowpass.size());
    sys.highpass.resize(static_cast<size_t>(L));
    for (int n = 0; n < L; ++n)
        sys.highpass[static_cast<size_t>(n)] =
            ((n % 2) ? -1.0 : 1.0) * sys.lowpass[static_cast<size_t>(L - 1 - n)];
    return sys;
}

double WaveletSystem::orthonormality_defect() const {
    const int L = filter_length();
    double defect = 0.0;
    for (int m = 0; 2 * m < L; ++m) {
        double s = 0.0;
        for (int k = 0; k + 2 * m < L; ++k)
            s += lowpass[static_cast<size_t>(k)] * lowpass[static_cast<size_t>(k + 2 * m)];
        defect = std::max(defect, std::abs(s - (m == 0 ? 1.0 : 0.0)));
    }
    return defect;
}

double WaveletSystem::moment_defect(int order) const {
    double s = 0.0;
    for (int n = 0; n < filter_length(); ++n)
        s += highpass[static_cast<size_t>(n)] * std::pow(static_cast<double>(n), order);
    return std::abs(s);
}

// ---------------------------------------------------------------------------
// Sample grids
// ---------------------------------------------------------------------------

double SampleGrid::l2_norm_sq() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s * spacing * spacing * spacing;
}

SampleGrid sample_function(const SingularFunction& fn, const Vec3& origin, double side, int n) {
    SampleGrid g;
    g.origin = origin;
    g.spacing = side / n;
    g.dims = {n, n, n};
    g.values.resize(static_cast<size_t>(n) * n * n);
    size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const double x = origin.x + i * g.spacing;
        for (int j = 0; j < n; ++j) {
            const double y = origin.y + j * g.spacing;
            for (int k = 0; k < n; ++k, ++idx) {
                g.values[idx] = fn.value({x, y, origin.z + k * g.spacing});
            }
        }
    }
    return g;
}

void write_field_file(const SampleGrid& grid, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open field file for writing: " + path);
    os.write("CBF1", 4);
    for (int d : grid.dims) {
        const int64_t v = d;
        os.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
    os.write(reinterpret_cast<const char*>(&grid.spacing), sizeof(double));
    os.write(reinterpret_cast<const char*>(&grid.origin.x), sizeof(double) * 3);
    os.write(reinterpret_cast<const char*>(grid.values.data()),
             static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("failed while writing field file: " + path);
}

SampleGrid read_field_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open field file: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "CBF1", 4) != 0)
        throw std::runtime_error("not a field file (bad magic): " + path);
    SampleGrid g;
    for (int a = 0; a < 3; ++a) {
        int64_t v = 0;
        is.read(reinterpret_cast<char*>(&v), sizeof(v));
        g.dims[a] = static_cast<int>(v);
    }
    is.read(reinterpret_cast<char*>(&g.spacing), sizeof(double));
    is.read(reinterpret_cast<char*>(&g.origin.x), sizeof(double) * 3);
    g.values.resize(static_cast<size_t>(g.dims[0]) * g.dims[1] * g.dims[2]);
    is.read(reinterpret_cast<char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated field file: " + path);
    return g;
}

// ---------------------------------------------------------------------------
// Transform
// ---------------------------------------------------------------------------

double Subband::level() const { return -std::log2(cell); }

double CoeffField::total_energy() const {
    double s = 0.0;
    for (const auto& b : bands)
        for (double v : b.values) s += v * v;
    return s;
}

Box3 CoeffField::support_cube(const Subband& band, int i, int j, int k) const {
    Box3 box;
    const double ext = support_cells * band.cell;
    box.lo = {cube_origin.x + band.cell * (band.offset[0] + i),
              cube_origin.y + band.cell * (band.offset[1] + j),
              cube_origin.z + band.cell * (band.offset[2] + k)};
    box.hi = {box.lo.x + ext, box.lo.y + ext, box.lo.z + ext};
    return box;
}

CoeffField analyze(const SampleGrid& samples, const WaveletSystem& system, int levels) {
    if (levels < 1) throw std::invalid_argument("analyze requires levels >= 1");
    for (int a = 0; a < 3; ++a)
        if (samples.dims[a] < (1 << levels))
            throw std::invalid_argument("grid resolution " + std::to_string(samples.dims[a]) +
                                        " is insufficient for " + std::to_string(levels) +
                                        " levels (need >= 2^levels per axis)");

    CoeffField field;
    field.cube_origin = samples.origin;
    field.cube_side = samples.spacing * samples.dims[0];
    field.grid_n = samples.dims[0];
    field.levels = levels;
    field.support_cells = system.support_cells();

    Grid3 cur;
    cur.dims = samples.dims;
    cur.v = samples.values;
    const double scale = std::pow(samples.spacing, 1.5);
    for (double& v : cur.v) v *= scale;

    double cell = samples.spacing;
    for (int lev = 0; lev < levels; ++lev) {
        cell *= 2.0;
        auto [lx, hx] = dwt_axis(cur, 0, system.lowpass, system.highpass);
        cur = Grid3();  // release before expanding further
        std::array<Grid3, 2> xparts{std::move(lx), std::move(hx)};
        Grid3 next_approx;
        for (int bx = 0; bx < 2; ++bx) {
            auto [ly, hy] = dwt_axis(xparts[static_cast<size_t>(bx)], 1, system.lowpass, system.highpass);
            xparts[static_cast<size_t>(bx)] = Grid3();
            std::array<Grid3, 2> yparts{std::move(ly), std::move(hy)};
            for (int by = 0; by < 2; ++by) {
                auto [lz, hz] = dwt_axis(yparts[static_cast<size_t>(by)], 2, system.lowpass, system.highpass);
                yparts[static_cast<size_t>(by)] = Grid3();
                if (bx == 0 && by == 0) {
                    // lz is the next approximation
                    field.bands.push_back(make_subband(std::move(hz), {0, 0, 1}, cell, false));
                    next_approx = std::move(lz);
                } else {
                    field.bands.push_back(make_subband(std::move(lz), {bx, by, 0}, cell, false));
                    field.bands.push_back(make_subband(std::move(hz), {bx, by, 1}, cell, false));
                }
            }
        }
        cur = std::move(next_approx);
    }
    field.bands.push_back(make_subband(std::move(cur), {0, 0, 0}, cell, true));
    return field;
}

SampleGrid synthesize(const CoeffField& field, const WaveletSystem& system) {
    // Group detail bands per cell size.
    Grid3 approx;
    double cell = 0.0;
    for (const auto& b : field.bands)
        if (b.is_scaling) {
            approx = grid_of_subband(b);
            cell = b.cell;
        }
    if (approx.size() == 0) throw std::invalid_argument("coefficient field has no scaling band");

    for (int lev = field.levels - 1; lev >= 0; --lev) {
        // Collect the 7 detail bands at this cell size.
        const Subband* detail[2][2][2] = {};
        for (const auto& b : field.bands) {
            if (!b.is_scaling && std::abs(b.cell - cell) < 1e-12 * cell)
                detail[b.type[0]][b.type[1]][b.type[2]] = &b;
        }
        // All eight subbands of one level share the same index ranges; the
        // merged approximation from the previous step covers a superset
        // (zero-extension padding), so crop it to the level range first.
        std::array<int, 3> level_off = approx.off;
        std::array<int, 3> level_dims = approx.dims;
        for (int bx = 0; bx < 2; ++bx)
            for (int by = 0; by < 2; ++by)
                for (int bz = 0; bz < 2; ++bz)
                    if (detail[bx][by][bz]) {
                        level_off = detail[bx][by][bz]->offset;
                        level_dims = detail[bx][by][bz]->dims;
                    }
        if (level_off != approx.off || level_dims != approx.dims) {
            Grid3 cropped;
            cropped.off = level_off;
            cropped.dims = level_dims;
            cropped.v.assign(cropped.size(), 0.0);
            for (int i = 0; i < level_dims[0]; ++i)
                for (int j = 0; j < level_dims[1]; ++j)
                    for (int k = 0; k < level_dims[2]; ++k) {
                        const int gi = level_off[0] + i - approx.off[0];
                        const int gj = level_off[1] + j - approx.off[1];
                        const int gk = level_off[2] + k - approx.off[2];
                        if (gi < 0 || gj < 0 || gk < 0 || gi >= approx.dims[0] ||
                            gj >= approx.dims[1] || gk >= approx.dims[2])
                            continue;
                        cropped.v[cropped.flat(i, j, k)] = approx.v[approx.flat(gi, gj, gk)];
                    }
            approx = std::move(cropped);
        }
        auto band_or_zero = [&](int bx, int by, int bz) {
            if (detail[bx][by][bz]) return grid_of_subband(*detail[bx][by][bz]);
            Grid3 z;
            z.off = level_off;
            z.dims = level_dims;
            z.v.assign(z.size(), 0.0);
            return z;
        };
        // Reverse axis 2, then 1, then 0.
        Grid3 l_pair[2][2];  // [bx][by] after z-merge
        for (int bx = 0; bx < 2; ++bx)
            for (int by = 0; by < 2; ++by) {
                Grid3 lz = (bx == 0 && by == 0) ? std::move(approx) : band_or_zero(bx, by, 0);
                const Grid3 hz = band_or_zero(bx, by, 1);
                l_pair[bx][by] = idwt_axis(lz, hz, 2, system.lowpass, system.highpass);
            }
        Grid3 l_x[2];
        for (int bx = 0; bx < 2; ++bx)
            l_x[bx] = idwt_axis(l_pair[bx][0], l_pair[bx][1], 1, system.lowpass, system.highpass);
        approx = idwt_axis(l_x[0], l_x[1], 0, system.lowpass, system.highpass);
        cell *= 0.5;
    }

    SampleGrid out;
    out.origin = field.cube_origin;
    out.spacing = field.cube_side / field.grid_n;
    out.dims = {field.grid_n, field.grid_n, field.grid_n};
    out.values.assign(static_cast<size_t>(field.grid_n) * field.grid_n * field.grid_n, 0.0);
    const double scale = std::pow(out.spacing, -1.5);
    for (int i = 0; i < field.grid_n; ++i)
        for (int j = 0; j < field.grid_n; ++j)
            for (int k = 0; k < field.grid_n; ++k) {
                const int gi = i - approx.off[0], gj = j - approx.off[1], gk = k - approx.off[2];
                if (gi < 0 || gj < 0 || gk < 0 || gi >= approx.dims[0] || gj >= approx.dims[1] ||
                    gk >= approx.dims[2])
                    continue;
                out.at(i, j, k) = approx.v[approx.flat(gi, gj, gk)] * scale;
            }
    return out;
}

CoeffField unit_coefficient_field(const WaveletSystem& system, const Vec3& cube_origin,
                                  double cube_side, int grid_n, int levels, int band_index,
                                  const std::array<int, 3>& index) {
    SampleGrid zeros;
    zeros.origin = cube_origin;
    zeros.spacing = cube_side / grid_n;
    zeros.dims = {grid_n, grid_n, grid_n};
    zeros.values.assign(static_cast<size_t>(grid_n) * grid_n * grid_n, 0.0);
    CoeffField field = analyze(zeros, system, levels);
    auto& band = field.bands.at(static_cast<size_t>(band_index));
    band.values.at((static_cast<size_t>(index[0]) * band.dims[1] + index[1]) * band.dims[2] +
                   index[2]) = 1.0;
    return field;
}

}  // namespace conebesov
