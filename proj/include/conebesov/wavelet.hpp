#pragma once

#include <array>
#include <vector>

#include "conebesov/field.hpp"
#include "conebesov/vec3.hpp"

namespace conebesov {

/// Orthonormal Daubechies filter pair with K vanishing moments (filter
/// length 2K, scaling/wavelet support [0, 2K-1]). Filters are computed at
/// construction by spectral factorization of the halfband polynomial, so no
/// tabulated constants are involved.
struct WaveletSystem {
    int vanishing_moments = 4;
    std::vector<double> lowpass;
    std::vector<double> highpass;

    static WaveletSystem daubechies(int vanishing_moments);

    int filter_length() const { return static_cast<int>(lowpass.size()); }
    /// Support of scaling function and wavelet in units of the coefficient
    /// grid: [0, 2K-1].
    int support_cells() const { return filter_length() - 1; }

    /// max_m |sum_k h_k h_{k+2m} - delta_{m0}|.
    double orthonormality_defect() const;
    /// |sum_n g_n n^order| (discrete vanishing moment of the highpass).
    double moment_defect(int order) const;
};

/// One subband of coefficients: tensor type e in {0,1}^3 (1 = wavelet along
/// that axis; (0,0,0) only for the final scaling band) at a dyadic scale.
struct Subband {
    std::array<int, 3> type{0, 0, 0};
    double cell = 1.0;  // coefficient lattice spacing (physical)
    std::array<int, 3> offset{0, 0, 0};
    std::array<int, 3> dims{0, 0, 0};
    std::vector<double> values;
    bool is_scaling = false;

    size_t size() const {
        return static_cast<size_t>(dims[0]) * static_cast<size_t>(dims[1]) *
               static_cast<size_t>(dims[2]);
    }
    /// Dyadic level j with cell = 2^-j (real-valued for non-dyadic cells).
    double level() const;
};

/// Full tensor-product wavelet decomposition of a sampled field: detail
/// subbands per level (finest first) plus the final scaling band. Coefficient
/// normalization is L2: sum of squares equals the discrete L2 norm squared of
/// the analyzed sample field.
struct CoeffField {
    Vec3 cube_origin;
    double cube_side = 0.0;
    int grid_n = 0;
    int levels = 0;
    int support_cells = 0;  // 2K-1
    std::vector<Subband> bands;

    double total_energy() const;

    /// Exact support cube Q(I) of the basis function behind coefficient
    /// (i,j,k) of a subband: sidelength (2K-1) * cell.
    Box3 support_cube(const Subband& band, int i, int j, int k) const;
};

/// Forward transform with zero extension beyond the sample cube; requires
/// grid resolution >= 2^levels per axis.
CoeffField analyze(const SampleGrid& samples, const WaveletSystem& system, int levels);

/// Inverse transform onto the original sample lattice (exact reconstruction
/// for orthonormal filters and zero extension).
SampleGrid synthesize(const CoeffField& field, const WaveletSystem& system);

/// A coefficient field holding a single unit coefficient; handy for
/// synthesizing individual wavelets and for closed-form norm checks.
CoeffField unit_coefficient_field(const WaveletSystem& system, const Vec3& cube_origin,
                                  double cube_side, int grid_n, int levels, int band_index,
                                  const std::array<int, 3>& index);

}  // namespace conebesov
