#pragma once

#include <array>
#include <string>
#include <vector>

#include "conebesov/singular.hpp"
#include "conebesov/vec3.hpp"

namespace conebesov {

/// Scalar field sampled on a regular dyadic grid over a cube. Values are
/// cell-indexed: value (i,j,k) is the sample at origin + (i,j,k)*spacing,
/// stored row-major with the x index slowest.
struct SampleGrid {
    Vec3 origin;
    double spacing = 0.0;
    std::array<int, 3> dims{0, 0, 0};
    std::vector<double> values;

    double& at(int i, int j, int k) {
        return values[(static_cast<size_t>(i) * dims[1] + j) * dims[2] + k];
    }
    double at(int i, int j, int k) const {
        return values[(static_cast<size_t>(i) * dims[1] + j) * dims[2] + k];
    }

    /// Discrete L2 norm squared: sum of squares times the cell volume.
    double l2_norm_sq() const;
};

/// Samples a model function on an n^3 grid over the cube [origin, origin+side)^3
/// (samples at cell corners origin + index*side/n).
SampleGrid sample_function(const SingularFunction& fn, const Vec3& origin, double side, int n);

/// Flat binary field file: magic "CBF1", int64 dims[3], float64 spacing,
/// float64 origin[3], then dims[0]*dims[1]*dims[2] float64 values row-major
/// (x slowest).
void write_field_file(const SampleGrid& grid, const std::string& path);
SampleGrid read_field_file(const std::string& path);

}  // namespace conebesov
