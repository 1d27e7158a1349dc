#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conebesov/advisor.hpp"
#include "conebesov/geometry.hpp"
#include "conebesov/pencil.hpp"
#include "conebesov/singular.hpp"
#include "conebesov/weighted_norms.hpp"

namespace conebesov {

/// Wavelet/experiment knobs of the config file.
struct WaveletConfig {
    int vanishing_moments = 4;
    int levels = 6;
    int grid = 0;  // 0: derived as 2^levels
    Vec3 cube_origin{-1.0, -1.0, -1.0};
    double cube_side = 2.0;
};

struct ExperimentKnobs {
    unsigned seed = 1234;
    double slope_tolerance = 0.15;
    int pencil_m_max = 5;
    int vertex_count = 6;
    int vertex_refinements = 5;
    std::vector<int> cardinality_levels = {4, 5, 6, 7, 8};
    std::vector<long> nterm_counts;  // empty: dyadic defaults
};

/// Parsed and validated experiment configuration. Geometry is given as edge
/// directions plus oriented face adjacency; angles are always derived.
struct ExperimentConfig {
    TruncatedCone domain;
    std::optional<BCAssignment> bc;
    std::optional<WeightParams> weights;
    std::optional<ProblemSpec> problem;
    std::optional<SingularFunction> function;
    WaveletConfig wavelet;
    ExperimentKnobs experiment;
    std::string config_text;  // raw bytes, hashed into the run manifest

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
};

}  // namespace conebesov
