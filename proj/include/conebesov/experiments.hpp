#pragma once

#include <string>
#include <vector>

#include "conebesov/advisor.hpp"
#include "conebesov/besov.hpp"
#include "conebesov/config.hpp"

namespace conebesov {

enum class RunStatus { Pass = 0, Error = 1, VerdictFail = 2 };

struct VerificationResult {
    double predicted_r_max = 0.0;
    double predicted_adaptive_rate = 0.0;
    double predicted_uniform_rate = 0.0;
    double measured_adaptive_slope = 0.0;   // log-log slope (negative)
    double measured_uniform_slope = 0.0;
    double slope_tolerance = 0.15;
    bool pass = false;
    std::vector<std::string> artifacts;
};

struct CardinalityVerdict {
    bool bounded = false;
    // per level j: sup_k |bin(j,k)|/k^2 and sup_{k,m} |bin(j,k,m)|/m
    std::vector<std::tuple<int, double, double>> stats;
};

/// Chained pipeline sample -> analyze -> restrict -> curves -> fits, compared
/// against the advisor's prediction.
VerificationResult run_verify_embedding(const ExperimentConfig& cfg, const std::string& out_dir);

/// Exhaustive dyadic-cube cardinality study over the configured levels.
CardinalityVerdict run_cardinality_study(const ExperimentConfig& cfg, const std::string& out_dir);

/// Dispatches a CLI subcommand: pencil | advise | sample | analyze | nterm |
/// cardinality | verify | report. Writes all artifacts under out_dir;
/// `message` receives a one-line summary or error text.
RunStatus run_subcommand(const ExperimentConfig& cfg, const std::string& subcommand,
                         const std::string& out_dir, std::string* message);

}  // namespace conebesov
