#include "conebesov/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "conebesov/field.hpp"
#include "conebesov/wavelet.hpp"

namespace conebesov {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

uint64_t fnv1a(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string bc_name(EdgeBc bc) {
    switch (bc) {
        case EdgeBc::DD: return "DD";
        case EdgeBc::NN: return "NN";
        case EdgeBc::Mixed: return "DN";
    }
    return "?";
}

PencilSpectrum compute_spectrum(const ExperimentConfig& cfg) {
    if (!cfg.bc) throw ValidationError("this subcommand requires a bc block");
    return compute_pencil_spectrum(cfg.domain.cone, *cfg.bc, cfg.experiment.pencil_m_max,
                                   cfg.experiment.vertex_count, cfg.experiment.vertex_refinements);
}

void write_pencil_csvs(const PencilSpectrum& sp, const std::string& out_dir,
                       std::vector<std::string>* artifacts) {
    {
        std::ostringstream os;
        os << "edge,theta,bc,delta_plus,delta_minus,m,lambda\n";
        for (const auto& e : sp.edges)
            for (size_t m = 0; m < e.eigenvalues.size(); ++m)
                os << e.edge << "," << format_double(e.theta) << "," << bc_name(e.bc) << ","
                   << format_double(e.delta_plus) << "," << format_double(e.delta_minus) << ","
                   << (m + 1) << "," << format_double(e.eigenvalues[m]) << "\n";
        write_text(out_dir + "/pencil_edges.csv", os.str());
        if (artifacts) artifacts->push_back("pencil_edges.csv");
    }
    {
        std::ostringstream os;
        os << "l,lambda_tilde,lambda_plus,lambda_minus,error_estimate\n";
        for (size_t i = 0; i < sp.vertex.size(); ++i) {
            const auto& v = sp.vertex[i];
            os << i << "," << format_double(v.lambda_tilde) << "," << format_double(v.lambda_plus)
               << "," << format_double(v.lambda_minus) << "," << format_double(v.error_estimate)
               << "\n";
        }
        write_text(out_dir + "/pencil_vertex.csv", os.str());
        if (artifacts) artifacts->push_back("pencil_vertex.csv");
    }
}

json trail_to_json(const std::vector<ConditionRecord>& trail) {
    json arr = json::array();
    for (const auto& rec : trail)
        arr.push_back({{"id", rec.id},
                       {"pass", rec.pass},
                       {"lhs", rec.lhs},
                       {"rhs", rec.rhs},
                       {"detail", rec.detail}});
    return arr;
}

json report_to_json(const RegularityReport& report) {
    json intervals = json::array();
    for (const auto& iv : report.besov_admissible) intervals.push_back({iv.lo, iv.hi});
    return json{{"sobolev_bound", report.sobolev_bound},
                {"sobolev_bound_open", report.sobolev_bound_open},
                {"besov_intervals", intervals},
                {"r_max", report.r_max},
                {"tau", report.tau},
                {"adaptive_rate", report.adaptive_rate},
                {"uniform_rate", report.uniform_rate},
                {"gain_factor", report.gain_factor},
                {"negative_delta_route", report.negative_delta_route},
                {"remark_proviso", report.remark_proviso},
                {"trail", trail_to_json(report.trail)}};
}

std::string report_to_text(const RegularityReport& report) {
    std::ostringstream os;
    os << "Regularity report\n";
    os << "  fractional Sobolev bound alpha_bar = " << format_double(report.sobolev_bound)
       << (report.sobolev_bound_open ? " (open bound)" : "") << "\n";
    os << "  admissible Besov range for r:";
    if (report.besov_admissible.empty()) os << " empty";
    for (const auto& iv : report.besov_admissible)
        os << " (" << format_double(iv.lo) << ", " << format_double(iv.hi) << ")";
    os << "\n";
    if (report.remark_proviso)
        os << "  note: delta has negative components; the range is a union of sufficient\n"
              "  regions and only r < 3*alpha_bar replaces the positive-delta bound\n";
    os << "  tau(r_max) = " << format_double(report.tau) << "\n";
    os << "  adaptive rate  r_max/3    = " << format_double(report.adaptive_rate) << "\n";
    os << "  uniform  rate  alpha_bar/3 = " << format_double(report.uniform_rate) << "\n";
    os << "  gain factor = " << format_double(report.gain_factor) << "\n";
    os << "conditions:\n";
    for (const auto& rec : report.trail)
        os << "  [" << (rec.pass ? "pass" : "FAIL") << "] " << rec.id << ": " << rec.detail
           << "\n";
    return os.str();
}

struct Pipeline {
    CoeffField field;
    std::vector<LevelGroup> groups;
};

Pipeline run_pipeline(const ExperimentConfig& cfg, const std::string& out_dir,
                      std::vector<std::string>* artifacts, bool write_field) {
    if (!cfg.function) throw ValidationError("this subcommand requires a function block");
    const WaveletSystem system = WaveletSystem::daubechies(cfg.wavelet.vanishing_moments);
    const SampleGrid samples = sample_function(*cfg.function, cfg.wavelet.cube_origin,
                                               cfg.wavelet.cube_side, cfg.wavelet.grid);
    if (write_field) {
        write_field_file(samples, out_dir + "/field.cbf");
        if (artifacts) artifacts->push_back("field.cbf");
    }
    Pipeline p{analyze(samples, system, cfg.wavelet.levels), {}};
    p.groups = restrict_to_cone(p.field, cfg.domain);
    return p;
}

std::vector<long> default_nterm_counts(long total) {
    std::vector<long> out;
    for (long n = 16; 2 * n <= total; n *= 2) out.push_back(n);
    return out;
}

/// Window rule for slope fits: drop the two coarsest and one finest points.
std::pair<size_t, size_t> fit_window(size_t count) {
    if (count < 6) throw std::runtime_error("insufficient points for a stable fit (<4 usable)");
    return {2, count - 2};
}

long total_count(const std::vector<LevelGroup>& groups) {
    long c = 0;
    for (const auto& g : groups) c += static_cast<long>(g.magnitudes.size());
    return c;
}

}  // namespace

VerificationResult run_verify_embedding(const ExperimentConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    if (!cfg.problem) throw ValidationError("verify requires a problem block");

    VerificationResult result;
    result.slope_tolerance = cfg.experiment.slope_tolerance;

    const PencilSpectrum spectrum = compute_spectrum(cfg);
    const RegularityReport report = advise(*cfg.problem, cfg.domain.cone, *cfg.bc, spectrum);
    result.predicted_r_max = report.r_max;
    result.predicted_adaptive_rate = report.adaptive_rate;
    result.predicted_uniform_rate = report.uniform_rate;

    const Pipeline p = run_pipeline(cfg, out_dir, &result.artifacts, /*write_field=*/false);

    const LevelTruncationCurve uniform = level_truncation_curve(p.groups);
    {
        std::ostringstream os;
        os << "level,terms,error\n";
        for (size_t i = 0; i < uniform.terms.size(); ++i)
            os << format_double(uniform.level[i]) << "," << uniform.terms[i] << ","
               << format_double(uniform.error[i]) << "\n";
        write_text(out_dir + "/uniform_curve.csv", os.str());
        result.artifacts.push_back("uniform_curve.csv");
    }
    // The finest level has zero tail error; drop it before fitting.
    std::vector<long> un(uniform.terms.begin(), uniform.terms.end() - 1);
    std::vector<double> ue(uniform.error.begin(), uniform.error.end() - 1);
    {
        const auto [first, last] = fit_window(un.size());
        result.measured_uniform_slope = fit_rate(un, ue, first, last);
    }

    std::vector<long> counts = cfg.experiment.nterm_counts;
    if (counts.empty()) counts = default_nterm_counts(total_count(p.groups));
    const NTermCurve curve = nterm_curve(p.groups, counts, 2.0);
    {
        std::ostringstream os;
        os << "N,sigma\n";
        for (size_t i = 0; i < curve.terms.size(); ++i)
            os << curve.terms[i] << "," << format_double(curve.sigma[i]) << "\n";
        write_text(out_dir + "/nterm_curve.csv", os.str());
        result.artifacts.push_back("nterm_curve.csv");
    }
    {
        const auto [first, last] = fit_window(curve.terms.size());
        result.measured_adaptive_slope = fit_rate(curve.terms, curve.sigma, first, last);
    }

    const double measured_adaptive = -result.measured_adaptive_slope;
    const double measured_uniform = -result.measured_uniform_slope;
    result.pass = measured_adaptive >= result.predicted_adaptive_rate - result.slope_tolerance &&
                  measured_adaptive >= measured_uniform - result.slope_tolerance;

    json j{{"predicted_r_max", result.predicted_r_max},
           {"predicted_adaptive_rate", result.predicted_adaptive_rate},
           {"predicted_uniform_rate", result.predicted_uniform_rate},
           {"measured_adaptive_slope", result.measured_adaptive_slope},
           {"measured_uniform_slope", result.measured_uniform_slope},
           {"slope_tolerance", result.slope_tolerance},
           {"pass", result.pass},
           {"advisor", report_to_json(report)}};
    write_text(out_dir + "/verify.json", j.dump(2) + "\n");
    result.artifacts.push_back("verify.json");
    return result;
}

CardinalityVerdict run_cardinality_study(const ExperimentConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const auto& levels = cfg.experiment.cardinality_levels;
    if (levels.empty() || *std::min_element(levels.begin(), levels.end()) < 1)
        throw ValidationError("cardinality study requires levels >= 1");

    CardinalityVerdict verdict;
    std::ostringstream os_k, os_km;
    os_k << "j,k,count,count_per_k2\n";
    os_km << "j,k,m,count,count_per_m\n";
    for (int j : levels) {
        const CardinalityTable table = bin_cardinalities(cfg.domain, j);
        const int k_lo = 2, k_hi = 1 << (j - 1);
        double stat_k = 0.0, stat_km = 0.0;
        for (const auto& [k, count] : table.per_k) {
            const double norm_k = k >= 1 ? count / (static_cast<double>(k) * k) : 0.0;
            os_k << j << "," << k << "," << count << "," << format_double(norm_k) << "\n";
            if (k >= k_lo && k <= k_hi) stat_k = std::max(stat_k, norm_k);
        }
        for (const auto& [km, count] : table.per_km) {
            const auto [k, m] = km;
            os_km << j << "," << k << "," << m << "," << count << ","
                  << format_double(m >= 1 ? count / static_cast<double>(m) : 0.0) << "\n";
            if (k >= 4 && k <= k_hi && m >= 1 && m <= k)
                stat_km = std::max(stat_km, count / static_cast<double>(m));
        }
        verdict.stats.emplace_back(j, stat_k, stat_km);
    }
    write_text(out_dir + "/cardinality_k.csv", os_k.str());
    write_text(out_dir + "/cardinality_km.csv", os_km.str());

    auto ratio_bounded = [&](auto pick) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& s : verdict.stats) {
            const double v = pick(s);
            if (v <= 0.0) return false;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi / lo <= 4.0;
    };
    verdict.bounded = ratio_bounded([](const auto& s) { return std::get<1>(s); }) &&
                      ratio_bounded([](const auto& s) { return std::get<2>(s); });

    json j{{"bounded", verdict.bounded}, {"levels", json::array()}};
    for (const auto& [lev, sk, skm] : verdict.stats)
        j["levels"].push_back({{"j", lev}, {"sup_count_per_k2", sk}, {"sup_count_per_m", skm}});
    write_text(out_dir + "/cardinality_verdict.json", j.dump(2) + "\n");
    return verdict;
}

RunStatus run_subcommand(const ExperimentConfig& cfg, const std::string& subcommand,
                         const std::string& out_dir, std::string* message) {
    auto say = [&](const std::string& m) {
        if (message) *message = m;
    };
    try {
        ensure_dir(out_dir);
        if (subcommand == "pencil") {
            const PencilSpectrum sp = compute_spectrum(cfg);
            write_pencil_csvs(sp, out_dir, nullptr);
            say("pencil tables written");
            return RunStatus::Pass;
        }
        if (subcommand == "advise") {
            if (!cfg.problem) throw ValidationError("advise requires a problem block");
            const PencilSpectrum sp = compute_spectrum(cfg);
            try {
                const RegularityReport report = advise(*cfg.problem, cfg.domain.cone, *cfg.bc, sp);
                write_text(out_dir + "/advisor_report.json", report_to_json(report).dump(2) + "\n");
                write_text(out_dir + "/advisor_report.txt", report_to_text(report));
                say("advisor report written (r_max = " + format_double(report.r_max) + ")");
                return RunStatus::Pass;
            } catch (const AdvisorFailure& f) {
                json j{{"failed_condition",
                        {{"id", f.condition.id},
                         {"pass", false},
                         {"lhs", f.condition.lhs},
                         {"rhs", f.condition.rhs},
                         {"detail", f.condition.detail}}},
                       {"trail", trail_to_json(f.trail)}};
                write_text(out_dir + "/advisor_failure.json", j.dump(2) + "\n");
                say("advisor condition failed: " + f.condition.id);
                return RunStatus::VerdictFail;
            }
        }
        if (subcommand == "sample") {
            if (!cfg.function) throw ValidationError("sample requires a function block");
            const SampleGrid samples = sample_function(*cfg.function, cfg.wavelet.cube_origin,
                                                       cfg.wavelet.cube_side, cfg.wavelet.grid);
            write_field_file(samples, out_dir + "/field.cbf");
            say("field written");
            return RunStatus::Pass;
        }
        if (subcommand == "analyze") {
            const Pipeline p = run_pipeline(cfg, out_dir, nullptr, /*write_field=*/false);
            {
                std::ostringstream os;
                os << "level,type,count,energy\n";
                for (const auto& band : p.field.bands) {
                    double e = 0.0;
                    for (double v : band.values) e += v * v;
                    os << format_double(band.level()) << ","
                       << (band.is_scaling ? std::string("scaling")
                                           : std::to_string(band.type[0]) +
                                                 std::to_string(band.type[1]) +
                                                 std::to_string(band.type[2]))
                       << "," << band.size() << "," << format_double(e) << "\n";
                }
                write_text(out_dir + "/coeff_summary.csv", os.str());
            }
            {
                const IndexBins bins = classify(p.field, cfg.domain);
                std::ostringstream os;
                os << "j,k,m,count,energy\n";
                for (const auto& [key, bin] : bins.bins)
                    os << std::get<0>(key) << "," << std::get<1>(key) << "," << std::get<2>(key)
                       << "," << bin.count << "," << format_double(bin.energy) << "\n";
                write_text(out_dir + "/bins.csv", os.str());
            }
            say("coefficient summary and bins written");
            return RunStatus::Pass;
        }
        if (subcommand == "nterm") {
            const Pipeline p = run_pipeline(cfg, out_dir, nullptr, /*write_field=*/false);
            std::vector<long> counts = cfg.experiment.nterm_counts;
            if (counts.empty()) counts = default_nterm_counts(total_count(p.groups));
            const NTermCurve curve = nterm_curve(p.groups, counts, 2.0);
            std::ostringstream os;
            os << "N,sigma\n";
            for (size_t i = 0; i < curve.terms.size(); ++i)
                os << curve.terms[i] << "," << format_double(curve.sigma[i]) << "\n";
            write_text(out_dir + "/nterm_curve.csv", os.str());
            const auto [first, last] = fit_window(curve.terms.size());
            const double slope = fit_rate(curve.terms, curve.sigma, first, last);
            json j{{"slope", slope},
                   {"window_first", first},
                   {"window_last", last},
                   {"convention",
                    curve.convention == NTermCurve::Convention::L2Parseval ? "l2_parseval"
                                                                           : "coefficient_proxy"}};
            write_text(out_dir + "/nterm_report.json", j.dump(2) + "\n");
            say("n-term slope " + format_double(slope));
            return RunStatus::Pass;
        }
        if (subcommand == "cardinality") {
            const CardinalityVerdict verdict = run_cardinality_study(cfg, out_dir);
            say(verdict.bounded ? "cardinality bounds verdict: bounded"
                                : "cardinality bounds verdict: NOT bounded");
            return verdict.bounded ? RunStatus::Pass : RunStatus::VerdictFail;
        }
        if (subcommand == "verify") {
            const VerificationResult vr = run_verify_embedding(cfg, out_dir);
            say(vr.pass ? "embedding verification passed" : "embedding verification FAILED");
            return vr.pass ? RunStatus::Pass : RunStatus::VerdictFail;
        }
        if (subcommand == "report") {
            std::vector<std::string> artifacts;
            const PencilSpectrum sp = compute_spectrum(cfg);
            write_pencil_csvs(sp, out_dir, &artifacts);
            RunStatus status = RunStatus::Pass;
            if (cfg.problem) {
                try {
                    const RegularityReport report =
                        advise(*cfg.problem, cfg.domain.cone, *cfg.bc, sp);
                    write_text(out_dir + "/advisor_report.json",
                               report_to_json(report).dump(2) + "\n");
                    write_text(out_dir + "/advisor_report.txt", report_to_text(report));
                    artifacts.push_back("advisor_report.json");
                    artifacts.push_back("advisor_report.txt");
                } catch (const AdvisorFailure& f) {
                    json j{{"failed_condition",
                            {{"id", f.condition.id},
                             {"pass", false},
                             {"lhs", f.condition.lhs},
                             {"rhs", f.condition.rhs},
                             {"detail", f.condition.detail}}},
                           {"trail", trail_to_json(f.trail)}};
                    write_text(out_dir + "/advisor_failure.json", j.dump(2) + "\n");
                    artifacts.push_back("advisor_failure.json");
                    status = RunStatus::VerdictFail;
                }
            }
            if (cfg.function && status == RunStatus::Pass) {
                const VerificationResult vr = run_verify_embedding(cfg, out_dir);
                for (const auto& a : vr.artifacts) artifacts.push_back(a);
                if (!vr.pass) status = RunStatus::VerdictFail;
            }
            json manifest{{"version", kVersion},
                          {"config_hash_fnv1a64", fnv1a(cfg.config_text)},
                          {"seed", cfg.experiment.seed},
                          {"artifacts", artifacts}};
            write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
            say("report written (" + std::to_string(artifacts.size()) + " artifacts)");
            return status;
        }
        say("unknown subcommand: " + subcommand);
        return RunStatus::Error;
    } catch (const std::exception& e) {
        say(e.what());
        return RunStatus::Error;
    }
}

}  // namespace conebesov
