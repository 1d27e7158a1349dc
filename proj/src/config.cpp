#include "conebesov/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace conebesov {

namespace {

using nlohmann::json;

Vec3 parse_vec3(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3)
        throw ValidationError(what + " must be an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

TruncatedCone parse_geometry(const json& g) {
    if (!g.contains("edges")) throw ValidationError("geometry block requires \"edges\"");
    if (!g.contains("faces")) throw ValidationError("geometry block requires \"faces\"");
    std::vector<Vec3> edges;
    for (const auto& e : g.at("edges")) edges.push_back(parse_vec3(e, "edge direction"));
    std::vector<Face> faces;
    for (const auto& f : g.at("faces")) {
        Face face;
        const auto& pair = f.at("edges");
        if (!pair.is_array() || pair.size() != 2)
            throw ValidationError("face \"edges\" must be a pair of edge indices");
        face.edge_from = pair[0].get<int>();
        face.edge_to = pair[1].get<int>();
        face.outward_normal = parse_vec3(f.at("normal"), "face normal");
        faces.push_back(face);
    }
    const bool convex = g.value("convex", false);
    const double radius = g.value("truncation_radius", 1.0);
    return TruncatedCone(PolyhedralCone::create(std::move(edges), std::move(faces), convex),
                         radius);
}

BCAssignment parse_bc(const json& b, int n) {
    const auto& arr = b.at("faces");
    if (static_cast<int>(arr.size()) != n)
        throw ValidationError("bc block must assign a condition to each of the " +
                              std::to_string(n) + " faces");
    std::vector<Bc> bc;
    for (const auto& v : arr) {
        const std::string s = v.get<std::string>();
        if (s == "D" || s == "dirichlet")
            bc.push_back(Bc::Dirichlet);
        else if (s == "N" || s == "neumann")
            bc.push_back(Bc::Neumann);
        else
            throw ValidationError("face condition must be \"D\" or \"N\", got \"" + s + "\"");
    }
    return BCAssignment(std::move(bc));
}

WeightParams parse_weights(const json& w, int n) {
    WeightParams params;
    params.l = w.at("l").get<int>();
    params.p = w.value("p", 2.0);
    params.beta = w.at("beta").get<double>();
    for (const auto& d : w.at("delta")) params.delta.push_back(d.get<double>());
    if (w.contains("variant")) {
        const auto& v = w.at("variant");
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "V")
                params.variant = SpaceVariant::V;
            else if (s == "W")
                params.variant = SpaceVariant::W;
            else
                throw ValidationError("weight variant must be \"V\", \"W\" or {\"Wcal\": [...]}");
        } else if (v.is_object() && v.contains("Wcal")) {
            params.variant = SpaceVariant::Wcal;
            for (const auto& e : v.at("Wcal")) params.wcal_edges.push_back(e.get<int>());
        } else {
            throw ValidationError("weight variant must be \"V\", \"W\" or {\"Wcal\": [...]}");
        }
    }
    params.validate(n);
    return params;
}

SingularFunction parse_function(const json& f) {
    Cutoff cutoff;
    if (f.contains("cutoff")) {
        const auto& c = f.at("cutoff");
        if (!c.is_array() || c.size() != 2)
            throw ValidationError("function cutoff must be [r1, r2]");
        cutoff.r1 = c[0].get<double>();
        cutoff.r2 = c[1].get<double>();
        if (!(cutoff.r1 > 0.0 && cutoff.r2 > cutoff.r1))
            throw ValidationError("function cutoff must satisfy 0 < r1 < r2");
    }
    const std::string kind = f.at("kind").get<std::string>();
    if (kind == "edge") {
        const double theta = f.at("theta").get<double>();
        const int m = f.value("m", 1);
        const auto& bc = f.at("bc");
        if (!bc.is_array() || bc.size() != 2)
            throw ValidationError("edge function bc must be a pair like [\"D\",\"D\"]");
        const std::string a = bc[0].get<std::string>(), b = bc[1].get<std::string>();
        EdgeBc ebc;
        if (a == "D" && b == "D")
            ebc = EdgeBc::DD;
        else if (a == "N" && b == "N")
            ebc = EdgeBc::NN;
        else
            ebc = EdgeBc::Mixed;
        const bool d_at_zero = f.value("dirichlet_at_zero", a == "D");
        return SingularFunction::edge(theta, ebc, m, cutoff, d_at_zero);
    }
    if (kind == "vertex") {
        const std::string profile = f.at("profile").get<std::string>();
        if (profile == "octant_analytic")
            return SingularFunction::vertex_analytic(SingularFunction::VertexProfile::OctantAnalytic,
                                                     cutoff);
        if (profile == "hemisphere_analytic")
            return SingularFunction::vertex_analytic(
                SingularFunction::VertexProfile::HemisphereAnalytic, cutoff);
        if (profile == "neumann_constant")
            return SingularFunction::vertex_analytic(
                SingularFunction::VertexProfile::NeumannConstant, cutoff);
        throw ValidationError("vertex function profile \"" + profile + "\" is not recognized");
    }
    throw ValidationError("function kind must be \"edge\" or \"vertex\"");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return from_json_text(buf.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.contains("geometry")) throw ValidationError("config requires a geometry block");

    ExperimentConfig cfg{parse_geometry(root.at("geometry")), {}, {}, {}, {}, {}, {}, text};
    const int n = cfg.domain.cone.edge_count();

    if (root.contains("bc")) cfg.bc = parse_bc(root.at("bc"), n);
    if (root.contains("weights")) cfg.weights = parse_weights(root.at("weights"), n);

    if (root.contains("problem")) {
        if (!cfg.bc) throw ValidationError("problem block requires a bc block");
        if (!cfg.weights) throw ValidationError("problem block requires a weights block");
        const auto& p = root.at("problem");
        ProblemSpec spec;
        spec.variant = cfg.bc->is_pure_dirichlet() ? ProblemVariant::Dirichlet
                       : cfg.bc->is_pure_neumann() ? ProblemVariant::Neumann
                                                   : ProblemVariant::Mixed;
        spec.l = cfg.weights->l;
        spec.beta = cfg.weights->beta;
        spec.delta = cfg.weights->delta;
        spec.homogeneous = p.value("homogeneous", true);
        if (p.contains("s")) spec.trace_s = p.at("s").get<double>();
        spec.neumann_mean_zero = p.value("mean_zero", false);
        spec.rhs_in_l2 = p.value("rhs_in_l2", true);
        if (p.contains("constants")) {
            const auto& c = p.at("constants");
            spec.alpha0_dirichlet = c.value("alpha0_dirichlet", spec.alpha0_dirichlet);
            spec.alpha0_neumann = c.value("alpha0_neumann", spec.alpha0_neumann);
            spec.alpha0_mixed = c.value("alpha0_mixed", spec.alpha0_mixed);
            spec.epsilon_mixed = c.value("epsilon_mixed", spec.epsilon_mixed);
        }
        spec.strip_tolerance = p.value("strip_tolerance", spec.strip_tolerance);
        if (!spec.homogeneous && !spec.trace_s)
            throw ValidationError("inhomogeneous problem requires the trace label \"s\"");
        cfg.problem = spec;
    }

    if (root.contains("function")) cfg.function = parse_function(root.at("function"));

    if (root.contains("wavelet")) {
        const auto& w = root.at("wavelet");
        cfg.wavelet.vanishing_moments = w.value("vanishing_moments", 4);
        cfg.wavelet.levels = w.value("levels", 6);
        cfg.wavelet.grid = w.value("grid", 0);
        if (w.contains("cube")) {
            const auto& c = w.at("cube");
            cfg.wavelet.cube_origin = parse_vec3(c.at("origin"), "wavelet cube origin");
            cfg.wavelet.cube_side = c.at("side").get<double>();
        }
    }
    if (cfg.wavelet.grid == 0) cfg.wavelet.grid = 1 << cfg.wavelet.levels;
    if (cfg.wavelet.levels < 1) throw ValidationError("wavelet levels must be >= 1");
    if (cfg.wavelet.grid < (1 << cfg.wavelet.levels))
        throw ValidationError("wavelet grid " + std::to_string(cfg.wavelet.grid) +
                              " is insufficient for " + std::to_string(cfg.wavelet.levels) +
                              " levels (need >= 2^levels)");

    if (root.contains("experiment")) {
        const auto& e = root.at("experiment");
        cfg.experiment.seed = e.value("seed", 1234u);
        cfg.experiment.slope_tolerance = e.value("slope_tolerance", 0.15);
        cfg.experiment.pencil_m_max = e.value("pencil_m_max", 5);
        cfg.experiment.vertex_count = e.value("vertex_count", 6);
        cfg.experiment.vertex_refinements = e.value("vertex_refinements", 5);
        if (e.contains("cardinality_levels")) {
            cfg.experiment.cardinality_levels.clear();
            for (const auto& v : e.at("cardinality_levels"))
                cfg.experiment.cardinality_levels.push_back(v.get<int>());
        }
        if (e.contains("nterm_counts")) {
            for (const auto& v : e.at("nterm_counts"))
                cfg.experiment.nterm_counts.push_back(v.get<long>());
        }
    }
    return cfg;
}

}  // namespace conebesov
