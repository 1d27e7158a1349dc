#include "conebesov/conebesov_c.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "conebesov/advisor.hpp"
#include "conebesov/config.hpp"
#include "conebesov/experiments.hpp"

struct cb_session {
    std::optional<conebesov::ExperimentConfig> config;
    std::string error;
};

namespace {

cb_session* open_with(const char* arg, bool is_path) {
    auto* s = new (std::nothrow) cb_session;
    if (!s) return nullptr;
    if (!arg) {
        s->error = "null config argument";
        return s;
    }
    try {
        s->config = is_path ? conebesov::ExperimentConfig::from_file(arg)
                            : conebesov::ExperimentConfig::from_json_text(arg);
    } catch (const std::exception& e) {
        s->error = e.what();
    }
    return s;
}

std::optional<conebesov::EdgeBc> parse_bc_pair(const char* bc) {
    if (!bc) return std::nullopt;
    if (std::strcmp(bc, "DD") == 0) return conebesov::EdgeBc::DD;
    if (std::strcmp(bc, "NN") == 0) return conebesov::EdgeBc::NN;
    if (std::strcmp(bc, "DN") == 0 || std::strcmp(bc, "ND") == 0) return conebesov::EdgeBc::Mixed;
    return std::nullopt;
}

}  // namespace

extern "C" {

const char* cb_version(void) { return "0.1.0"; }

const char* cb_status_name(cb_status status) {
    switch (status) {
        case CB_OK: return "ok";
        case CB_ERROR: return "error";
        case CB_VERDICT_FAIL: return "verdict-fail";
    }
    return "unknown";
}

cb_session* cb_session_open_file(const char* config_path) { return open_with(config_path, true); }

cb_session* cb_session_open_json(const char* config_text) { return open_with(config_text, false); }

int cb_session_ok(const cb_session* session) {
    return session && session->config.has_value() ? 1 : 0;
}

const char* cb_session_error(const cb_session* session) {
    return session ? session->error.c_str() : "null session";
}

void cb_session_close(cb_session* session) { delete session; }

cb_status cb_run(cb_session* session, const char* subcommand, const char* out_dir) {
    if (!session) return CB_ERROR;
    if (!session->config) return CB_ERROR;  // error text already set at open
    if (!subcommand || !out_dir) {
        session->error = "null subcommand or output directory";
        return CB_ERROR;
    }
    std::string message;
    const conebesov::RunStatus status =
        conebesov::run_subcommand(*session->config, subcommand, out_dir, &message);
    session->error = message;
    switch (status) {
        case conebesov::RunStatus::Pass: return CB_OK;
        case conebesov::RunStatus::VerdictFail: return CB_VERDICT_FAIL;
        case conebesov::RunStatus::Error: return CB_ERROR;
    }
    return CB_ERROR;
}

cb_status cb_edge_eigenvalues(double theta, const char* bc, int m_first, int m_last, double* out,
                              size_t capacity, size_t* count) {
    const auto pair = parse_bc_pair(bc);
    if (!pair || !out || !count || m_last < m_first) return CB_ERROR;
    try {
        const auto values = conebesov::edge_eigenvalues(theta, *pair, m_first, m_last);
        *count = values.size() < capacity ? values.size() : capacity;
        for (size_t i = 0; i < *count; ++i) out[i] = values[i];
        return values.size() <= capacity ? CB_OK : CB_ERROR;
    } catch (const std::exception&) {
        return CB_ERROR;
    }
}

cb_status cb_edge_strip(double theta, const char* bc, double* delta_plus, double* delta_minus) {
    const auto pair = parse_bc_pair(bc);
    if (!pair || !delta_plus || !delta_minus) return CB_ERROR;
    try {
        const auto strip = conebesov::edge_strip(theta, *pair);
        *delta_plus = strip.first;
        *delta_minus = strip.second;
        return CB_OK;
    } catch (const std::exception&) {
        return CB_ERROR;
    }
}

cb_status cb_admissible_r_max(int l, const double* delta, size_t n, double s, double* r_max) {
    if (!delta || !r_max) return CB_ERROR;
    try {
        const conebesov::Interval iv =
            conebesov::admissible_r_positive(l, std::vector<double>(delta, delta + n), s);
        *r_max = iv.empty() ? 0.0 : iv.hi;
        return CB_OK;
    } catch (const std::exception&) {
        return CB_ERROR;
    }
}

}  // extern "C"
