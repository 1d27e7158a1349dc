// Exercises the shared-library surface the way an external client would:
// only conebesov_c.h, no C++ core headers.

#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "conebesov/conebesov_c.h"

namespace {

int failures = 0;

void expect(bool ok, const char* what) {
    if (!ok) {
        std::fprintf(stderr, "FAIL: %s\n", what);
        ++failures;
    }
}

const char* kConfig = R"({
  "geometry": {"edges": [[1,0,0],[0,1,0],[0,0,1]],
    "faces": [{"edges":[0,1],"normal":[0,0,-1]},
              {"edges":[1,2],"normal":[-1,0,0]},
              {"edges":[2,0],"normal":[0,-1,0]}],
    "truncation_radius": 1.0, "convex": true},
  "bc": {"faces": ["D","D","D"]},
  "weights": {"l":2, "beta":0.0, "delta":[0.4,0.4,0.4]},
  "problem": {"homogeneous": true},
  "experiment": {"pencil_m_max": 3, "vertex_count": 3, "vertex_refinements": 4}
})";

}  // namespace

int main() {
    expect(std::strcmp(cb_version(), "") != 0, "version string present");
    expect(std::strcmp(cb_status_name(CB_OK), "ok") == 0, "status name ok");
    expect(std::strcmp(cb_status_name(CB_VERDICT_FAIL), "verdict-fail") == 0,
           "status name verdict");

    // Closed-form helpers.
    {
        double values[4] = {0, 0, 0, 0};
        size_t count = 0;
        expect(cb_edge_eigenvalues(M_PI / 2, "DD", 1, 3, values, 4, &count) == CB_OK,
               "edge eigenvalues status");
        expect(count == 3, "edge eigenvalue count");
        expect(std::fabs(values[0] - 2.0) < 1e-12, "DD m=1 eigenvalue");
        expect(cb_edge_eigenvalues(M_PI / 2, "XX", 1, 3, values, 4, &count) == CB_ERROR,
               "bad bc rejected");

        double dp = 0, dm = 0;
        expect(cb_edge_strip(3 * M_PI / 2, "DD", &dp, &dm) == CB_OK, "strip status");
        expect(std::fabs(dp - 2.0 / 3.0) < 1e-12, "strip value");
        expect(cb_edge_strip(3 * M_PI / 2, "DN", &dp, &dm) == CB_OK, "mixed strip status");
        expect(std::fabs(dp - 1.0 / 3.0) < 1e-12, "mixed strip value");

        const double delta[3] = {0.4, 0.4, 0.4};
        double r_max = 0;
        expect(cb_admissible_r_max(2, delta, 3, 1.5, &r_max) == CB_OK, "r_max status");
        expect(std::fabs(r_max - 2.0) < 1e-12, "r_max value");
    }

    // Session lifecycle and error paths.
    {
        cb_session* bad = cb_session_open_json("{");
        expect(bad != nullptr, "session allocated for bad config");
        expect(cb_session_ok(bad) == 0, "bad config flagged");
        expect(std::strlen(cb_session_error(bad)) > 0, "error text for bad config");
        expect(cb_run(bad, "pencil", ".") == CB_ERROR, "run on bad session errors");
        cb_session_close(bad);

        cb_session* missing = cb_session_open_file("/nonexistent/conebesov.json");
        expect(cb_session_ok(missing) == 0, "missing file flagged");
        cb_session_close(missing);
    }

    // A real run through the shared library.
    {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() / "conebesov_capi_run";
        fs::remove_all(dir);

        cb_session* session = cb_session_open_json(kConfig);
        expect(cb_session_ok(session) == 1, "session ok");
        expect(cb_run(session, "pencil", dir.string().c_str()) == CB_OK, "pencil run");
        expect(fs::exists(dir / "pencil_edges.csv"), "pencil artifact exists");
        expect(cb_run(session, "advise", dir.string().c_str()) == CB_OK, "advise run");
        expect(fs::exists(dir / "advisor_report.json"), "advisor artifact exists");
        expect(cb_run(session, "bogus", dir.string().c_str()) == CB_ERROR, "bogus subcommand");
        cb_session_close(session);
    }

    cb_session_close(nullptr);  // tolerated

    if (failures == 0) std::printf("capi_tests: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
