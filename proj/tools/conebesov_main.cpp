// Command line front end; talks to the library exclusively through the
// extern-C API.

#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "conebesov/conebesov_c.h"

namespace {

struct SessionCloser {
    void operator()(cb_session* s) const { cb_session_close(s); }
};

int run(const std::string& subcommand, const std::string& config, const std::string& out_dir) {
    std::unique_ptr<cb_session, SessionCloser> session(cb_session_open_file(config.c_str()));
    if (!session) {
        std::fprintf(stderr, "error: out of memory\n");
        return 1;
    }
    if (!cb_session_ok(session.get())) {
        std::fprintf(stderr, "error: %s\n", cb_session_error(session.get()));
        return 1;
    }
    const cb_status status = cb_run(session.get(), subcommand.c_str(), out_dir.c_str());
    const char* message = cb_session_error(session.get());
    if (status == CB_OK)
        std::printf("%s\n", message);
    else
        std::fprintf(stderr, "%s: %s\n", cb_status_name(status), message);
    return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-space / wavelet regularity toolkit for polyhedral cones"};
    app.require_subcommand(1);

    const char* names[] = {"pencil", "advise", "sample", "analyze",
                           "nterm",  "cardinality", "verify", "report"};
    const char* descriptions[] = {
        "edge and vertex operator-pencil tables",
        "evaluate every regularity condition and report rates",
        "sample the model function to a binary field file",
        "wavelet analysis: coefficient summary and distance bins",
        "best N-term error curve and fitted rate",
        "dyadic cube cardinality study with boundedness verdict",
        "end-to-end embedding verification (predicted vs measured rates)",
        "pencil + advise (+ verify) with a run manifest",
    };

    std::string config, out_dir = ".";
    for (int i = 0; i < 8; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descriptions[i]);
        sub->add_option("--config", config, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (default: current)");
    }

    CLI11_PARSE(app, argc, argv);
    return run(app.get_subcommands().front()->get_name(), config, out_dir);
}
