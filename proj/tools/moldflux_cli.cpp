// Command-line front end. Links the public C API only; all numerics live
// behind it. Precedence: preset < config file < individual flags < --set.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "moldflux.h"

namespace {

int fail(mf_status status) {
    std::fprintf(stderr, "moldflux: %s\n", mf_last_error());
    return status == MF_ERR_NUMERICAL ? 3 : 2;
}

struct Flags {
    std::string preset, config, out, method, eta, levels, etas, omegas,
        pg_values, omega, reps, seed, reg, mode, p_g, ghat, threads, artifact,
        measurements;
    bool full = false;
    std::vector<std::string> sets;
};

void add_options(CLI::App* cmd, Flags& f) {
    cmd->add_option("--preset", f.preset, "parameter preset: analytical|industrial");
    cmd->add_option("--config", f.config, "INI configuration file");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--method", f.method, "inversion method: alifanov|param");
    cmd->add_option("--eta", f.eta, "RBF shape parameter");
    cmd->add_option("--levels", f.levels, "comma list of grid levels");
    cmd->add_option("--etas", f.etas, "comma list of eta values");
    cmd->add_option("--omegas", f.omegas, "comma list of noise levels");
    cmd->add_option("--pg-values", f.pg_values, "comma list of p_g values");
    cmd->add_option("--omega", f.omega, "measurement noise std dev, K");
    cmd->add_option("--reps", f.reps, "study repetitions");
    cmd->add_option("--seed", f.seed, "noise seed");
    cmd->add_option("--reg", f.reg, "online regularization: lu|tsvd:<alpha>");
    cmd->add_option("--mode", f.mode, "cost functional: j1|j2");
    cmd->add_option("--p-g", f.p_g, "total-heat penalty weight");
    cmd->add_option("--ghat", f.ghat, "total-heat measurement: auto|<W>");
    cmd->add_option("--threads", f.threads, "worker threads (or MOLDFLUX_THREADS)");
    cmd->add_option("--artifact", f.artifact, "offline artifact path");
    cmd->add_option("--measurements", f.measurements, "measurement CSV path");
    cmd->add_flag("--full", f.full, "full-resolution industrial grid");
    cmd->add_option("--set", f.sets, "raw override, section.key=value")
        ->take_all();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary heat-flux estimation for continuous-casting molds"};
    app.require_subcommand(1);

    const char* subcommands[] = {"direct",      "converge",  "invert",
                                 "offline",     "online",    "noise-study",
                                 "eta-sweep",   "pg-sweep",  "inspect-artifact"};
    Flags f;
    for (const char* name : subcommands)
        add_options(app.add_subcommand(name, ""), f);

    CLI11_PARSE(app, argc, argv);
    const std::string subcommand = app.get_subcommands().front()->get_name();

    mf_config* cfg = mf_config_new();
    auto set = [&](const char* key, const std::string& value) {
        return value.empty() ? MF_OK : mf_config_set(cfg, key, value.c_str());
    };

    mf_status st = MF_OK;
    if (!f.preset.empty()) st = mf_config_preset(cfg, f.preset.c_str());
    if (st == MF_OK && !f.config.empty())
        st = mf_config_load(cfg, f.config.c_str());

    const std::pair<const char*, const std::string*> flag_keys[] = {
        {"run.out", &f.out},          {"method.name", &f.method},
        {"method.eta", &f.eta},       {"study.levels", &f.levels},
        {"study.etas", &f.etas},      {"study.omegas", &f.omegas},
        {"study.pg_values", &f.pg_values}, {"noise.omega", &f.omega},
        {"noise.reps", &f.reps},      {"noise.seed", &f.seed},
        {"method.reg", &f.reg},       {"method.mode", &f.mode},
        {"method.p_g", &f.p_g},       {"method.ghat", &f.ghat},
        {"run.threads", &f.threads},  {"run.artifact", &f.artifact},
        {"run.measurements", &f.measurements},
    };
    for (const auto& [key, value] : flag_keys) {
        if (st != MF_OK) break;
        st = set(key, *value);
    }
    if (st == MF_OK && f.full) st = mf_config_set(cfg, "case.full", "true");
    if (st == MF_OK && f.threads.empty()) {
        if (const char* env = std::getenv("MOLDFLUX_THREADS"))
            st = mf_config_set(cfg, "run.threads", env);
    }
    for (const std::string& kv : f.sets) {
        if (st != MF_OK) break;
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "moldflux: --set expects section.key=value\n");
            mf_config_free(cfg);
            return 2;
        }
        st = mf_config_set(cfg, kv.substr(0, eq).c_str(),
                           kv.substr(eq + 1).c_str());
    }
    if (st != MF_OK) {
        int code = fail(st);
        mf_config_free(cfg);
        return code;
    }

    char report[4096];
    st = mf_run(cfg, subcommand.c_str(), report, sizeof(report));
    mf_config_free(cfg);
    if (st != MF_OK) return fail(st);
    if (report[0] != '\0') std::printf("%s\n", report);
    return 0;
}
