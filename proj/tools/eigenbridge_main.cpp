#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eigenbridge/error.hpp"
#include "eigenbridge/harness.hpp"

using namespace eigenbridge;

int main(int argc, char** argv) {
    CLI::App app{"Eigenvector bridge and spiked covariance experiments"};
    app.set_version_flag("--version", version_string());

    std::string experiment;
    std::string config_path;
    std::string field = "real";
    std::string law = "gaussian";
    std::string seed = "0";
    std::size_t n = 0, s = 0, m = 2, reps = 100, threads = 0;
    double theta = 0.0, y = 0.0;
    std::string out;

    app.add_option("experiment", experiment, "haar-bridge | cov-bridge | mp-check | lambda-max | spike-detect");
    app.add_option("--config", config_path, "JSON config; command-line options override its fields");
    auto* n_opt = app.add_option("--n", n, "dimension");
    auto* s_opt = app.add_option("--s", s, "sample size");
    auto* m_opt = app.add_option("--m", m, "number of probe vectors");
    auto* field_opt = app.add_option("--field", field, "real | complex")->check(CLI::IsMember({"real", "complex"}));
    auto* law_opt = app.add_option("--law", law, "gaussian | complex-gaussian | rademacher | two-point:<scale>");
    auto* theta_opt = app.add_option("--theta", theta, "spike strength");
    auto* y_opt = app.add_option("--y", y, "aspect ratio n/s; sets s = round(n/y)");
    auto* reps_opt = app.add_option("--reps", reps, "number of replicates");
    auto* seed_opt = app.add_option("--seed", seed, "master seed, decimal or 0x-hex");
    auto* out_opt = app.add_option("--out", out, "output directory for replicates.csv and summary.json");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads (default $EIGENBRIDGE_THREADS or 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json j = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw Error(Errc::ConfigError, "cannot open " + config_path);
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw Error(Errc::ConfigError, std::string("malformed config: ") + e.what());
            }
        }
        if (!experiment.empty()) j["experiment"] = experiment;
        if (!j.contains("experiment")) throw Error(Errc::ConfigError, "no experiment given");
        if (*n_opt) j["n"] = n;
        if (*s_opt) j["s"] = s;
        if (*m_opt) j["m"] = m;
        if (*field_opt) j["field"] = field;
        if (*law_opt) j["law"] = law;
        if (*theta_opt) j["theta"] = theta;
        if (*y_opt) j["y"] = y;
        if (*reps_opt) j["reps"] = reps;
        if (*seed_opt) j["seed"] = seed;
        if (*out_opt) j["out"] = out;
        if (*threads_opt) j["threads"] = threads;

        const auto result = run_experiment(ExperimentConfig::from_json(j));
        for (const auto& r : result.reports)
            std::printf("%s %-28s statistic=%.6g threshold=%.6g\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                        r.statistic, r.threshold);
        for (const auto& name : result.skipped) std::printf("SKIP %s (too few replicates)\n", name.c_str());
        return result.all_pass() ? 0 : 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
