#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "treelocal/experiments.hpp"
#include "treelocal/io.hpp"

namespace {

int usage_error(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    std::fprintf(stderr, "known experiments:\n");
    for (const auto& name : treelocal::experiment_names())
        std::fprintf(stderr, "  %s\n", name.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo experiments on tree local-time fields"};
    app.allow_extras();

    std::string experiment;
    app.add_option("experiment", experiment, "experiment name")->required();
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; remaining --key value pairs override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits clean, everything else is usage
    }

    bool known = false;
    for (const auto& name : treelocal::experiment_names()) known = known || name == experiment;
    if (!known) return usage_error("unknown experiment: " + experiment);

    nlohmann::json cfg = nlohmann::json::object();
    if (!config_path.empty()) {
        try {
            cfg = treelocal::read_json(config_path);
        } catch (const std::exception& e) {
            return usage_error(e.what());
        }
        if (!cfg.is_object()) return usage_error("config file must hold a JSON object");
    }

    const std::vector<std::string> extra = app.remaining();
    if (extra.size() % 2 != 0) return usage_error("override flags come in --key value pairs");
    for (std::size_t i = 0; i < extra.size(); i += 2) {
        const std::string& flag = extra[i];
        if (flag.rfind("--", 0) != 0 || flag.size() <= 2)
            return usage_error("expected --key, got '" + flag + "'");
        const std::string key = flag.substr(2);
        const std::string& raw = extra[i + 1];
        nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
        cfg[key] = parsed.is_discarded() ? nlohmann::json(raw) : parsed;
    }

    treelocal::experiment_result res;
    try {
        res = treelocal::run_experiment(experiment, cfg);
    } catch (const treelocal::config_error& e) {
        return usage_error(e.what());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    for (const auto& r : res.reports)
        std::printf("report %-28s statistic=%.6g threshold=%.6g n=(%llu,%llu) %s\n",
                    r.name.c_str(), r.statistic, r.threshold,
                    static_cast<unsigned long long>(r.n_a),
                    static_cast<unsigned long long>(r.n_b), r.pass ? "PASS" : "FAIL");
    if (!res.csv_path.empty())
        std::printf("wrote %s and %s\n", res.csv_path.c_str(), res.meta_path.c_str());
    std::printf("%s: %s (%.2fs)\n", experiment.c_str(), res.all_pass() ? "PASS" : "FAIL",
                res.wall_seconds);
    return res.all_pass() ? 0 : 1;
}
