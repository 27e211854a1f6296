#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "treelocal/stats.hpp"

namespace treelocal {

// Invalid or inconsistent configuration; the CLI maps this to a usage error.
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct experiment_result {
    std::string experiment;
    nlohmann::json config;                 // effective config (defaults applied)
    std::vector<test_report> reports;
    std::vector<std::string> columns;      // CSV schema
    std::vector<std::vector<std::string>> rows;
    std::string csv_path;                  // empty when outdir is empty
    std::string meta_path;
    double wall_seconds = 0.0;

    bool all_pass() const;
};

const std::vector<std::string>& experiment_names();

nlohmann::json default_config(const std::string& experiment);

// Runs one experiment with defaults filled in. Writes
// <outdir>/<experiment>-<seed>.csv and .meta.json when outdir is nonempty.
experiment_result run_experiment(const std::string& experiment, nlohmann::json cfg);

}  // namespace treelocal
