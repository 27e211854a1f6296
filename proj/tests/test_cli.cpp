#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "treelocal/io.hpp"
#include "treelocal/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string bin_path() {
    const char* p = std::getenv("TREELOCAL_BIN");
    REQUIRE_MESSAGE(p != nullptr, "TREELOCAL_BIN must point at the executable");
    return std::string(p);
}

int run(const std::string& args) {
    const std::string cmd = bin_path() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), ("missing file: " + p.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct csv_data {
    std::vector<std::string> meta;    // leading "# " lines
    std::vector<std::string> header;  // column names
    std::vector<std::vector<std::string>> rows;
};

csv_data parse_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE_MESSAGE(in.good(), ("missing file: " + p.string()));
    csv_data out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            out.meta.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (out.header.empty())
            out.header = cells;
        else
            out.rows.push_back(cells);
    }
    return out;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "treelocal_cli" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("exit codes cover pass, fail, and usage") {
    const fs::path d = fresh_dir("codes");
    CHECK(run("coupling-identity --replicas 5 --n 4 --outdir " + d.string()) == 0);
    // An impossible threshold turns the same run into a reported failure.
    CHECK(run("coupling-identity --replicas 5 --n 4 --tol 0") == 1);
    CHECK(run("no-such-experiment") == 2);
    CHECK(run("") == 2);
    CHECK(run("coupling-identity --replicas 0") == 2);
    CHECK(run("coupling-identity --no_such_key 1") == 2);
    CHECK(run("coupling-identity --replicas") == 2);  // dangling override
    CHECK(run("coupling-identity --config /nonexistent.json") == 2);
    CHECK(run("coupling-identity --k 99") == 2);
    CHECK(run("--help") == 0);
}

TEST_CASE("output naming and metadata header") {
    const fs::path d = fresh_dir("naming");
    CHECK(run("maximizer-scale --replicas 40 --n 5 --seed 9 --outdir " + d.string()) == 0);
    const fs::path csv = d / "maximizer-scale-9.csv";
    const fs::path meta = d / "maximizer-scale-9.meta.json";
    REQUIRE(fs::exists(csv));
    REQUIRE(fs::exists(meta));

    const csv_data data = parse_csv(csv);
    REQUIRE(data.meta.size() >= 4);
    CHECK(data.meta[0].rfind("# experiment: maximizer-scale", 0) == 0);
    CHECK(data.meta[1].rfind("# build: ", 0) == 0);
    CHECK(data.meta[2] == "# seed: 9");
    CHECK(data.meta[3].rfind("# config: {", 0) == 0);
    CHECK(data.header == std::vector<std::string>{"replica", "theta", "scale"});
    CHECK(data.rows.size() == 40);

    const json m = treelocal::read_json(meta.string());
    for (const char* key : {"experiment", "build", "config", "workers", "csv", "wall_seconds",
                            "reports", "extras"})
        CHECK(m.contains(key));
    CHECK(m["experiment"] == "maximizer-scale");
    CHECK(m["config"]["seed"] == 9);
    CHECK_FALSE(m["config"].contains("workers"));
    CHECK_FALSE(m["config"].contains("outdir"));
    CHECK(m["reports"].is_array());
    CHECK(m["reports"][0].contains("pass"));
}

TEST_CASE("config file with command-line overrides") {
    const fs::path d = fresh_dir("config");
    const fs::path cfgfile = d / "cfg.json";
    treelocal::write_json(cfgfile.string(), json{{"replicas", 60}, {"n", 4}, {"seed", 3}});
    CHECK(run("coupling-identity --config " + cfgfile.string() + " --replicas 80 --outdir " +
              d.string()) == 0);
    const csv_data data = parse_csv(d / "coupling-identity-3.csv");
    CHECK(data.rows.size() == 80);  // the flag wins over the file
    const json m = treelocal::read_json((d / "coupling-identity-3.meta.json").string());
    CHECK(m["config"]["replicas"] == 80);
    CHECK(m["config"]["n"] == 4);
}

TEST_CASE("fixed seed reproduces outputs byte for byte") {
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    const std::string args = "coupling-identity --replicas 20 --n 4 --seed 5 --outdir ";
    CHECK(run(args + d1.string()) == 0);
    CHECK(run(args + d2.string()) == 0);
    // Full-file bytes match even across destinations: the echoed config
    // carries no outdir.
    CHECK(slurp(d1 / "coupling-identity-5.csv") == slurp(d2 / "coupling-identity-5.csv"));
    csv_data a = parse_csv(d1 / "coupling-identity-5.csv");
    const csv_data b = parse_csv(d2 / "coupling-identity-5.csv");
    CHECK(a.header == b.header);

    const fs::path d3 = fresh_dir("det3");
    CHECK(run("coupling-identity --replicas 20 --n 4 --seed 6 --outdir " + d3.string()) == 0);
    const csv_data c = parse_csv(d3 / "coupling-identity-6.csv");
    CHECK(a.rows != c.rows);
}

TEST_CASE("worker count changes nothing in the output bytes") {
    for (const std::string exp :
         {std::string("sampler-equivalence --replicas 400 --ks_tol 1 --cov_z_tol 99"),
          std::string("leafstart-law --replicas 200 --n 4 --depths [1,4] --ks_tol 1")}) {
        const fs::path d = fresh_dir("workers");
        const std::string name = exp.substr(0, exp.find(' '));
        run(exp + " --workers 1 --outdir " + d.string());
        const fs::path out = d / (name + "-1.csv");
        const fs::path keep = d / "w1.csv";
        fs::rename(out, keep);
        run(exp + " --workers 3 --outdir " + d.string());
        CHECK(slurp(keep) == slurp(out));
    }
}

TEST_CASE("replica streams extend instead of reshuffling") {
    const fs::path d = fresh_dir("extend");
    CHECK(run("coupling-identity --replicas 3 --n 4 --seed 11 --outdir " + d.string()) == 0);
    const csv_data small = parse_csv(d / "coupling-identity-11.csv");
    const fs::path d2 = fresh_dir("extend2");
    CHECK(run("coupling-identity --replicas 6 --n 4 --seed 11 --outdir " + d2.string()) == 0);
    const csv_data big = parse_csv(d2 / "coupling-identity-11.csv");
    REQUIRE(small.rows.size() == 3);
    REQUIRE(big.rows.size() == 6);
    for (int i = 0; i < 3; ++i) CHECK(small.rows[i] == big.rows[i]);
}

TEST_CASE("tail report is recomputable from the emitted samples") {
    const fs::path d = fresh_dir("recompute");
    const std::string args =
        "max-tail --n 9 --t 2 --replicas 4000 --u1 0.3 --u2 1.2 --slope_tol 10 --seed 4";
    CHECK(run(args + " --outdir " + d.string()) == 0);
    const csv_data data = parse_csv(d / "max-tail-4.csv");
    REQUIRE(data.header == std::vector<std::string>{"replica", "centered_max"});
    std::vector<double> samples;
    for (const auto& row : data.rows) samples.push_back(std::stod(row[1]));
    REQUIRE(samples.size() == 4000);

    const json m = treelocal::read_json((d / "max-tail-4.meta.json").string());
    const json rep = m["reports"][0];
    REQUIRE(rep["name"] == "corrected-slope-rel-err");

    const treelocal::tail_fit fit = treelocal::tail_slope(samples, 0.3, 1.2, 12);
    const double target = 2.0 * std::sqrt(std::log(2.0));
    const double stat = std::fabs(fit.slope_corrected + target) / target;
    CHECK(stat == doctest::Approx(rep["statistic"].get<double>()).epsilon(1e-12));
    CHECK(rep["pass"].get<bool>() == (stat <= rep["threshold"].get<double>()));
    CHECK(m["extras"]["exceedances"].get<std::uint64_t>() == fit.exceedances);
}
