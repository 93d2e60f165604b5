#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "horolab/config.hpp"
#include "horolab/experiments.hpp"

using namespace horolab;

namespace {
std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}
} // namespace

TEST_CASE("config round-trips to an identical normalized form") {
    std::string text = "# comment\n\nexperiment=ap-counts\nN = 1000\n  r=12  \nseed=7\n";
    ExperimentConfig cfg = ExperimentConfig::from_string(text);
    std::string norm = cfg.normalized();
    ExperimentConfig again = ExperimentConfig::from_string(norm);
    CHECK(again.normalized() == norm);
    CHECK(cfg.get("experiment") == "ap-counts");
    CHECK(cfg.get_int("N", 0) == 1000);
    CHECK(cfg.get_int("r", 0) == 12);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    CHECK_THROWS_AS(cfg.set_pair("no_equals_sign"), std::invalid_argument);
    cfg.set("x", "abc");
    CHECK_THROWS_AS(cfg.get_num("x", 0), std::invalid_argument);
    CHECK(cfg.get_num("missing", 2.5) == 2.5);
}

TEST_CASE("experiments are deterministic and carry their parameters") {
    std::filesystem::path dir1 = std::filesystem::temp_directory_path() / "horolab_t1";
    std::filesystem::path dir2 = std::filesystem::temp_directory_path() / "horolab_t2";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);

    for (const auto& dir : {dir1, dir2}) {
        ExperimentConfig cfg;
        cfg.set("experiment", "ap-counts");
        cfg.set("N", "20000");
        cfg.set("r", "7");
        cfg.set("out", dir.string());
        std::ostringstream log;
        run_experiment(cfg, log);
    }
    std::string a = slurp(dir1 / "ap_counts.csv");
    std::string b = slurp(dir2 / "ap_counts.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a.find("experiment=ap-counts") != std::string::npos);
    CHECK(a.find("N=20000") != std::string::npos);
    CHECK(a.find("r,a,count,main_term,deviation") != std::string::npos);
}

TEST_CASE("unknown experiments are config errors") {
    ExperimentConfig cfg;
    cfg.set("experiment", "does-not-exist");
    std::ostringstream log;
    CHECK_THROWS_AS(run_experiment(cfg, log), std::invalid_argument);
}
