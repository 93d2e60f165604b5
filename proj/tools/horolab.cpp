#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "horolab/config.hpp"
#include "horolab/errors.hpp"
#include "horolab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"horolab: desk-scale experiments for horocycle-flow semiprime equidistribution"};

    std::string experiment;
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;

    std::string names;
    for (const auto& n : horolab::experiment_names()) names += n + " ";
    app.add_option("experiment", experiment, "one of: " + names)->required();
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--set", overrides, "config overrides, key=value")->take_all();
    app.add_option("--out", out_dir, "output directory (default: out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        horolab::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = horolab::ExperimentConfig::from_file(config_path);
        cfg.set("experiment", experiment);
        if (!cfg.has("out")) cfg.set("out", out_dir);
        for (const auto& ov : overrides) cfg.set_pair(ov);
        horolab::run_experiment(cfg, std::cout);
        return 0;
    } catch (const horolab::CapacityExceeded& e) {
        std::cerr << "capacity guard: " << e.what() << "\n";
        return 3;
    } catch (const horolab::HypothesisViolation& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
