#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "horolab/config.hpp"

namespace horolab {

// Runs one named experiment, writing its CSV/text artifacts under the
// directory in config key "out" (default "out").  Every artifact starts with
// a '#' header carrying the full normalized parameter set.  Deterministic for
// a fixed config.  Throws std::invalid_argument for config errors,
// CapacityExceeded and HypothesisViolation for their respective conditions.
void run_experiment(const ExperimentConfig& config, std::ostream& log);

// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

} // namespace horolab
