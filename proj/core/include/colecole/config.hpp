#ifndef COLECOLE_CONFIG_HPP
#define COLECOLE_CONFIG_HPP

#include <map>
#include <string>

#include "colecole/driver.hpp"

namespace colecole {

// Flat key = value configuration (or the run.json echo of a previous run).
// Unknown keys are a hard error.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_file(const std::string& path);

// Build run specs from a config map merged over defaults; every recognized
// key consumed, leftovers rejected.
SimulateSpec make_simulate_spec(const ConfigMap& cfg);
IdeSpec make_ide_spec(const ConfigMap& cfg);
ConvergenceSpec make_convergence_spec(const ConfigMap& cfg);
QuadtestSpec make_quadtest_spec(const ConfigMap& cfg);

// Full resolved-configuration echo written next to the outputs; re-ingesting
// it reproduces the run bit for bit.
std::string simulate_run_json(const SimulateSpec& spec, const SimulationResult& result);
std::string ide_run_json(const IdeSpec& spec, const IdeResult& result);
std::string convergence_run_json(const ConvergenceSpec& spec);
std::string quadtest_run_json(const QuadtestSpec& spec);

} // namespace colecole

#endif
