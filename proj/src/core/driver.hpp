#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "model.hpp"
#include "report.hpp"
#include "tilt.hpp"

namespace modphi::driver {

// Either kind of model behind one handle; exactly one is active.
struct AnyModel {
    std::string name;
    bool is_laplace = false;
    ModPhiModel mod;
    tilt::LaplaceModel laplace;
};

// Build a model from registry name + JSON parameters, e.g.
//   {"r2": [0.9, 0.98]}, {"q": [0.5]}, {"P": [[...],[...]], "state": 0},
//   {"p": 0.5}, {"beta": 2.0}, {"increment": "pareto", "pareto_alpha": 1.5}
AnyModel make_model(const std::string& name, const report::ordered_json& params);

// One experiment parsed from the flat key=value config format.
struct Experiment {
    std::string name;
    std::map<std::string, std::string> kv;
};

struct ParsedConfig {
    std::map<std::string, std::string> global;
    std::vector<Experiment> experiments;
};

ParsedConfig parse_config(const std::string& text);

// Runs one experiment; the returned document embeds the resolved config and
// the tool version. csv_rows receives the llt-style summary lines.
report::ordered_json run_experiment(const Experiment& exp,
                                    const std::map<std::string, std::string>& global,
                                    std::vector<std::string>* csv_rows);

struct BatchResult {
    std::vector<std::pair<std::string, report::ordered_json>> documents; // per experiment
    std::string summary_csv;
};

// MODPHI_THREADS caps the worker count; per-experiment seeds are pre-split
// from the master seed so output is identical for any worker count.
BatchResult run_batch(const ParsedConfig& cfg);

// helpers shared with the CLI
std::vector<double> parse_double_list(const std::string& s);
Window parse_window(const std::string& s);
std::uint64_t experiment_seed(std::uint64_t master, const std::string& name,
                              const std::map<std::string, std::string>& kv);

} // namespace modphi::driver
