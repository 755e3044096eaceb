#pragma once

#include "darboux/parser.hpp"
#include "darboux/phi.hpp"

#include <json.hpp>

namespace darboux {

struct OrbitRequest {
    double x0 = 0, y0 = 0, t_end = 1, h = 1e-3;
};

struct AnalysisConfig {
    int max_degree = 4;
    /// Numerator degree bound for exponential factors; the system degree when unset.
    std::optional<int> exp_degree;
    int exp_power = 2;
    int order = kDefaultOrder;
    std::vector<OrbitRequest> orbits;
    /// Seed for the random orbit starts used when no orbit is requested.
    unsigned seed = 1;
    int random_orbits = 2;
};

/// Reads max_degree, exp_degree, exp_power, order and seed from system file options.
AnalysisConfig config_from_options(const std::map<std::string, std::string> &options);

/// One of curves, expfactors, integral, puiseux, phi, all.
bool is_analysis_command(const std::string &command);

/// Runs the pipeline for the command and assembles the report. Keys of every object
/// are sorted and arrays are in canonical order, so dumping is deterministic.
nlohmann::json analyze(const SystemSpec &spec, const std::string &command, const AnalysisConfig &config);

/// Two-space indented text with a trailing newline.
std::string emit_report(const nlohmann::json &report);

struct VerifyOutcome {
    std::vector<std::string> failures;
    int checked = 0;
    bool ok() const { return failures.empty(); }
};

/// Re-derives every identity stated in a report from the system it names.
/// Throws Error when the report is malformed.
VerifyOutcome verify_report(const nlohmann::json &report);

} // namespace darboux
