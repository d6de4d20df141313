// config.hpp — JSON run configuration.
//
// Complex numbers are two-element arrays [re, im] everywhere. Example:
//
//   {"system":  {"n": 1, "matrix": [[[0, 0]]]},
//    "bath":    {"peaks": [{"g": 1, "gamma": 2, "epsilon": 0}], "eta": 0, "cutoff": null},
//    "initial": {"psi": [[1, 0]], "psi0": [0, 0]},
//    "time":    {"t_max": 10, "points": 101}}
//
// Optional sections: "solver" {rtol, atol, oracle_steps}, "mode"
// {unrenormalized_init}, "cutoff_study" {cutoffs, t_from} and "sweep"
// [{"path": <JSON pointer>, "values": [...]}].

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nmdyn/model.hpp"

namespace nmdyn::cli {

struct TimeSpec {
    double t_max = 1.0;
    std::size_t points = 2;   // including t = 0 and t_max

    TimeGrid grid() const { return TimeGrid::uniform(t_max, points - 1); }
};

struct SolverSpec {
    double rtol = 1e-9;
    double atol = 1e-12;
    std::size_t oracle_steps = 4000;
};

struct CutoffStudySpec {
    std::vector<double> cutoffs{20.0, 40.0, 80.0};
    double t_from = 0.5;
};

struct SweepAxis {
    std::string path;                    // JSON pointer into the config document
    std::vector<nlohmann::json> values;
};

struct RunConfig {
    SystemHamiltonian system;
    BathModel bath;
    InitialState initial;
    TimeSpec time;
    SolverSpec solver;
    bool unrenormalized_init = false;
    CutoffStudySpec cutoff_study;
    std::vector<SweepAxis> sweep;
};

// Throws ConfigError (ParseError or ValidationError) naming the offending path.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace nmdyn::cli
