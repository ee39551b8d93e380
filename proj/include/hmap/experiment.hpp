#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmap/grid.hpp"
#include "hmap/report.hpp"

namespace hmap {

/// Parsed experiment description. The config file is a flat key = value
/// format with [sections]; unknown keys or sections are errors (fail-closed)
/// and every numeral is parsed as an IEEE double.
struct ExperimentConfig {
    std::string family; // example3 | example5 | example6 | kenmotsu | separable_ode | soliton
    GridSpec grid;
    BaseValues base;
    std::map<std::string, double> params;
    std::map<std::string, double> tolerances; // per-suite overrides
    std::vector<std::string> outputs;         // subset of {w, theta, u}

    double tolerance(const std::string& suite) const;
    void validate() const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

/// Suites with configurable tolerances.
const std::vector<std::string>& tolerance_names();

/// Fields produced by a family run.
struct GeneratedFields {
    ScalarField w;
    ScalarField theta;
    MapField u;
    std::string route; // quadrature | newclass | soliton
};

GeneratedFields run_family(const ExperimentConfig& cfg);

/// All verification suites applicable to the given fields.
struct VerificationRun {
    std::vector<ResidualReport> reports;
    bool all_pass = true;
};
VerificationRun run_verification(const ScalarField& w, const ScalarField& theta,
                                 const MapField& u, const std::map<std::string, double>& tol);

// CLI entry points (also used directly by tests). Return process exit codes:
// 0 success / all suites pass, 1 tolerance failure, 2 invalid input or I/O.
int cmd_generate(const std::string& config_path, const std::string& out_dir, std::ostream& log);
int cmd_verify(const std::string& in_dir, const std::map<std::string, double>& tol_overrides,
               std::ostream& log);
int cmd_plotdata(const std::string& in_dir, int xlines, int ylines, const std::string& out_path,
                 std::ostream& log);

} // namespace hmap
