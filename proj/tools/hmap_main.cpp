#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmap/experiment.hpp"

namespace {

std::map<std::string, double> parse_tol_overrides(const std::vector<std::string>& raw) {
    std::map<std::string, double> out;
    for (const auto& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw hmap::ConfigError("--tol expects NAME=VALUE, got '" + item + "'");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic maps to the hyperbolic plane via the Backlund transformation"};
    app.require_subcommand(1);

    std::string config_path, out_dir, in_dir, out_path;
    std::vector<std::string> tol_raw;
    int xlines = 9, ylines = 9;

    CLI::App* gen = app.add_subcommand("generate", "construct fields from a config file");
    gen->add_option("--config", config_path, "experiment config file")->required();
    gen->add_option("--out", out_dir, "output directory")->required();

    CLI::App* ver = app.add_subcommand("verify", "run the residual suites on exported fields");
    ver->add_option("--in", in_dir, "directory with w.csv, theta.csv, u.csv, manifest.txt")
        ->required();
    ver->add_option("--tol", tol_raw, "override a suite tolerance, NAME=VALUE")
        ->take_all()
        ->expected(0, -1);

    CLI::App* plot = app.add_subcommand("plotdata", "export images of grid lines as polylines");
    plot->add_option("--in", in_dir, "directory with u.csv")->required();
    plot->add_option("--xlines", xlines, "number of x = const lines");
    plot->add_option("--ylines", ylines, "number of y = const lines");
    plot->add_option("--out", out_path, "output polyline file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return hmap::cmd_generate(config_path, out_dir, std::cout);
        if (ver->parsed())
            return hmap::cmd_verify(in_dir, parse_tol_overrides(tol_raw), std::cout);
        if (plot->parsed()) return hmap::cmd_plotdata(in_dir, xlines, ylines, out_path, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
