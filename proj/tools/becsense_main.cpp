// becsense — microwave-photon sensing chain calculator.
//
// Subcommands cover the pieces of the model (cpw-info, bmax, mode-volume,
// field-map, dfunc-sweep) and the full pipeline (atom-rate, sweep,
// reproduce-paper).  Configuration is one JSON document; every flag that
// changes physics lives there, the CLI only selects what to run and where
// to write.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "becsense/config.hpp"
#include "becsense/runner.hpp"

namespace {

void print_machine_error(const std::string& kind, const std::string& what) {
    std::cerr << "{\"error\":\"" << kind << "\",\"detail\":\"";
    for (char c : what) {
        if (c == '"' || c == '\\') std::cerr << '\\';
        std::cerr << c;
    }
    std::cerr << "\"}" << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coplanar-waveguide / condensate single-photon sensing calculator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    std::vector<std::string> tol_overrides;

    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads for sweeps and volume integrals")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-override", tol_overrides,
                   "quadrature override KEY=VAL (rel_tol_inner, rel_tol_outer, abs_tol, "
                   "max_subdivisions); repeatable");

    const std::vector<std::string> names = {"cpw-info",    "field-map",  "mode-volume",
                                            "bmax",        "dfunc-sweep", "atom-rate",
                                            "reproduce-paper", "sweep"};
    for (const auto& n : names) app.add_subcommand(n);

    CLI11_PARSE(app, argc, argv);

    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                print_machine_error("io", "cannot read config file " + config_path);
                return 2;
            }
            std::ostringstream ss;
            ss << f.rdbuf();
            text = ss.str();
        }
        becsense::config::RunConfig cfg = becsense::config::parse_config(text);
        for (const auto& kv : tol_overrides)
            becsense::config::apply_tolerance_override(cfg, kv);
        if (!out_dir.empty()) cfg.output.directory = out_dir;
        if (!format.empty()) cfg.output.format = format;

        const std::string sub = app.get_subcommands().front()->get_name();
        return becsense::runner::run_subcommand(sub, cfg, threads, std::cout);
    } catch (const becsense::config::ConfigError& e) {
        print_machine_error("config", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_machine_error("runtime", e.what());
        return 1;
    }
}
