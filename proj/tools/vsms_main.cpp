// Scenario harness for the vector S-metric fixed-point library.
//
// Exit codes: 0 all scenarios passed/converged, 2 at least one hypothesis
// violation verdict, 3 input or module error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vsms/scenario.hpp"

namespace {

int run_command(const std::vector<std::string>& files, std::string out_dir,
                const std::optional<std::uint64_t>& seed_override) {
    if (out_dir.empty()) {
        const char* env = std::getenv("VSMS_OUT_DIR");
        out_dir = env != nullptr ? env : ".";
    }
    int exit_code = 0;
    for (const auto& file : files) {
        try {
            vsms::Scenario scenario = vsms::parse_scenario_file(file);
            if (seed_override) scenario.seed = *seed_override;
            const vsms::RunResult result = vsms::run(scenario, out_dir);
            std::cout << result.payload_json() << "\n";
            std::cerr << "[" << scenario.id << "] " << result.verdict << " in "
                      << result.wall_seconds << "s\n";
            exit_code = std::max(exit_code, result.exit_code);
        } catch (const vsms::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            exit_code = 3;
        }
    }
    return exit_code;
}

void list_catalog() {
    const auto print = [](const char* label, const std::vector<std::string>& names) {
        std::cout << label << ":";
        for (const auto& n : names) std::cout << " " << n;
        std::cout << "\n";
    };
    print("metrics", vsms::metric_catalog());
    print("maps", vsms::map_catalog());
    print("gauges", vsms::gauge_catalog());
    print("modes", vsms::mode_catalog());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vector S-metric space scenario runner"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;

    CLI::App* run_cmd = app.add_subcommand("run", "run scenario files");
    run_cmd->add_option("files", files, "scenario files")->required()->expected(-1);
    run_cmd->add_option("--out-dir", out_dir,
                        "directory for trace CSVs (default: $VSMS_OUT_DIR or .)");
    run_cmd->add_option("--seed", seed_override, "override the seed of every scenario");

    CLI::App* list_cmd = app.add_subcommand("list-catalog", "print metric/map/gauge names");

    CLI11_PARSE(app, argc, argv);

    if (list_cmd->parsed()) {
        list_catalog();
        return 0;
    }
    return run_command(files, out_dir, seed_override);
}
