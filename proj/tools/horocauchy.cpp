#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "horocauchy/errors.hpp"
#include "horocauchy/experiments.hpp"

namespace hc = horocauchy;

namespace {

constexpr int kExitFailures = 1;
constexpr int kExitUsage = 2;

int run_command(const std::string& config_path, const std::string& output, std::optional<std::uint64_t> seed,
                const std::vector<std::string>& overrides) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read config " << config_path << "\n";
        return kExitUsage;
    }
    std::stringstream text;
    text << in.rdbuf();

    hc::ExperimentConfig config;
    try {
        config = hc::parse_config(text.str());
        for (const std::string& o : overrides) hc::apply_override(config, o);
        if (seed) config.seed = *seed;
        if (!output.empty()) config.output = output;
    } catch (const hc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "usage: horocauchy run --config <path> [--output <path>] [--seed N] [--override key=value]...\n"
                  << "see `horocauchy list-experiments` for valid experiment names\n";
        return kExitUsage;
    }

    const hc::ExperimentReport report = hc::run(config);
    for (const hc::ReportRow& row : report.rows) {
        if (row.pass) continue;
        std::cerr << "FAIL case " << row.case_id << " [" << row.invariant << "] error " << row.error << " > tolerance "
                  << row.tolerance;
        if (!row.note.empty()) std::cerr << " (" << row.note << ")";
        std::cerr << "\n";
    }
    std::cout << config.experiment << ": " << report.rows.size() - report.failures() << "/" << report.rows.size()
              << " rows pass in " << report.wall_time_s << " s\n";
    if (config.output.empty()) std::cout << report.to_json().dump(2) << "\n";
    return report.all_pass() ? 0 : kExitFailures;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Horospherical Cauchy transform experiments"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "Run one experiment from a JSON config");
    std::string config_path, output;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--output", output, "Report path; writes <path>.json and <path>.csv");
    run->add_option("--seed", seed, "Random seed");
    run->add_option("--override", overrides, "key=value, applied after the config file")->take_all();

    CLI::App* list = app.add_subcommand("list-experiments", "Print the experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*list) {
            for (const std::string& name : hc::experiment_names()) std::cout << name << "\n";
            return 0;
        }
        return run_command(config_path, output, seed, overrides);
    } catch (const hc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailures;
    }
}
