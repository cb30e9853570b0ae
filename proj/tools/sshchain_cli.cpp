// Command-line front end: validates and runs scenario configs and manages
// the shipped presets. Output directory defaults to the working directory
// and can be overridden with SSHCHAIN_OUTPUT_DIR.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sshchain/presets.hpp"
#include "sshchain/scenario.hpp"
#include "sshchain/version.hpp"

namespace {

std::filesystem::path output_directory()
{
    if (const char* dir = std::getenv("SSHCHAIN_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
        return {dir};
    return {"."};
}

int load_and_validate(const std::string& path, nlohmann::json& parsed, sshchain::ScenarioConfig& config)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read '" << path << "'\n";
        return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        parsed = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "error: malformed JSON in '" << path << "': " << e.what() << "\n";
        return 1;
    }
    std::vector<std::string> issues;
    config = sshchain::validate_scenario(parsed, issues);
    if (!issues.empty()) {
        for (const std::string& msg : issues)
            std::cerr << path << ": " << msg << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite dimerized-chain simulator: spectra, quench dynamics, "
                 "chiral displacement, band structure, Lorentzian fits, disorder ensembles"};
    app.set_version_flag("--version", std::string(sshchain::version));
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a scenario config and write its output tables");
    run->add_option("config", config_path, "Path to a scenario config (JSON)")->required();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Validate a scenario config without running it");
    validate->add_option("config", validate_path, "Path to a scenario config (JSON)")->required();

    auto* presets = app.add_subcommand("presets", "List or print the shipped scenario presets");
    presets->require_subcommand(1);
    presets->add_subcommand("list", "List preset names");
    std::string preset_name;
    auto* dump = presets->add_subcommand("dump", "Print a preset config to stdout");
    dump->add_option("name", preset_name, "Preset name (see 'presets list')")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            nlohmann::json parsed;
            sshchain::ScenarioConfig config;
            if (const int rc = load_and_validate(config_path, parsed, config); rc != 0)
                return rc;
            const sshchain::RunSummary summary = sshchain::run_scenario(config, output_directory());
            std::cout << "scenario: " << summary.scenario << "\n"
                      << "config_hash: " << summary.config_hash << "\n";
            for (const std::string& name : summary.outputs)
                std::cout << "wrote: " << (output_directory() / name).string() << "\n";
            std::cout << "wall_time_ms: " << summary.wall_time_ms << "\n";
            return 0;
        }
        if (validate->parsed()) {
            nlohmann::json parsed;
            sshchain::ScenarioConfig config;
            if (const int rc = load_and_validate(validate_path, parsed, config); rc != 0)
                return rc;
            std::cout << "ok: " << validate_path << " (kind " << sshchain::to_string(config.kind)
                      << ", config_hash " << config.config_hash << ")\n";
            return 0;
        }
        if (presets->parsed()) {
            if (presets->get_subcommand("list")->parsed()) {
                for (const sshchain::Preset& p : sshchain::presets())
                    std::cout << p.name << "\n";
                return 0;
            }
            const auto text = sshchain::preset_json(preset_name);
            if (!text) {
                std::cerr << "error: unknown preset '" << preset_name << "'\n";
                return 1;
            }
            std::cout << *text;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
