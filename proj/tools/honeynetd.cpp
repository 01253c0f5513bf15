// honeynetd: runs the honeynet described by a config file until SIGINT/SIGTERM.
//
// Exit codes: 0 clean shutdown, 1 bad command line, 2 invalid configuration,
// 3 startup failure (for example a listen port already in use).

#include "honeynet/config.hpp"
#include "honeynet/orchestrator.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace orch = honeynet::orchestrator;

int main(int argc, char** argv) {
    CLI::App app{"Maritime VSAT terminal honeynet"};
    std::string config_path;
    bool check_only = false;
    app.add_option("-c,--config", config_path, "configuration file (JSON)")->required();
    app.add_flag("--check", check_only, "validate the configuration, print the effective settings and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return orch::kExitUsage;
    }

    honeynet::config::HoneynetConfig cfg;
    try {
        cfg = honeynet::config::load_config(config_path);
    } catch (const honeynet::config::ConfigError& e) {
        std::cerr << "honeynetd: " << config_path << ": " << e.what() << "\n";
        return orch::kExitConfig;
    }
    if (check_only) {
        std::cout << cfg.to_json().dump(2) << "\n";
        return orch::kExitOk;
    }
    return orch::run(cfg, std::cerr);
}
