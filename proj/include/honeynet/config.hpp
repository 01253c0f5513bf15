#pragma once

#include "honeynet/net.hpp"
#include "honeynet/nmea.hpp"
#include "honeynet/replay.hpp"
#include "honeynet/store.hpp"
#include "honeynet/telnet.hpp"
#include "honeynet/vessel.hpp"
#include "honeynet/web.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace honeynet::config {

inline constexpr int kConfigVersion = 1;

struct FieldError {
    std::string path;  // dotted JSON path, e.g. "ship.mmsi"; empty for file-level problems
    std::string message;
    bool operator==(const FieldError&) const = default;
};

/// Every problem found in a config file, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<FieldError> errors);
    const std::vector<FieldError>& errors() const { return errors_; }
    bool mentions(std::string_view path) const;

private:
    std::vector<FieldError> errors_;
};

struct HoneynetConfig {
    vessel::ShipIdentity ship;
    nmea::NavFix start_position{53.5461, 9.9661, 45.0, 11.5, {}};
    vessel::AntennaConfig antenna;

    web::WebConfig web;        // listen address, mimicry headers, session TTL, asset dir
    telnet::TelnetConfig telnet;  // listen address, prompt, reboot downtime
    net::Endpoint internal{"127.0.0.1", 10110};

    std::filesystem::path recording;
    Millis sentence_interval{1000};  // spacing of recording lines without a timestamp
    replay::ReplayConfig replay;

    store::CredentialDefaults credentials;
    std::optional<std::filesystem::path> command_table;  // nullopt: built-in table
    std::filesystem::path log_dir;
    std::filesystem::path quarantine_dir;
    std::filesystem::path database;
    std::uint64_t upload_cap_bytes = 64ull * 1024 * 1024;

    std::uint64_t seed = 0;  // antenna jitter; 0 draws one at startup

    /// The effective configuration in file form (absolute paths).
    nlohmann::json to_json() const;
};

/// Relative paths resolve against `base_dir`. Throws ConfigError.
HoneynetConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
HoneynetConfig load_config(const std::filesystem::path& file);

}  // namespace honeynet::config
