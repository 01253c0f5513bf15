#pragma once

#include <filesystem>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace honeynet::telnet {

enum class DynamicSource { None, Snapshot, Antenna, SystemInfo };
enum class SideEffect { None, Reboot, Exit, SetAzimuth, SetElevation, SetSatellite };

struct CommandSpec {
    std::string name;  // uppercase
    int min_args = 0;
    int max_args = 0;  // at most 2
    std::string response_template;
    std::string response_with_args;  // used when arguments are given; empty = same as response_template
    DynamicSource source = DynamicSource::None;
    SideEffect side_effect = SideEffect::None;
    bool status_class = false;  // reads device status (tagged separately in analysis)
    std::string help;
};

class CommandTableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Slots every template may use, and the extra ones each source provides.
const std::set<std::string>& common_slots();
std::set<std::string> slots_for(DynamicSource s);

struct ParsedLine {
    enum Kind { Empty, Unknown, BadArity, Known };
    Kind kind = Empty;
    std::string name;  // uppercased first token
    std::vector<std::string> args;
    const CommandSpec* spec = nullptr;
};

class CommandTable {
public:
    /// Throws CommandTableError listing every problem found.
    static CommandTable from_json(const nlohmann::json& j);
    static CommandTable load(const std::filesystem::path& p);
    static CommandTable builtin();
    static const char* builtin_json();

    ParsedLine parse(std::string_view line) const;
    const CommandSpec* find(std::string_view name) const;
    const std::vector<CommandSpec>& commands() const { return commands_; }

    /// Substitutes `{slot}` using `value`; templates were validated at load.
    std::string render(const CommandSpec& spec, const std::vector<std::string>& args,
                       const std::function<std::string(const std::string&)>& value) const;

    std::string command_list() const;

    const std::string& unknown_message() const { return unknown_; }
    const std::string& arity_message() const { return arity_; }
    const std::string& invalid_message() const { return invalid_; }

private:
    std::vector<CommandSpec> commands_;
    std::map<std::string, std::size_t> index_;
    std::string unknown_ = "Unknown command";
    std::string arity_ = "Invalid number of parameters";
    std::string invalid_ = "Invalid parameter";
};

}  // namespace honeynet::telnet
