#include "honeynet/commands.hpp"

#include "builtin_commands.hpp"
#include "honeynet/common.hpp"

#include <fstream>

namespace honeynet::telnet {

using json = nlohmann::json;

const std::set<std::string>& common_slots() {
    static const std::set<std::string> s{"arg1", "arg2",     "command_list", "user",  "role",  "ship_name",
                                         "call_sign", "mmsi", "mac",          "firmware", "model", "serial"};
    return s;
}

std::set<std::string> slots_for(DynamicSource src) {
    auto s = common_slots();
    static const std::set<std::string> snapshot{"lat", "lon", "heading", "speed", "utc", "seq"};
    static const std::set<std::string> antenna{"az", "el", "rel_az", "signal", "sat_lon", "tracking"};
    static const std::set<std::string> system{"uptime", "date", "time", "log"};
    switch (src) {
        case DynamicSource::None: break;
        case DynamicSource::Snapshot: s.insert(snapshot.begin(), snapshot.end()); break;
        case DynamicSource::Antenna:
            s.insert(snapshot.begin(), snapshot.end());
            s.insert(antenna.begin(), antenna.end());
            break;
        case DynamicSource::SystemInfo: s.insert(system.begin(), system.end()); break;
    }
    return s;
}

namespace {

std::optional<DynamicSource> parse_source(const std::string& s) {
    if (s == "none") return DynamicSource::None;
    if (s == "snapshot") return DynamicSource::Snapshot;
    if (s == "antenna") return DynamicSource::Antenna;
    if (s == "system") return DynamicSource::SystemInfo;
    return std::nullopt;
}

std::optional<SideEffect> parse_effect(const std::string& s) {
    if (s == "none") return SideEffect::None;
    if (s == "reboot") return SideEffect::Reboot;
    if (s == "exit") return SideEffect::Exit;
    if (s == "set_azimuth") return SideEffect::SetAzimuth;
    if (s == "set_elevation") return SideEffect::SetElevation;
    if (s == "set_satellite") return SideEffect::SetSatellite;
    return std::nullopt;
}

// Slot names in order of appearance; nullopt on an unbalanced brace.
std::optional<std::vector<std::string>> slots_in(const std::string& tpl) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tpl.size(); ++i) {
        if (tpl[i] == '}') return std::nullopt;
        if (tpl[i] != '{') continue;
        auto close = tpl.find('}', i + 1);
        if (close == std::string::npos) return std::nullopt;
        auto name = tpl.substr(i + 1, close - i - 1);
        if (name.find('{') != std::string::npos) return std::nullopt;
        out.push_back(name);
        i = close;
    }
    return out;
}

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; };
    while (i < line.size()) {
        while (i < line.size() && ws(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !ws(line[j])) ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

CommandTable CommandTable::from_json(const json& j) {
    std::vector<std::string> errors;
    CommandTable t;
    if (!j.is_object() || !j.contains("commands") || !j["commands"].is_array())
        throw CommandTableError("command table: expected an object with a \"commands\" array");

    if (auto e = j.find("errors"); e != j.end() && e->is_object()) {
        t.unknown_ = e->value("unknown", t.unknown_);
        t.arity_ = e->value("arity", t.arity_);
        t.invalid_ = e->value("invalid", t.invalid_);
    }

    std::size_t idx = 0;
    for (const auto& c : j["commands"]) {
        std::string where = "commands[" + std::to_string(idx++) + "]";
        if (!c.is_object()) {
            errors.push_back(where + ": not an object");
            continue;
        }
        CommandSpec spec;
        try {
            spec.name = c.value("name", std::string());
            spec.min_args = c.value("min_args", 0);
            spec.max_args = c.value("max_args", 0);
            spec.response_template = c.value("response", std::string());
            spec.response_with_args = c.value("response_with_args", std::string());
            spec.status_class = c.value("status", false);
            spec.help = c.value("help", std::string());
            auto src = parse_source(c.value("source", std::string("none")));
            auto eff = parse_effect(c.value("side_effect", std::string("none")));
            if (!src) errors.push_back(where + ".source: unknown value");
            if (!eff) errors.push_back(where + ".side_effect: unknown value");
            spec.source = src.value_or(DynamicSource::None);
            spec.side_effect = eff.value_or(SideEffect::None);
        } catch (const json::exception& e) {
            errors.push_back(where + ": " + e.what());
            continue;
        }
        if (spec.name.empty() || spec.name != to_upper(spec.name) ||
            spec.name.find_first_of(" \t") != std::string::npos)
            errors.push_back(where + ".name: must be a non-empty uppercase token");
        if (spec.min_args < 0 || spec.max_args > 2 || spec.min_args > spec.max_args)
            errors.push_back(where + ": need 0 <= min_args <= max_args <= 2");
        if (t.index_.count(spec.name)) errors.push_back(where + ".name: duplicate " + spec.name);

        auto allowed = slots_for(spec.source);
        for (auto* tpl : {&spec.response_template, &spec.response_with_args}) {
            auto slots = slots_in(*tpl);
            if (!slots) {
                errors.push_back(where + ": unbalanced braces in template");
                continue;
            }
            for (const auto& s : *slots)
                if (!allowed.count(s)) errors.push_back(where + ": unknown slot {" + s + "}");
        }
        t.index_[spec.name] = t.commands_.size();
        t.commands_.push_back(std::move(spec));
    }
    if (!errors.empty()) {
        std::string msg = "invalid command table:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw CommandTableError(msg);
    }
    return t;
}

CommandTable CommandTable::load(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw CommandTableError("cannot read command table " + p.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw CommandTableError("command table " + p.string() + ": " + e.what());
    }
}

const char* CommandTable::builtin_json() { return detail::kBuiltinCommands; }

CommandTable CommandTable::builtin() { return from_json(json::parse(builtin_json())); }

const CommandSpec* CommandTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &commands_[it->second];
}

ParsedLine CommandTable::parse(std::string_view line) const {
    ParsedLine p;
    auto tokens = split_ws(line);
    if (tokens.empty()) return p;
    p.name = to_upper(tokens[0]);
    p.args.assign(tokens.begin() + 1, tokens.end());
    p.spec = find(p.name);
    if (!p.spec)
        p.kind = ParsedLine::Unknown;
    else if (static_cast<int>(p.args.size()) < p.spec->min_args || static_cast<int>(p.args.size()) > p.spec->max_args)
        p.kind = ParsedLine::BadArity;
    else
        p.kind = ParsedLine::Known;
    return p;
}

std::string CommandTable::render(const CommandSpec& spec, const std::vector<std::string>& args,
                                 const std::function<std::string(const std::string&)>& value) const {
    const std::string& tpl =
        !args.empty() && !spec.response_with_args.empty() ? spec.response_with_args : spec.response_template;
    std::string out;
    for (std::size_t i = 0; i < tpl.size(); ++i) {
        if (tpl[i] != '{') {
            out.push_back(tpl[i]);
            continue;
        }
        auto close = tpl.find('}', i);
        auto name = tpl.substr(i + 1, close - i - 1);
        if (name == "arg1")
            out += args.size() > 0 ? args[0] : "";
        else if (name == "arg2")
            out += args.size() > 1 ? args[1] : "";
        else if (name == "command_list")
            out += command_list();
        else
            out += value(name);
        i = close;
    }
    return out;
}

std::string CommandTable::command_list() const {
    std::string out;
    for (const auto& c : commands_) {
        std::string name = c.name;
        name.resize(std::max<std::size_t>(name.size(), 8), ' ');
        if (!out.empty()) out += "\n";
        out += "  " + name + " " + c.help;
    }
    return out;
}

}  // namespace honeynet::telnet
