#include "honeynet/config.hpp"

#include "honeynet/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace honeynet::config {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
    std::ostringstream out;
    out << "invalid configuration (" << errors.size() << (errors.size() == 1 ? " error)" : " errors)");
    for (const auto& e : errors) out << "\n  " << (e.path.empty() ? "<file>" : e.path) << ": " << e.message;
    return out.str();
}

std::string type_name(const json& v) {
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_number()) return "number";
    if (v.is_array()) return "array";
    if (v.is_object()) return "object";
    return "null";
}

// Reads one JSON object, recording problems instead of stopping at them.
class Section {
public:
    Section(const json& j, std::string path, std::vector<FieldError>& errors, std::set<std::string> known)
        : j_(j), path_(std::move(path)), errors_(errors) {
        if (!j_.is_object()) {
            fail("", "expected an object, got " + type_name(j_));
            return;
        }
        for (const auto& [key, _] : j_.items())
            if (!known.count(key)) fail(key, "unknown field");
    }

    std::string at(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }
    void fail(std::string_view key, std::string message) {
        errors_.push_back({key.empty() ? path_ : at(key), std::move(message)});
    }

    const json* find(std::string_view key) const {
        if (!j_.is_object()) return nullptr;
        auto it = j_.find(std::string(key));
        if (it == j_.end() || it->is_null()) return nullptr;
        return &*it;
    }

    bool str(std::string_view key, std::string& out) {
        const json* v = find(key);
        if (!v) return false;
        if (!v->is_string()) {
            fail(key, "expected a string, got " + type_name(*v));
            return false;
        }
        out = v->get<std::string>();
        return true;
    }

    bool number(std::string_view key, double& out, double lo, double hi) {
        const json* v = find(key);
        if (!v) return false;
        if (!v->is_number()) {
            fail(key, "expected a number, got " + type_name(*v));
            return false;
        }
        double d = v->get<double>();
        if (!std::isfinite(d) || d < lo || d > hi) {
            std::ostringstream msg;
            msg << "must be between " << lo << " and " << hi;
            fail(key, msg.str());
            return false;
        }
        out = d;
        return true;
    }

    bool integer(std::string_view key, std::uint64_t& out, std::uint64_t lo, std::uint64_t hi) {
        const json* v = find(key);
        if (!v) return false;
        if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
            fail(key, "expected a non-negative integer, got " + type_name(*v));
            return false;
        }
        auto n = v->get<std::uint64_t>();
        if (n < lo || n > hi) {
            fail(key, "must be between " + std::to_string(lo) + " and " + std::to_string(hi));
            return false;
        }
        out = n;
        return true;
    }

    bool boolean(std::string_view key, bool& out) {
        const json* v = find(key);
        if (!v) return false;
        if (!v->is_boolean()) {
            fail(key, "expected a boolean, got " + type_name(*v));
            return false;
        }
        out = v->get<bool>();
        return true;
    }

    void millis(std::string_view key, std::chrono::milliseconds& out, std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t n = 0;
        if (integer(key, n, lo, hi)) out = std::chrono::milliseconds(n);
    }

    void seconds(std::string_view key, std::chrono::milliseconds& out, std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t n = 0;
        if (integer(key, n, lo, hi)) out = std::chrono::seconds(n);
    }

    void endpoint(std::string_view key, net::Endpoint& out) {
        std::string s;
        if (!str(key, s)) return;
        auto ep = net::parse_endpoint(s);
        if (!ep)
            fail(key, "expected \"a.b.c.d:port\", got \"" + s + "\"");
        else
            out = *ep;
    }

    Section child(std::string_view key, std::set<std::string> known) {
        static const json empty = json::object();
        const json* v = find(key);
        return Section(v ? *v : empty, at(key), errors_, std::move(known));
    }

private:
    const json& j_;
    std::string path_;
    std::vector<FieldError>& errors_;
};

bool all_digits(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool valid_mac(std::string_view s) {
    if (s.size() != 17) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i % 3 == 2) {
            if (s[i] != ':') return false;
        } else if (!std::isxdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return true;
}

bool header_token(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_';
    });
}

bool is_loopback(const std::string& host) { return host.rfind("127.", 0) == 0; }

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    if (path.is_relative()) path = base / path;
    return path.lexically_normal();
}

// An output directory is fine if it exists, or if the nearest existing
// ancestor is a directory it can be created under.
std::optional<std::string> check_output_dir(const fs::path& p) {
    std::error_code ec;
    if (fs::exists(p, ec)) {
        if (!fs::is_directory(p, ec)) return "exists and is not a directory: " + p.string();
        return std::nullopt;
    }
    for (fs::path a = p.parent_path(); !a.empty(); a = a.parent_path()) {
        if (fs::exists(a, ec)) {
            if (!fs::is_directory(a, ec)) return "cannot be created, " + a.string() + " is not a directory";
            return std::nullopt;
        }
        if (a == a.root_path()) break;
    }
    return "cannot be created: " + p.string();
}

const std::set<std::string> kManagedHeaders{"content-length", "connection", "content-type", "set-cookie",
                                            "location", "transfer-encoding"};

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

bool ConfigError::mentions(std::string_view path) const {
    return std::any_of(errors_.begin(), errors_.end(), [&](const FieldError& e) { return e.path == path; });
}

HoneynetConfig parse_config(const json& j, const fs::path& base_dir) {
    std::vector<FieldError> errors;
    HoneynetConfig cfg;
    const fs::path base = fs::absolute(base_dir).lexically_normal();

    Section root(j, "", errors,
                 {"version", "ship", "start_position", "antenna", "web", "telnet", "internal_endpoint", "replay",
                  "credentials", "command_table", "log_dir", "quarantine_dir", "database", "upload_cap_bytes",
                  "seed"});
    if (!j.is_object()) throw ConfigError(std::move(errors));

    std::uint64_t version = kConfigVersion;
    if (root.integer("version", version, 0, 1000) && version != kConfigVersion)
        root.fail("version", "unsupported version " + std::to_string(version) + " (expected " +
                                 std::to_string(kConfigVersion) + ")");

    {
        auto s = root.child("ship", {"name", "call_sign", "mmsi", "mac_address", "firmware_version", "model", "serial"});
        auto& ship = cfg.ship;
        if (s.str("name", ship.ship_name) && ship.ship_name.empty()) s.fail("name", "must not be empty");
        if (s.str("call_sign", ship.call_sign) && ship.call_sign.empty()) s.fail("call_sign", "must not be empty");
        if (s.str("mmsi", ship.mmsi) && (ship.mmsi.size() != 9 || !all_digits(ship.mmsi)))
            s.fail("mmsi", "must be exactly 9 digits, got \"" + ship.mmsi + "\"");
        if (s.str("mac_address", ship.mac_address) && !valid_mac(ship.mac_address))
            s.fail("mac_address", "expected six colon-separated hex octets, got \"" + ship.mac_address + "\"");
        s.str("firmware_version", ship.firmware_version);
        s.str("model", ship.model);
        s.str("serial", ship.serial);
    }

    {
        auto s = root.child("start_position", {"latitude", "longitude", "heading", "speed"});
        auto& f = cfg.start_position;
        s.number("latitude", f.latitude, -90, 90);
        s.number("longitude", f.longitude, -180, 180);
        if (s.number("heading", f.heading_true, 0, 360) && f.heading_true == 360) f.heading_true = 0;
        s.number("speed", f.speed_over_ground, 0, 102.2);
    }

    {
        auto s = root.child("antenna", {"satellite_longitude"});
        s.number("satellite_longitude", cfg.antenna.satellite_longitude_deg, -180, 180);
    }

    {
        auto s = root.child("web", {"listen", "headers", "session_ttl_s", "asset_dir", "read_timeout_s"});
        s.endpoint("listen", cfg.web.listen);
        s.seconds("session_ttl_s", cfg.web.session_ttl, 1, 7 * 24 * 3600);
        s.seconds("read_timeout_s", cfg.web.read_timeout, 1, 3600);
        if (const json* h = s.find("headers")) {
            if (!h->is_array()) {
                s.fail("headers", "expected an array of [name, value] pairs");
            } else {
                cfg.web.mimicry_headers.clear();
                std::set<std::string> seen;
                for (std::size_t i = 0; i < h->size(); ++i) {
                    const json& pair = (*h)[i];
                    std::string key = "headers[" + std::to_string(i) + "]";
                    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
                        s.fail(key, "expected [name, value] strings");
                        continue;
                    }
                    auto name = pair[0].get<std::string>();
                    auto value = pair[1].get<std::string>();
                    auto lower = to_lower(name);
                    if (!header_token(name))
                        s.fail(key, "invalid header name \"" + name + "\"");
                    else if (kManagedHeaders.count(lower))
                        s.fail(key, "header \"" + name + "\" is set by the server per response");
                    else if (!seen.insert(lower).second)
                        s.fail(key, "duplicate header \"" + name + "\"");
                    else if (value.find_first_of("\r\n") != std::string::npos)
                        s.fail(key, "header value contains a line break");
                    else
                        cfg.web.mimicry_headers.emplace_back(name, value);
                }
            }
        }
        std::string assets;
        if (s.str("asset_dir", assets)) {
            auto p = resolve(base, assets);
            std::error_code ec;
            if (!fs::is_directory(p, ec))
                s.fail("asset_dir", "directory does not exist: " + p.string());
            else
                cfg.web.asset_dir = p;
        }
    }

    {
        auto s = root.child("telnet", {"listen", "prompt", "max_attempts", "idle_timeout_s", "reboot_downtime_s"});
        s.endpoint("listen", cfg.telnet.listen);
        s.str("prompt", cfg.telnet.prompt);
        std::uint64_t attempts = 0;
        if (s.integer("max_attempts", attempts, 1, 100)) cfg.telnet.max_attempts = static_cast<int>(attempts);
        s.seconds("idle_timeout_s", cfg.telnet.idle_timeout, 1, 24 * 3600);
        s.seconds("reboot_downtime_s", cfg.telnet.reboot_downtime, 0, 3600);
    }

    root.endpoint("internal_endpoint", cfg.internal);
    if (!is_loopback(cfg.internal.host))
        root.fail("internal_endpoint", "must be a loopback address, got " + cfg.internal.host);
    if (cfg.internal.port == 0) root.fail("internal_endpoint", "port must not be 0");

    if (cfg.web.listen.port != 0 && cfg.web.listen.port == cfg.telnet.listen.port)
        errors.push_back({"telnet.listen", "port " + std::to_string(cfg.telnet.listen.port) +
                                               " is already used by web.listen"});

    {
        auto s = root.child("replay", {"recording", "rate", "sentence_interval_ms", "loop_gap_ms", "loop"});
        std::string rec;
        if (!s.str("recording", rec)) {
            if (!s.find("recording")) s.fail("recording", "required");
        } else {
            cfg.recording = resolve(base, rec);
            std::error_code ec;
            if (!fs::is_regular_file(cfg.recording, ec)) s.fail("recording", "file does not exist: " + cfg.recording.string());
        }
        double rate = 1.0;
        if (s.number("rate", rate, 0, 1e6)) {
            if (rate <= 0)
                s.fail("rate", "must be greater than 0");
            else
                cfg.replay.rate_multiplier = rate;
        }
        s.millis("sentence_interval_ms", cfg.sentence_interval, 1, 3600 * 1000);
        s.millis("loop_gap_ms", cfg.replay.interval, 0, 3600 * 1000);
        s.boolean("loop", cfg.replay.loop_forever);
    }

    {
        auto s = root.child("credentials", {"user", "sysadmin", "dealer"});
        auto account = [&](const char* key, store::Account& acc) {
            auto a = s.child(key, {"username", "password"});
            if (a.str("username", acc.username) && acc.username.empty()) a.fail("username", "must not be empty");
            if (a.str("password", acc.password) && acc.password.empty()) a.fail("password", "must not be empty");
        };
        account("user", cfg.credentials.user);
        account("sysadmin", cfg.credentials.sysadmin);
        account("dealer", cfg.credentials.dealer);
        const auto& c = cfg.credentials;
        if (c.user.username == c.sysadmin.username || c.user.username == c.dealer.username ||
            c.sysadmin.username == c.dealer.username)
            s.fail("", "usernames must be distinct");
    }

    std::string path;
    if (root.str("command_table", path)) {
        auto p = resolve(base, path);
        std::error_code ec;
        if (!fs::is_regular_file(p, ec)) {
            root.fail("command_table", "file does not exist: " + p.string());
        } else {
            try {
                telnet::CommandTable::load(p);
                cfg.command_table = p;
            } catch (const std::exception& e) {
                root.fail("command_table", e.what());
            }
        }
    }

    auto output_dir = [&](const char* key, const char* fallback, fs::path& out) {
        std::string v = fallback;
        root.str(key, v);
        out = resolve(base, v);
        if (auto problem = check_output_dir(out)) root.fail(key, *problem);
    };
    output_dir("log_dir", "logs", cfg.log_dir);
    output_dir("quarantine_dir", "quarantine", cfg.quarantine_dir);

    std::string db = "honeynet.db";
    root.str("database", db);
    if (db == ":memory:") {
        cfg.database = db;
    } else {
        cfg.database = resolve(base, db);
        std::error_code ec;
        if (fs::is_directory(cfg.database, ec))
            root.fail("database", "is a directory: " + cfg.database.string());
        else if (auto problem = check_output_dir(cfg.database.parent_path()))
            root.fail("database", *problem);
    }

    root.integer("upload_cap_bytes", cfg.upload_cap_bytes, 1, 1ull << 32);
    root.integer("seed", cfg.seed, 0, UINT64_MAX);

    // Only worth reading once the rest is known good; a broken recording is
    // then reported with the parser's own message.
    if (errors.empty()) {
        try {
            auto rec = replay::load_recording_file(cfg.recording.string(), cfg.sentence_interval);
            if (rec.entries.empty()) errors.push_back({"replay.recording", "recording has no sentences"});
        } catch (const std::exception& e) {
            errors.push_back({"replay.recording", e.what()});
        }
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

HoneynetConfig load_config(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError({{"", "cannot open " + file.string()}});
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({{"", std::string("not valid JSON: ") + e.what()}});
    }
    return parse_config(j, fs::absolute(file).parent_path());
}

json HoneynetConfig::to_json() const {
    json headers = json::array();
    for (const auto& [k, v] : web.mimicry_headers) headers.push_back({k, v});
    json j = {
        {"version", kConfigVersion},
        {"ship",
         {{"name", ship.ship_name},
          {"call_sign", ship.call_sign},
          {"mmsi", ship.mmsi},
          {"mac_address", ship.mac_address},
          {"firmware_version", ship.firmware_version},
          {"model", ship.model},
          {"serial", ship.serial}}},
        {"start_position",
         {{"latitude", start_position.latitude},
          {"longitude", start_position.longitude},
          {"heading", start_position.heading_true},
          {"speed", start_position.speed_over_ground}}},
        {"antenna", {{"satellite_longitude", antenna.satellite_longitude_deg}}},
        {"web",
         {{"listen", web.listen.str()},
          {"headers", headers},
          {"session_ttl_s", std::chrono::duration_cast<std::chrono::seconds>(web.session_ttl).count()},
          {"read_timeout_s", std::chrono::duration_cast<std::chrono::seconds>(web.read_timeout).count()}}},
        {"telnet",
         {{"listen", telnet.listen.str()},
          {"prompt", telnet.prompt},
          {"max_attempts", telnet.max_attempts},
          {"idle_timeout_s", std::chrono::duration_cast<std::chrono::seconds>(telnet.idle_timeout).count()},
          {"reboot_downtime_s", std::chrono::duration_cast<std::chrono::seconds>(telnet.reboot_downtime).count()}}},
        {"internal_endpoint", internal.str()},
        {"replay",
         {{"recording", recording.string()},
          {"rate", replay.rate_multiplier},
          {"sentence_interval_ms", sentence_interval.count()},
          {"loop_gap_ms", replay.interval.count()},
          {"loop", replay.loop_forever}}},
        {"credentials",
         {{"user", {{"username", credentials.user.username}, {"password", credentials.user.password}}},
          {"sysadmin", {{"username", credentials.sysadmin.username}, {"password", credentials.sysadmin.password}}},
          {"dealer", {{"username", credentials.dealer.username}, {"password", credentials.dealer.password}}}}},
        {"log_dir", log_dir.string()},
        {"quarantine_dir", quarantine_dir.string()},
        {"database", database.string()},
        {"upload_cap_bytes", upload_cap_bytes},
        {"seed", seed},
    };
    if (web.asset_dir) j["web"]["asset_dir"] = web.asset_dir->string();
    if (command_table) j["command_table"] = command_table->string();
    return j;
}

}  // namespace honeynet::config
