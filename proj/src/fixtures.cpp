#include "honeynet/fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

namespace honeynet::fixtures {

namespace fs = std::filesystem;
using json = nlohmann::json;
using eventlog::LogEvent;
using eventlog::Service;

namespace {

using Rng = std::mt19937_64;

// 2025-04-03T00:00:00Z, thirty days of traffic.
const Timestamp kStart{std::chrono::seconds{1743638400}};
constexpr std::int64_t kWindowMs = 30LL * 24 * 3600 * 1000;

std::uint64_t below(Rng& r, std::uint64_t n) { return r() % n; }

Timestamp random_ts(Rng& r, std::int64_t margin_ms = 0) {
    return kStart + std::chrono::milliseconds{static_cast<std::int64_t>(below(r, kWindowMs - margin_ms))};
}

std::vector<std::string> make_ips(Rng& r, std::size_t n, std::set<std::string>& used) {
    // First octets outside private, loopback, multicast and documentation space.
    static const int kFirst[] = {1,  2,  5,  14, 23, 27, 31, 36, 37, 39, 42, 43, 45, 46, 47, 49, 58, 59, 60,
                                 61, 62, 77, 78, 79, 80, 81, 82, 83, 85, 86, 87, 88, 89, 91, 93, 94, 95, 101,
                                 103, 104, 106, 110, 111, 112, 113, 114, 115, 116, 117, 118, 119, 120, 121,
                                 122, 123, 124, 125, 139, 141, 144, 146, 152, 159, 162, 164, 167, 171, 175,
                                 176, 177, 178, 179, 180, 181, 182, 183, 185, 186, 187, 188, 189, 190, 191,
                                 193, 194, 195, 196, 197, 200, 201, 202, 210, 211, 212, 213, 217, 218, 219,
                                 220, 221, 222, 223};
    std::vector<std::string> out;
    while (out.size() < n) {
        std::string ip = std::to_string(kFirst[below(r, std::size(kFirst))]) + "." + std::to_string(below(r, 256)) +
                         "." + std::to_string(below(r, 256)) + "." + std::to_string(1 + below(r, 254));
        if (used.insert(ip).second) out.push_back(ip);
    }
    return out;
}

std::string hex_id(Rng& r, const char* prefix) {
    static const char* digits = "0123456789abcdef";
    std::string s = prefix;
    auto v = r();
    for (int i = 0; i < 12; ++i) s += digits[(v >> (i * 4)) & 0xf];
    return s;
}

LogEvent make_event(Timestamp ts, Service svc, std::string event, const std::string& ip, std::uint16_t port,
                    std::optional<std::string> session, json detail) {
    LogEvent e;
    e.ts = truncate_to_ms(ts);
    e.service = svc;
    e.event = std::move(event);
    e.src_ip = ip;
    e.src_port = port;
    e.session = std::move(session);
    e.detail = std::move(detail);
    return e;
}

json http_detail(const std::string& method, const std::string& path, int status, const std::string& agent,
                 std::optional<std::string> route, std::size_t body_size = 0) {
    return {{"method", method},
            {"path", path},
            {"query", ""},
            {"status", status},
            {"headers", {{"user-agent", agent}, {"host", "vsat"}}},
            {"body_size", body_size},
            {"route", route ? json(*route) : json(nullptr)},
            {"probe", !route.has_value()}};
}

const char* const kAgents[] = {"Mozilla/5.0 zgrab/0.x", "python-requests/2.31.0", "curl/8.4.0",
                               "Mozilla/5.0 (Windows NT 10.0; Win64; x64)", "Go-http-client/1.1"};

struct ProbeSpec {
    const char* method;
    const char* path;
    int status;
    const char* route;  // nullptr for paths the portal does not serve
};
const ProbeSpec kWebRequests[] = {
    {"GET", "/", 302, "/"},
    {"GET", "/Login", 200, "/Login"},
    {"GET", "/Login", 200, "/Login"},
    {"GET", "/cgi-bin/account_mgr.cgi", 404, nullptr},
    {"POST", "/cgi-bin/account_mgr.cgi", 404, nullptr},
    {"GET", "/favicon.ico", 404, nullptr},
    {"GET", "/.env", 404, nullptr},
    {"GET", "/boaform/admin/formLogin", 404, nullptr},
    {"POST", "/GponForm/diag_Form", 404, nullptr},
    {"GET", "/css/style.css", 200, "/css/"},
};

/// Sorts, writes and tallies the generated events.
CorpusTruth finish(const fs::path& dir, std::vector<LogEvent>& events) {
    std::stable_sort(events.begin(), events.end(), [](const LogEvent& a, const LogEvent& b) { return a.ts < b.ts; });
    fs::create_directories(dir);

    CorpusTruth t;
    t.events = events.size();
    std::map<std::string, std::string> files;
    std::map<std::string, std::set<Service>> seen;
    std::map<std::pair<std::string, std::string>, std::uint64_t> creds;
    for (const auto& e : events) {
        files[eventlog::file_name(e.service, e.ts)] += eventlog::to_line(e) + "\n";
        ++t.daily[{format_date(e.ts), std::string(eventlog::service_name(e.service))}];
        seen[e.src_ip].insert(e.service);
        if (e.event == "login.failed" || e.event == "login.success")
            ++creds[{e.detail["username"].get<std::string>(), e.detail["password"].get<std::string>()}];
    }
    t.distinct_sources = seen.size();
    for (const auto& [ip, svcs] : seen)
        if (svcs.count(Service::Web) && svcs.count(Service::Telnet)) ++t.dual_service_sources;
    for (const auto& [k, n] : creds) t.credentials.push_back({k.first, k.second, n});
    std::stable_sort(t.credentials.begin(), t.credentials.end(),
                     [](const auto& a, const auto& b) { return a.count > b.count; });

    for (const auto& [name, body] : files) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        out << body;
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        t.files.push_back(name);
    }
    return t;
}

}  // namespace

json CorpusTruth::to_json() const {
    json daily_rows = json::array();
    for (const auto& [k, n] : daily) daily_rows.push_back({{"date", k.first}, {"service", k.second}, {"count", n}});
    json cred_rows = json::array();
    for (const auto& c : credentials)
        cred_rows.push_back({{"username", c.username}, {"password", c.password}, {"count", c.count}});
    return {{"events", events},
            {"distinct_sources", distinct_sources},
            {"dual_service_sources", dual_service_sources},
            {"daily", daily_rows},
            {"credentials", cred_rows},
            {"files", files}};
}

void write_truth(const fs::path& dir, const CorpusTruth& truth) {
    std::ofstream out(dir / "truth.json", std::ios::trunc);
    out << truth.to_json().dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + (dir / "truth.json").string());
}

std::vector<CredentialRow> read_credential_table(const fs::path& csv) {
    std::ifstream in(csv);
    if (!in) throw std::runtime_error("cannot open " + csv.string());
    std::vector<CredentialRow> rows;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (++n == 1 || trim(line).empty()) continue;
        if (line.back() == '\r') line.pop_back();
        auto c1 = line.find(',');
        auto c2 = line.rfind(',');
        if (c1 == std::string::npos || c1 == c2)
            throw std::runtime_error(csv.string() + ":" + std::to_string(n) + ": expected username,password,count");
        CredentialRow row{line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1), 0};
        try {
            row.count = std::stoull(line.substr(c2 + 1));
        } catch (const std::exception&) {
            throw std::runtime_error(csv.string() + ":" + std::to_string(n) + ": bad count");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CorpusTruth write_credential_corpus(const fs::path& dir, const std::vector<CredentialRow>& top,
                                    const CredentialCorpusOptions& opt) {
    if (top.empty()) throw std::invalid_argument("credential table is empty");
    Rng rng(opt.seed);
    std::uint64_t floor = top.front().count;
    std::set<std::pair<std::string, std::string>> reserved;
    for (const auto& row : top) {
        floor = std::min(floor, row.count);
        reserved.insert({row.username, row.password});
    }

    // Attempt multiset: the declared rows, then a long tail that stays below the smallest declared count.
    std::vector<std::pair<std::string, std::string>> attempts;
    for (const auto& row : top)
        for (std::uint64_t i = 0; i < row.count; ++i) attempts.emplace_back(row.username, row.password);

    static const char* const kUsers[] = {"root",    "admin", "user",    "guest", "support", "default", "supervisor",
                                         "Administrator", "pi", "test", "service", "tech", "telnetadmin", "ubnt"};
    static const char* const kPasswords[] = {"123456", "password", "12345",  "1234",     "root",    "admin",
                                             "default", "pass",    "guest",  "user",     "support", "vizxv",
                                             "xc3511", "888888",   "54321",  "juantech", "anko",    "dreambox",
                                             "system", "klv123",   "Zte521", "1111",     "666666",  "smcadmin",
                                             "tech",   "00000000", "realtek", "7ujMko0vizxv", ""};
    std::vector<std::pair<std::string, std::string>> tail;
    for (const char* u : kUsers)
        for (const char* p : kPasswords)
            if (!reserved.count({u, p})) tail.emplace_back(u, p);
    std::shuffle(tail.begin(), tail.end(), rng);
    tail.resize(std::min<std::size_t>(tail.size(), 160));
    std::uint64_t tail_max = std::min<std::uint64_t>(floor > 1 ? floor - 1 : 0, 150);
    if (tail_max > 0)
        for (const auto& combo : tail) {
            auto n = 1 + below(rng, tail_max);
            for (std::uint64_t i = 0; i < n; ++i) attempts.push_back(combo);
        }
    // A device-specific role name shows up rarely, with wrong passwords.
    attempts.emplace_back("User", "1001");
    attempts.emplace_back("User", "User");
    std::shuffle(attempts.begin(), attempts.end(), rng);

    std::set<std::string> used;
    auto telnet_only = make_ips(rng, opt.telnet_only_sources, used);
    auto web_only = make_ips(rng, opt.web_only_sources, used);
    auto dual = make_ips(rng, opt.dual_sources, used);
    std::vector<std::string> telnet_ips = telnet_only;
    telnet_ips.insert(telnet_ips.end(), dual.begin(), dual.end());
    std::vector<std::string> web_ips = web_only;
    web_ips.insert(web_ips.end(), dual.begin(), dual.end());

    std::vector<LogEvent> events;
    std::size_t next = 0;
    std::size_t session_no = 0;
    while (next < attempts.size()) {
        // Every Telnet source gets one session before any repeats.
        const auto& ip = session_no < telnet_ips.size() ? telnet_ips[session_no] : telnet_ips[below(rng, telnet_ips.size())];
        ++session_no;
        auto sid = hex_id(rng, "t-");
        auto port = static_cast<std::uint16_t>(1024 + below(rng, 64000));
        auto ts = random_ts(rng, 60'000);
        events.push_back(make_event(ts, Service::Telnet, "connect", ip, port, sid, json::object()));
        std::size_t n = std::min<std::size_t>(1 + below(rng, 3), attempts.size() - next);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& [u, p] = attempts[next++];
            ts += std::chrono::milliseconds{1500 + static_cast<std::int64_t>(below(rng, 2000))};
            events.push_back(make_event(ts, Service::Telnet, "login.failed", ip, port, sid,
                                        {{"username", u}, {"password", p}, {"attempt", k + 1}}));
        }
        ts += std::chrono::milliseconds{200};
        events.push_back(make_event(ts, Service::Telnet, "disconnect", ip, port, sid,
                                    {{"reason", n == 3 ? "max_attempts" : "peer_closed"}, {"duration_ms", 0}}));
    }
    while (session_no < telnet_ips.size()) {
        // Sources that connected but never typed anything.
        const auto& ip = telnet_ips[session_no++];
        auto ts = random_ts(rng, 60'000);
        auto port = static_cast<std::uint16_t>(1024 + below(rng, 64000));
        events.push_back(make_event(ts, Service::Telnet, "connect", ip, port, hex_id(rng, "t-"), json::object()));
    }

    for (const auto& ip : web_ips) {
        auto visits = 1 + below(rng, 3);
        for (std::uint64_t v = 0; v < visits; ++v) {
            const auto& req = kWebRequests[below(rng, std::size(kWebRequests))];
            const char* agent = kAgents[below(rng, std::size(kAgents))];
            auto ts = random_ts(rng, 10'000);
            auto port = static_cast<std::uint16_t>(1024 + below(rng, 64000));
            events.push_back(make_event(ts, Service::Web, "connect", ip, port, std::nullopt, json::object()));
            events.push_back(make_event(ts + std::chrono::milliseconds{40}, Service::Web, "http.request", ip, port,
                                        std::nullopt,
                                        http_detail(req.method, req.path, req.status, agent,
                                                    req.route ? std::optional<std::string>(req.route) : std::nullopt)));
        }
    }
    return finish(dir, events);
}

CorpusTruth write_synthetic_corpus(const fs::path& dir, std::size_t count, std::uint64_t seed, std::size_t source_pool) {
    Rng rng(seed);
    std::set<std::string> used;
    auto pool = make_ips(rng, source_pool, used);
    static const std::pair<const char*, const char*> kCreds[] = {
        {"admin", "1234"}, {"root", "aquario"}, {"root", "admin"}, {"root", "root"},   {"root", ""},
        {"root", "hi3518"}, {"admin", "admin"}, {"admin", "password"}, {"ubnt", "ubnt"}, {"guest", "guest"},
        {"support", "support"}, {"user", "user"}, {"root", "vizxv"}, {"root", "xc3511"}, {"admin", ""},
    };
    static const char* const kLines[] = {"STATUS", "HELP", "VER", "AZ", "GPS", "REBOOT", "uname -a", "cat /proc/cpuinfo"};

    std::vector<LogEvent> events;
    events.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // Skew toward a busy minority of sources.
        std::size_t idx = below(rng, 4) == 0 ? below(rng, std::max<std::size_t>(1, pool.size() / 20)) : below(rng, pool.size());
        const auto& ip = pool[idx];
        auto ts = random_ts(rng);
        auto port = static_cast<std::uint16_t>(1024 + below(rng, 64000));
        auto roll = below(rng, 100);
        if (below(rng, 100) < 65) {
            auto sid = hex_id(rng, "t-");
            if (roll < 30) {
                events.push_back(make_event(ts, Service::Telnet, "connect", ip, port, sid, json::object()));
            } else if (roll < 80) {
                const auto& [u, p] = kCreds[below(rng, std::size(kCreds))];
                events.push_back(make_event(ts, Service::Telnet, "login.failed", ip, port, sid,
                                            {{"username", u}, {"password", p}, {"attempt", 1 + below(rng, 3)}}));
            } else if (roll < 82) {
                events.push_back(make_event(ts, Service::Telnet, "login.success", ip, port, sid,
                                            {{"username", "User"}, {"password", "seatel1"}, {"role", "User"},
                                             {"default_credential", true}}));
            } else if (roll < 97) {
                std::string line = kLines[below(rng, std::size(kLines))];
                events.push_back(make_event(ts, Service::Telnet, "cli.command", ip, port, sid,
                                            {{"command", line.substr(0, line.find(' '))},
                                             {"args", json::array()},
                                             {"line", line},
                                             {"result", "ok"}}));
            } else {
                events.push_back(make_event(ts, Service::Telnet, "disconnect", ip, port, sid,
                                            {{"reason", "peer_closed"}, {"duration_ms", below(rng, 60000)}}));
            }
        } else {
            if (roll < 30) {
                events.push_back(make_event(ts, Service::Web, "connect", ip, port, std::nullopt, json::object()));
            } else if (roll < 90) {
                const auto& req = kWebRequests[below(rng, std::size(kWebRequests))];
                events.push_back(make_event(ts, Service::Web, "http.request", ip, port, std::nullopt,
                                            http_detail(req.method, req.path, req.status,
                                                        kAgents[below(rng, std::size(kAgents))],
                                                        req.route ? std::optional<std::string>(req.route) : std::nullopt)));
            } else if (roll < 97) {
                const auto& [u, p] = kCreds[below(rng, std::size(kCreds))];
                events.push_back(make_event(ts, Service::Web, "login.failed", ip, port, std::nullopt,
                                            {{"username", u}, {"password", p}}));
            } else if (roll < 98) {
                events.push_back(make_event(ts, Service::Web, "status.direct_access", ip, port, std::nullopt,
                                            {{"path", "/cgi-bin/getSysStatus"}}));
            } else {
                events.push_back(make_event(ts, Service::Web, "escalation.attempt", ip, port, "w-" + hex_id(rng, ""),
                                            {{"path", "/MenuDealerGX.html"}, {"method", "GET"}, {"role", "User"},
                                             {"required", "Dealer"}}));
            }
        }
    }
    return finish(dir, events);
}

}  // namespace honeynet::fixtures
