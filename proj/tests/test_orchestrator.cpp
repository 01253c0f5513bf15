#include "honeynet/config.hpp"
#include "honeynet/orchestrator.hpp"
#include "support/clients.hpp"
#include "support/harness.hpp"
#include "support/process.hpp"

#include <doctest.h>

#include <arpa/inet.h>
#include <ifaddrs.h>
#include <netinet/in.h>

#include <fstream>
#include <thread>

using namespace honeynet;
using config::ConfigError;
using config::HoneynetConfig;
using orchestrator::Component;
using orchestrator::Honeynet;
using json = nlohmann::json;
namespace fs = std::filesystem;
using std::chrono::milliseconds;

namespace {

const fs::path kData = HONEYNET_DATA_DIR;

template <class Pred>
bool eventually(Pred pred, milliseconds timeout = milliseconds{5000}) {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (std::chrono::steady_clock::now() < deadline) {
        if (pred()) return true;
        std::this_thread::sleep_for(milliseconds{20});
    }
    return pred();
}

std::uint16_t free_udp_port() {
    auto rx = net::UdpReceiver::bind({"127.0.0.1", 0});
    return rx.local().port;
}

std::uint16_t free_tcp_port() {
    auto l = net::TcpListener::bind({"127.0.0.1", 0});
    return l.local().port;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// A scratch directory holding a recording and a config that listens on
/// ephemeral loopback ports.
struct Site {
    harness::TempDir dir;
    json doc;

    Site() {
        fs::copy_file(kData / "voyage.nmea", dir.path / "voyage.nmea");
        doc = {
            {"web", {{"listen", "127.0.0.1:0"}, {"read_timeout_s", 2}}},
            {"telnet", {{"listen", "127.0.0.1:0"}, {"reboot_downtime_s", 1}}},
            {"internal_endpoint", "127.0.0.1:" + std::to_string(free_udp_port())},
            {"replay", {{"recording", "voyage.nmea"}, {"rate", 50.0}}},
            {"seed", 99},
        };
    }
    HoneynetConfig config() const { return config::parse_config(doc, dir.path); }
    fs::path write(const std::string& name = "honeynet.json") const {
        auto p = dir.path / name;
        write_file(p, doc.dump(2));
        return p;
    }
};

std::optional<std::string> telnet_login(testclient::Telnet& c, const std::string& user, const std::string& pass) {
    if (!c.read_until("username: ")) return std::nullopt;
    c.send_line(user);
    if (!c.read_until("password: ")) return std::nullopt;
    c.send_line(pass);
    return c.read_until("ACU> ");
}

std::vector<eventlog::LogEvent> restarts_of(const eventlog::MemorySink& log, std::string_view component) {
    std::vector<eventlog::LogEvent> out;
    for (auto& e : log.of_type("service.restart"))
        if (e.detail.value("component", "") == component) out.push_back(e);
    return out;
}

/// First IPv4 address of an interface that is up and not loopback.
std::optional<std::string> external_ipv4() {
    ifaddrs* list = nullptr;
    if (getifaddrs(&list) != 0) return std::nullopt;
    std::optional<std::string> found;
    for (auto* a = list; a && !found; a = a->ifa_next) {
        if (!a->ifa_addr || a->ifa_addr->sa_family != AF_INET) continue;
        auto* sin = reinterpret_cast<sockaddr_in*>(a->ifa_addr);
        char buf[INET_ADDRSTRLEN];
        inet_ntop(AF_INET, &sin->sin_addr, buf, sizeof buf);
        std::string ip = buf;
        if (ip.rfind("127.", 0) != 0) found = ip;
    }
    freeifaddrs(list);
    return found;
}

}  // namespace

TEST_CASE("a minimal config file gets every default filled in") {
    harness::TempDir dir;
    fs::copy_file(kData / "voyage.nmea", dir.path / "voyage.nmea");
    write_file(dir.path / "min.json", R"({"replay": {"recording": "voyage.nmea"}})");

    auto cfg = config::load_config(dir.path / "min.json");
    CHECK(cfg.ship.mmsi == "248731000");
    CHECK(cfg.ship.ship_name == "MV NORDIC TERN");
    CHECK(cfg.web.listen == net::Endpoint{"0.0.0.0", 80});
    CHECK(cfg.telnet.listen == net::Endpoint{"0.0.0.0", 23});
    CHECK(cfg.internal == net::Endpoint{"127.0.0.1", 10110});
    CHECK(cfg.recording == dir.path / "voyage.nmea");
    CHECK(cfg.replay.rate_multiplier == 1.0);
    CHECK(cfg.replay.loop_forever);
    CHECK(cfg.credentials.user.username == "User");
    CHECK(cfg.credentials.user.password == "seatel1");
    CHECK_FALSE(cfg.command_table);
    CHECK(cfg.log_dir == dir.path / "logs");
    CHECK(cfg.quarantine_dir == dir.path / "quarantine");
    CHECK(cfg.database == dir.path / "honeynet.db");
    CHECK(cfg.upload_cap_bytes == 64ull * 1024 * 1024);
    CHECK(cfg.telnet.reboot_downtime == std::chrono::seconds{20});
    REQUIRE(cfg.web.mimicry_headers.size() == 3);
    CHECK(cfg.web.mimicry_headers[0].first == "Server");
    // validation does not create anything
    CHECK_FALSE(fs::exists(cfg.log_dir));
}

TEST_CASE("a bad mmsi is one error naming the field") {
    Site site;
    site.doc["ship"] = {{"mmsi", "12"}};
    try {
        site.config();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.errors().size() == 1);
        CHECK(e.errors()[0].path == "ship.mmsi");
        CHECK(std::string(e.what()).find("ship.mmsi") != std::string::npos);
    }
    for (std::string bad : {"2487310000", "24873100A", "", " 48731000"}) {
        site.doc["ship"]["mmsi"] = bad;
        CHECK_THROWS_AS(site.config(), ConfigError);
    }
    site.doc["ship"]["mmsi"] = "636012345";
    CHECK(site.config().ship.mmsi == "636012345");
}

TEST_CASE("validation collects every error with its path") {
    Site site;
    site.doc["ship"] = {{"mmsi", "12"}, {"mac_address", "00:0C:8B"}, {"call_sign", 7}};
    site.doc["web"]["listen"] = "0.0.0.0:8080";
    site.doc["web"]["headers"] = json::array({json::array({"Server", "x\r\ny"}), json::array({"Content-Length", "1"})});
    site.doc["telnet"]["listen"] = "0.0.0.0:8080";
    site.doc["internal_endpoint"] = "10.0.0.5:10110";
    site.doc["replay"] = {{"recording", "missing.nmea"}, {"rate", 0}};
    site.doc["credentials"] = {{"dealer", {{"password", ""}}}};
    site.doc["colour"] = "blue";
    site.doc["command_table"] = "nope.json";

    try {
        site.config();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        for (const char* path : {"ship.mmsi", "ship.mac_address", "ship.call_sign", "web.headers[0]", "web.headers[1]",
                                 "telnet.listen", "internal_endpoint", "replay.recording", "replay.rate",
                                 "credentials.dealer.password", "colour", "command_table"}) {
            CAPTURE(path);
            CHECK(e.mentions(path));
        }
        CHECK(e.errors().size() == 12);
    }
}

TEST_CASE("a missing recording refuses startup") {
    Site site;
    site.doc["replay"]["recording"] = "gone.nmea";
    try {
        site.config();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.errors().size() == 1);
        CHECK(e.errors()[0].path == "replay.recording");
        CHECK(e.errors()[0].message.find("gone.nmea") != std::string::npos);
    }
    site.doc["replay"].erase("recording");
    try {
        site.config();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.mentions("replay.recording"));
    }
}

TEST_CASE("recordings and command tables are checked by content too") {
    Site site;
    write_file(site.dir.path / "empty.nmea", "");
    site.doc["replay"]["recording"] = "empty.nmea";
    CHECK_THROWS_AS(site.config(), ConfigError);

    site.doc["replay"]["recording"] = "voyage.nmea";
    write_file(site.dir.path / "cmds.json", R"({"commands": [{"name": "X", "response": "{nonsense}"}]})");
    site.doc["command_table"] = "cmds.json";
    try {
        site.config();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.mentions("command_table"));
    }
    site.doc["command_table"] = (kData / "commands.json").string();
    CHECK(site.config().command_table == kData / "commands.json");
}

TEST_CASE("file-level problems and output directories") {
    harness::TempDir dir;
    write_file(dir.path / "broken.json", "{\"replay\": ");
    try {
        config::load_config(dir.path / "broken.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.errors().size() == 1);
        CHECK(e.errors()[0].path.empty());
    }
    CHECK_THROWS_AS(config::load_config(dir.path / "absent.json"), ConfigError);
    write_file(dir.path / "array.json", "[]");
    CHECK_THROWS_AS(config::load_config(dir.path / "array.json"), ConfigError);

    Site site;
    write_file(site.dir.path / "plainfile", "x");
    site.doc["log_dir"] = "plainfile";
    site.doc["quarantine_dir"] = "plainfile/sub";
    try {
        site.config();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.mentions("log_dir"));
        CHECK(e.mentions("quarantine_dir"));
    }
    site.doc["log_dir"] = "state/deep/logs";  // created at startup
    site.doc.erase("quarantine_dir");
    CHECK_NOTHROW(site.config());
}

TEST_CASE("the shipped configuration validates and its effective form round-trips") {
    auto cfg = config::load_config(kData / "honeynet.json");
    CHECK(cfg.web.listen.port == 80);
    CHECK(cfg.telnet.listen.port == 23);
    CHECK(cfg.internal.host == "127.0.0.1");
    CHECK(cfg.recording == fs::absolute(kData / "voyage.nmea").lexically_normal());

    auto again = config::parse_config(cfg.to_json(), "/nonexistent-base");
    CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("start: both ports accept within 5 s and the feed reaches the vessel") {
    Site site;
    eventlog::MemorySink mirror(SystemClock::instance());
    auto t0 = std::chrono::steady_clock::now();
    Honeynet hn(site.config(), SystemClock::instance(), {}, &mirror);
    hn.start();

    auto web = hn.web_endpoint();
    auto tel = hn.telnet_endpoint();
    CHECK(web.port != 0);
    CHECK(tel.port != 0);
    CHECK(web.port != tel.port);
    CHECK(eventually([&] { return net::tcp_connect(web, Millis{500}).has_value(); }));
    CHECK(eventually([&] { return net::tcp_connect(tel, Millis{500}).has_value(); }));
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds{5});

    REQUIRE(eventually([&] { return hn.ingested() >= 10; }));
    auto snap = hn.device().vessel().current_snapshot();
    CHECK(snap.ship_name == "MV NORDIC TERN");
    CHECK(snap.fix.latitude == doctest::Approx(53.546).epsilon(0.001));
    CHECK(snap.fix.heading_true > 270.0);  // from the recording, not the 45.0 start default

    auto login = testclient::http(web, "POST", "/Login", "", "username=User&password=seatel1");
    REQUIRE(login);
    auto status = testclient::http(web, "GET", "/cgi-bin/getSysStatus", testclient::cookie_from(*login));
    REQUIRE(status);
    CHECK(status->status == 200);
    CHECK(json::parse(status->body)["ship"]["mmsi"] == "248731000");

    for (auto c : orchestrator::kComponents) CHECK(hn.alive(c));
    hn.stop();
    for (auto c : orchestrator::kComponents) CHECK_FALSE(hn.alive(c));
    CHECK_FALSE(net::tcp_connect(web, Millis{300}));
    CHECK(mirror.of_type("service.restart").empty());
}

TEST_CASE("a killed web service comes back on the same port; telnet is unaffected") {
    Site site;
    eventlog::MemorySink mirror(SystemClock::instance());
    Honeynet hn(site.config(), SystemClock::instance(), {}, &mirror);
    hn.start();
    auto web = hn.web_endpoint();

    testclient::Telnet session(hn.telnet_endpoint());
    REQUIRE(telnet_login(session, "User", "seatel1"));

    hn.kill(Component::Web);
    CHECK_FALSE(hn.alive(Component::Web));
    CHECK_FALSE(net::tcp_connect(web, Millis{300}));

    REQUIRE(eventually([&] { return hn.restarts(Component::Web) == 1 && hn.alive(Component::Web); }));
    CHECK(hn.web_endpoint() == web);
    auto page = testclient::http(web, "GET", "/Login");
    REQUIRE(page);
    CHECK(page->status == 200);

    // the session opened before the crash is still served
    session.send_line("VER");
    CHECK(session.read_until("ACU> "));
    CHECK(hn.restarts(Component::Telnet) == 0);
    CHECK(hn.alive(Component::Telnet));

    auto events = restarts_of(mirror, "web");
    REQUIRE(events.size() == 1);
    CHECK(events[0].service == eventlog::Service::Web);
    CHECK(events[0].detail["result"] == "ok");
    CHECK(events[0].detail["attempt"] == 1);
    CHECK(restarts_of(mirror, "telnet").empty());
}

TEST_CASE("restart backoff doubles while the port stays taken, up to the cap") {
    Site site;
    eventlog::MemorySink mirror(SystemClock::instance());
    orchestrator::SupervisorOptions opt;
    opt.backoff_initial = milliseconds{100};
    opt.backoff_max = milliseconds{400};
    Honeynet hn(site.config(), SystemClock::instance(), opt, &mirror);
    hn.start();
    auto tel = hn.telnet_endpoint();

    std::optional<net::TcpListener> squatter;
    {
        // take the port before the supervisor's first retry can
        hn.kill(Component::Telnet);
        squatter = net::TcpListener::bind(tel);
    }
    REQUIRE(eventually([&] { return restarts_of(mirror, "telnet").size() >= 4; }));
    auto failed = restarts_of(mirror, "telnet");
    std::vector<std::int64_t> backoff;
    for (auto& e : failed) {
        CHECK(e.detail["result"] == "failed");
        backoff.push_back(e.detail["backoff_ms"].get<std::int64_t>());
    }
    CHECK(backoff[0] == 100);
    CHECK(backoff[1] == 200);
    CHECK(backoff[2] == 400);
    CHECK(backoff[3] == 400);

    squatter.reset();
    REQUIRE(eventually([&] { return hn.alive(Component::Telnet); }));
    CHECK(hn.restarts(Component::Telnet) == 1);
    CHECK(restarts_of(mirror, "telnet").back().detail["result"] == "ok");
    testclient::Telnet c(tel);
    CHECK(c.read_until("username: "));
}

TEST_CASE("the replayer and ingester are supervised as well") {
    Site site;
    eventlog::MemorySink mirror(SystemClock::instance());
    Honeynet hn(site.config(), SystemClock::instance(), {}, &mirror);
    hn.start();
    REQUIRE(eventually([&] { return hn.ingested() > 0; }));

    hn.kill(Component::Ingester);
    hn.kill(Component::Replayer);
    REQUIRE(eventually([&] { return hn.alive(Component::Ingester) && hn.alive(Component::Replayer); }));
    CHECK(hn.restarts(Component::Ingester) == 1);
    CHECK(hn.restarts(Component::Replayer) == 1);
    auto before = hn.ingested();
    CHECK(eventually([&] { return hn.ingested() > before + 5; }));
    CHECK(restarts_of(mirror, "ingester").size() == 1);
    CHECK(restarts_of(mirror, "replayer").front().service == eventlog::Service::Replayer);
}

TEST_CASE("a listen port in use at startup is fatal and leaves nothing running") {
    Site site;
    auto squatter = net::TcpListener::bind({"127.0.0.1", 0});
    site.doc["web"]["listen"] = squatter.local().str();
    Honeynet hn(site.config());
    try {
        hn.start();
        FAIL("expected StartupError");
    } catch (const orchestrator::StartupError& e) {
        std::string what = e.what();
        CHECK(what.find("web") != std::string::npos);
        CHECK(what.find(squatter.local().str()) != std::string::npos);
        CHECK(what.find("address already in use") != std::string::npos);
    }
    for (auto c : orchestrator::kComponents) CHECK_FALSE(hn.alive(c));
    // the internal endpoint was released again
    CHECK_NOTHROW(net::UdpReceiver::bind(site.config().internal));
    CHECK(testproc::owned("tcp").size() == 1);  // only the squatter
}

TEST_CASE("stop flushes every event as a complete JSON line") {
    Site site;
    eventlog::MemorySink mirror(SystemClock::instance());
    auto cfg = site.config();
    {
        Honeynet hn(cfg, SystemClock::instance(), {}, &mirror);
        hn.start();
        for (int i = 0; i < 20; ++i) testclient::http(hn.web_endpoint(), "GET", "/probe" + std::to_string(i));
        testclient::Telnet t(hn.telnet_endpoint());
        REQUIRE(telnet_login(t, "root", "admin") == std::nullopt);  // wrong password: login prompt again
        hn.stop();
    }
    std::size_t lines = 0;
    for (const auto& f : fs::directory_iterator(cfg.log_dir)) {
        auto text = testproc::slurp(f.path());
        REQUIRE_FALSE(text.empty());
        CHECK(text.back() == '\n');
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            CHECK(eventlog::parse_line(line).has_value());
            ++lines;
        }
    }
    CHECK(lines == mirror.events().size());
    CHECK(lines >= 41);  // 20 connects + 20 requests + telnet connect
}

TEST_CASE("exposure: only the web and telnet ports listen; the feed is loopback-only") {
    Site site;
    site.doc["web"]["listen"] = "0.0.0.0:" + std::to_string(free_tcp_port());
    site.doc["telnet"]["listen"] = "0.0.0.0:" + std::to_string(free_tcp_port());
    site.doc["replay"]["loop"] = false;
    site.doc["replay"]["rate"] = 1000.0;
    auto cfg = site.config();
    Honeynet hn(cfg);
    hn.start();

    std::set<std::uint16_t> listening;
    for (const auto& e : testproc::owned("tcp")) {
        if (e.state != 0x0A) continue;
        listening.insert(e.local_port);
        CHECK(e.local_ip == "0.0.0.0");
    }
    CHECK(testproc::owned("tcp6").empty());
    CHECK(listening == std::set<std::uint16_t>{cfg.web.listen.port, cfg.telnet.listen.port});

    auto udp = testproc::owned("udp");
    REQUIRE_FALSE(udp.empty());
    for (const auto& e : udp) {
        if (e.local_port == cfg.internal.port) CHECK(e.local_ip == "127.0.0.1");
        CHECK(e.local_ip == "127.0.0.1");
    }
    CHECK(testproc::owned("udp6").empty());

    // let the one-shot recording drain
    std::uint64_t last = ~0ull;
    REQUIRE(eventually([&] {
        auto now = hn.ingested();
        bool quiet = now == last && now > 0;
        last = now;
        std::this_thread::sleep_for(milliseconds{150});
        return quiet;
    }));
    const std::string sentence = "$GPHDT,123.4,T*31";
    const auto base = hn.ingested();
    if (auto ext = external_ipv4()) {
        net::UdpSender outside({*ext, cfg.internal.port});
        int refused = 0;
        for (int i = 0; i < 5; ++i) {
            try {
                outside.send(sentence);
            } catch (const replay::ReplayError&) {
                ++refused;  // ICMP port unreachable from an earlier datagram
            }
            std::this_thread::sleep_for(milliseconds{20});
        }
        CHECK(refused > 0);
        std::this_thread::sleep_for(milliseconds{300});
        CHECK(hn.ingested() == base);
        CHECK_FALSE(net::tcp_connect({*ext, cfg.internal.port}, Millis{300}));
        CHECK(net::tcp_connect({*ext, cfg.web.listen.port}, Millis{1000}));
        CHECK(net::tcp_connect({*ext, cfg.telnet.listen.port}, Millis{1000}));
    } else {
        MESSAGE("no non-loopback IPv4 interface; external reachability probe skipped");
    }
    // positive control: the same datagram on loopback is accepted
    net::UdpSender inside(cfg.internal);
    inside.send(sentence);
    CHECK(eventually([&] { return hn.ingested() == base + 1; }));
}

#ifdef HONEYNETD_PATH
TEST_CASE("honeynetd: exit codes and the shutdown signal contract") {
    const std::string exe = HONEYNETD_PATH;
    Site site;
    auto out = site.dir.path / "daemon.out";

    SUBCASE("invalid configuration exits 2") {
        site.doc["ship"] = {{"mmsi", "12"}};
        testproc::Child child({exe, "--config", site.write().string()}, out);
        REQUIRE(child.started());
        CHECK(child.wait(milliseconds{5000}) == 2);
        CHECK(testproc::slurp(out).find("ship.mmsi") != std::string::npos);
    }
    SUBCASE("no config argument exits 1") {
        testproc::Child child({exe}, out);
        CHECK(child.wait(milliseconds{5000}) == 1);
    }
    SUBCASE("a taken port exits 3") {
        auto squatter = net::TcpListener::bind({"127.0.0.1", 0});
        site.doc["telnet"]["listen"] = squatter.local().str();
        testproc::Child child({exe, "-c", site.write().string()}, out);
        CHECK(child.wait(milliseconds{5000}) == 3);
        CHECK(testproc::slurp(out).find("address already in use") != std::string::npos);
    }
    SUBCASE("SIGTERM shuts down cleanly with every line flushed") {
        net::Endpoint web{"127.0.0.1", free_tcp_port()};
        net::Endpoint tel{"127.0.0.1", free_tcp_port()};
        site.doc["web"]["listen"] = web.str();
        site.doc["telnet"]["listen"] = tel.str();
        testproc::Child child({exe, "-c", site.write().string()}, out);
        REQUIRE(child.started());
        REQUIRE(eventually([&] { return net::tcp_connect(tel, Millis{200}).has_value(); }));
        REQUIRE(eventually([&] { return net::tcp_connect(web, Millis{200}).has_value(); }));
        for (int i = 0; i < 30; ++i) testclient::http(web, "GET", "/index" + std::to_string(i) + ".html");
        {
            testclient::Telnet t(tel);
            REQUIRE(telnet_login(t, "User", "seatel1"));
            t.send_line("STATUS");
            REQUIRE(t.read_until("ACU> "));
        }
        child.signal(SIGTERM);
        REQUIRE(child.wait(milliseconds{10000}) == 0);
        CHECK(testproc::slurp(out).find("shutting down") != std::string::npos);

        std::size_t connects = 0, lines = 0;
        for (const auto& f : fs::directory_iterator(site.dir.path / "logs")) {
            auto text = testproc::slurp(f.path());
            CHECK(text.back() == '\n');
            std::istringstream in(text);
            std::string line;
            while (std::getline(in, line)) {
                auto e = eventlog::parse_line(line);
                REQUIRE(e);
                ++lines;
                if (e->event == "connect") ++connects;
            }
        }
        CHECK(connects >= 31);  // the readiness probes add a few more
        CHECK(lines > 60);
        CHECK_FALSE(net::tcp_connect(web, Millis{300}));
    }
}
#endif
