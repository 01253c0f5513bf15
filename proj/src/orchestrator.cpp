#include "honeynet/orchestrator.hpp"

#include <csignal>
#include <cstring>
#include <map>
#include <ostream>
#include <pthread.h>
#include <random>

namespace honeynet::orchestrator {

namespace fs = std::filesystem;
using json = nlohmann::json;
using eventlog::LogEvent;
using eventlog::Service;
using steady = std::chrono::steady_clock;

std::string_view component_name(Component c) {
    switch (c) {
        case Component::Replayer: return "replayer";
        case Component::Ingester: return "ingester";
        case Component::Telnet: return "telnet";
        case Component::Web: return "web";
    }
    return "?";
}

namespace {

Service service_of(Component c) {
    switch (c) {
        case Component::Telnet: return Service::Telnet;
        case Component::Web: return Service::Web;
        default: return Service::Replayer;
    }
}

void ensure_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw StartupError("cannot create directory " + p.string() + ": " + ec.message());
}

}  // namespace

Honeynet::Honeynet(config::HoneynetConfig cfg, Clock& clock, SupervisorOptions opt, eventlog::EventSink* mirror)
    : cfg_(std::move(cfg)), clock_(clock), opt_(opt) {
    recording_ = replay::load_recording_file(cfg_.recording.string(), cfg_.sentence_interval);

    ensure_dir(cfg_.log_dir);
    ensure_dir(cfg_.quarantine_dir);
    if (cfg_.database != ":memory:") ensure_dir(cfg_.database.parent_path());

    log_ = std::make_unique<eventlog::EventLog>(eventlog::EventLogConfig{cfg_.log_dir}, clock_);
    sink_ = log_.get();
    if (mirror) {
        tee_ = std::make_unique<eventlog::TeeSink>(std::vector<eventlog::EventSink*>{log_.get(), mirror});
        sink_ = tee_.get();
    }

    store::StoreConfig sc;
    sc.database = cfg_.database;
    sc.quarantine_dir = cfg_.quarantine_dir;
    sc.upload_cap_bytes = cfg_.upload_cap_bytes;
    sc.defaults = cfg_.credentials;
    store_ = std::make_unique<store::DeceptionStore>(sc, clock_);

    auto start = cfg_.start_position;
    start.utc = truncate_to_ms(clock_.now());
    std::uint64_t seed = cfg_.seed != 0 ? cfg_.seed : std::random_device{}();
    device_ = std::make_unique<Device>(cfg_.ship, start, cfg_.antenna, seed, clock_);
    device_->apply_settings(*store_);

    commands_ = cfg_.command_table ? telnet::CommandTable::load(*cfg_.command_table) : telnet::CommandTable::builtin();

    web_app_ = std::make_unique<web::WebApp>(cfg_.web, *device_, *store_, *sink_, clock_);
    web_ = std::make_unique<web::WebServer>(*web_app_, *sink_);
    telnet_ = std::make_unique<telnet::TelnetServer>(cfg_.telnet, *device_, *store_, commands_, *sink_, clock_);
}

Honeynet::~Honeynet() { stop(); }

void Honeynet::emit(Component c, std::string event, json detail) {
    LogEvent e;
    e.service = service_of(c);
    e.event = std::move(event);
    e.src_ip = "";
    detail["component"] = std::string(component_name(c));
    e.detail = std::move(detail);
    sink_->emit(std::move(e));
}

void Honeynet::replayer_main(std::stop_token st) {
    try {
        net::UdpSender sender(cfg_.internal);
        replay::run_replay(recording_, cfg_.replay, clock_, sender, st, [this](const std::string& what) {
            emit(Component::Replayer, "replay.error", {{"error", what}});
        });
    } catch (const std::exception& e) {
        emit(Component::Replayer, "replay.error", {{"error", e.what()}, {"fatal", true}});
        unit(Component::Replayer).crashed = true;
    }
}

void Honeynet::ingester_main(std::stop_token st, std::shared_ptr<net::UdpReceiver> rx) {
    try {
        while (!st.stop_requested()) {
            auto datagram = rx->receive(Millis{100});
            if (datagram && device_->vessel().ingest_datagram(*datagram)) ++ingested_;
        }
    } catch (const std::exception& e) {
        emit(Component::Ingester, "replay.error", {{"error", e.what()}, {"fatal", true}});
        unit(Component::Ingester).crashed = true;
    }
}

void Honeynet::start_unit(Component c) {
    Unit& u = unit(c);
    switch (c) {
        case Component::Replayer:
            u.thread = std::jthread([this](std::stop_token st) { replayer_main(st); });
            break;
        case Component::Ingester: {
            // bound here so a taken endpoint fails the caller, not the thread
            auto rx = std::make_shared<net::UdpReceiver>(net::UdpReceiver::bind(cfg_.internal));
            u.thread = std::jthread([this, rx](std::stop_token st) { ingester_main(st, rx); });
            break;
        }
        case Component::Telnet: telnet_->start(); break;
        case Component::Web: web_->start(); break;
    }
    u.crashed = false;
    u.wanted = true;
    u.up_since = steady::now();
}

void Honeynet::stop_unit(Component c) {
    Unit& u = unit(c);
    switch (c) {
        case Component::Replayer:
        case Component::Ingester:
            if (u.thread.joinable()) {
                u.thread.request_stop();
                u.thread.join();
            }
            break;
        case Component::Telnet: telnet_->stop(); break;
        case Component::Web: web_->stop(); break;
    }
}

bool Honeynet::unit_alive(Component c) const {
    const Unit& u = unit(c);
    if (u.crashed) return false;
    switch (c) {
        case Component::Telnet: return telnet_->running();
        case Component::Web: return web_->running();
        default: return u.thread.joinable();
    }
}

void Honeynet::start() {
    std::lock_guard lock(mu_);
    if (started_) return;
    std::vector<Component> up;
    // ingester first so the replayer's first datagram has a reader
    for (Component c : {Component::Ingester, Component::Replayer, Component::Telnet, Component::Web}) {
        try {
            start_unit(c);
            up.push_back(c);
        } catch (const std::exception& e) {
            for (auto it = up.rbegin(); it != up.rend(); ++it) {
                stop_unit(*it);
                unit(*it).wanted = false;
            }
            net::Endpoint ep = c == Component::Web      ? cfg_.web.listen
                               : c == Component::Telnet ? cfg_.telnet.listen
                                                        : cfg_.internal;
            std::string reason = e.what();
            if (auto* ne = dynamic_cast<const net::NetError*>(&e); ne && ne->code() == net::NetErrc::PortInUse)
                reason = "address already in use";
            throw StartupError(std::string(component_name(c)) + ": cannot listen on " + ep.str() + ": " + reason);
        }
    }
    started_ = true;
    supervisor_ = std::jthread([this](std::stop_token st) { supervise(st); });
}

void Honeynet::stop() {
    if (supervisor_.joinable()) {
        supervisor_.request_stop();
        supervisor_.join();
    }
    {
        std::lock_guard lock(mu_);
        if (started_) {
            // front door first, then the feed behind it
            for (Component c : {Component::Web, Component::Telnet, Component::Replayer, Component::Ingester}) {
                unit(c).wanted = false;
                stop_unit(c);
            }
            started_ = false;
        }
    }
    if (log_) log_->flush();
}

void Honeynet::kill(Component c) {
    std::lock_guard lock(mu_);
    if (!unit(c).wanted) return;
    unit(c).crashed = true;
    stop_unit(c);
}

bool Honeynet::alive(Component c) const {
    std::lock_guard lock(mu_);
    return unit(c).wanted && unit_alive(c);
}

std::uint64_t Honeynet::restarts(Component c) const { return unit(c).restarts.load(); }

net::Endpoint Honeynet::web_endpoint() const { return web_->local(); }
net::Endpoint Honeynet::telnet_endpoint() const { return telnet_->local(); }

void Honeynet::supervise(std::stop_token st) {
    std::map<Component, bool> down;
    while (!st.stop_requested()) {
        std::this_thread::sleep_for(opt_.poll);
        std::lock_guard lock(mu_);
        auto now = steady::now();
        for (Component c : kComponents) {
            Unit& u = unit(c);
            if (!u.wanted || unit_alive(c)) continue;
            if (!down[c]) {
                down[c] = true;
                bool was_stable = now - u.up_since >= opt_.stable_after;
                u.backoff = (was_stable || u.backoff.count() == 0) ? opt_.backoff_initial
                                                                  : std::min(u.backoff * 2, opt_.backoff_max);
                u.retry_at = now + u.backoff;
                continue;
            }
            if (now < u.retry_at) continue;
            stop_unit(c);  // reclaim whatever the dead instance left behind
            std::uint64_t attempt = u.restarts + 1;
            try {
                start_unit(c);
                down[c] = false;
                ++u.restarts;
                emit(c, "service.restart",
                     {{"result", "ok"}, {"attempt", attempt}, {"backoff_ms", u.backoff.count()}});
            } catch (const std::exception& e) {
                u.crashed = true;
                emit(c, "service.restart",
                     {{"result", "failed"}, {"attempt", attempt}, {"backoff_ms", u.backoff.count()},
                      {"error", e.what()}});
                u.backoff = std::min(u.backoff * 2, opt_.backoff_max);
                u.retry_at = now + u.backoff;
            }
        }
    }
}

int run(const config::HoneynetConfig& cfg, std::ostream& err) {
    // Block the shutdown signals before any thread exists so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::signal(SIGPIPE, SIG_IGN);

    std::unique_ptr<Honeynet> hn;
    try {
        hn = std::make_unique<Honeynet>(cfg);
        hn->start();
    } catch (const std::exception& e) {
        err << "honeynetd: startup failed: " << e.what() << std::endl;
        return kExitStartup;
    }
    err << "honeynetd: web " << hn->web_endpoint().str() << ", telnet " << hn->telnet_endpoint().str()
        << ", feed " << hn->internal_endpoint().str() << ", logs " << cfg.log_dir.string() << std::endl;

    int sig = 0;
    sigwait(&signals, &sig);
    err << "honeynetd: " << strsignal(sig) << ", shutting down" << std::endl;
    hn->stop();
    err << "honeynetd: " << hn->log().written() << " events written, " << hn->log().dropped() << " dropped"
        << std::endl;
    return kExitOk;
}

}  // namespace honeynet::orchestrator
