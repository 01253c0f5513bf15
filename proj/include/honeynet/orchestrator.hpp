#pragma once

#include "honeynet/commands.hpp"
#include "honeynet/config.hpp"
#include "honeynet/device.hpp"
#include "honeynet/event_log.hpp"
#include "honeynet/store.hpp"
#include "honeynet/telnet.hpp"
#include "honeynet/web.hpp"

#include <array>
#include <atomic>
#include <condition_variable>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace honeynet::orchestrator {

// Process exit codes of honeynetd.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStartup = 3;

enum class Component : std::uint8_t { Replayer, Ingester, Telnet, Web };
inline constexpr std::array kComponents{Component::Replayer, Component::Ingester, Component::Telnet, Component::Web};
std::string_view component_name(Component c);

/// Startup could not complete, e.g. a listen port is taken.
class StartupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SupervisorOptions {
    std::chrono::milliseconds poll{50};
    std::chrono::milliseconds backoff_initial{100};
    std::chrono::milliseconds backoff_max{5000};
    /// A component that stayed up this long starts over at backoff_initial.
    std::chrono::milliseconds stable_after{std::chrono::seconds{30}};
};

/// All services of one honeynet in a single process. Services talk to each
/// other only through the internal datagram endpoint and the shared store.
class Honeynet {
public:
    /// `mirror` receives a copy of every event (tests watch it).
    explicit Honeynet(config::HoneynetConfig cfg, Clock& clock = SystemClock::instance(),
                      SupervisorOptions opt = {}, eventlog::EventSink* mirror = nullptr);
    ~Honeynet();
    Honeynet(const Honeynet&) = delete;
    Honeynet& operator=(const Honeynet&) = delete;

    /// Starts every component and the supervisor. Throws StartupError and
    /// leaves nothing running when any component fails to come up.
    void start();
    /// Stops everything and flushes the event log. Idempotent.
    void stop();

    /// Simulates a crash of one component; the supervisor brings it back.
    void kill(Component c);
    bool alive(Component c) const;
    std::uint64_t restarts(Component c) const;

    net::Endpoint web_endpoint() const;
    net::Endpoint telnet_endpoint() const;
    net::Endpoint internal_endpoint() const { return cfg_.internal; }

    Device& device() { return *device_; }
    store::DeceptionStore& store() { return *store_; }
    eventlog::EventLog& log() { return *log_; }
    const config::HoneynetConfig& config() const { return cfg_; }
    /// Datagrams accepted by the ingester.
    std::uint64_t ingested() const { return ingested_.load(); }

private:
    struct Unit {
        std::atomic<bool> wanted{false};
        std::atomic<bool> crashed{false};
        std::atomic<std::uint64_t> restarts{0};
        std::chrono::milliseconds backoff{0};
        std::chrono::steady_clock::time_point up_since{};
        std::chrono::steady_clock::time_point retry_at{};
        std::jthread thread;  // replayer and ingester only
    };

    void start_unit(Component c);
    void stop_unit(Component c);
    bool unit_alive(Component c) const;
    void supervise(std::stop_token st);
    void emit(Component c, std::string event, nlohmann::json detail);
    void replayer_main(std::stop_token st);
    void ingester_main(std::stop_token st, std::shared_ptr<net::UdpReceiver> rx);
    Unit& unit(Component c) { return units_[static_cast<std::size_t>(c)]; }
    const Unit& unit(Component c) const { return units_[static_cast<std::size_t>(c)]; }

    config::HoneynetConfig cfg_;
    Clock& clock_;
    SupervisorOptions opt_;
    replay::Recording recording_;

    std::unique_ptr<eventlog::EventLog> log_;
    std::unique_ptr<eventlog::TeeSink> tee_;
    eventlog::EventSink* sink_ = nullptr;
    std::unique_ptr<store::DeceptionStore> store_;
    std::unique_ptr<Device> device_;
    telnet::CommandTable commands_;
    std::unique_ptr<web::WebApp> web_app_;
    std::unique_ptr<web::WebServer> web_;
    std::unique_ptr<telnet::TelnetServer> telnet_;
    std::atomic<std::uint64_t> ingested_{0};

    mutable std::mutex mu_;  // guards unit start/stop against the supervisor
    std::array<Unit, 4> units_;
    std::jthread supervisor_;
    bool started_ = false;
};

/// Runs a honeynet until SIGINT or SIGTERM, then shuts down cleanly.
/// Returns a process exit code; diagnostics go to `err`.
int run(const config::HoneynetConfig& cfg, std::ostream& err);

}  // namespace honeynet::orchestrator
