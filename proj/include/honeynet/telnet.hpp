#pragma once

#include "honeynet/commands.hpp"
#include "honeynet/device.hpp"
#include "honeynet/event_log.hpp"
#include "honeynet/net.hpp"
#include "honeynet/store.hpp"
#include "honeynet/telnet_protocol.hpp"

#include <atomic>
#include <chrono>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace honeynet::telnet {

struct TelnetConfig {
    net::Endpoint listen{"0.0.0.0", 23};
    std::string prompt = "ACU> ";
    int max_attempts = 3;
    std::chrono::milliseconds idle_timeout{std::chrono::seconds{300}};
    std::chrono::milliseconds reboot_downtime{std::chrono::seconds{20}};
};

/// What the connection should do after feeding the session one event.
struct SessionIo {
    std::string text;             // already CRLF-normalized
    std::optional<bool> echo;     // server echo on/off before writing `text`
    bool close = false;
    bool reboot = false;
};

/// Protocol-free login and shell state machine for one connection.
///
/// Every event it logs carries `detail.transcript`: the screen text since
/// the previous event, including input the client echoed locally. The
/// concatenation over a session's events reproduces what the attacker saw.
class TelnetSession {
public:
    enum class State { AwaitUser, AwaitPassword, Shell, Closed };

    struct Deps {
        Device& device;
        store::DeceptionStore& store;
        const CommandTable& commands;
        eventlog::EventSink& log;
        const TelnetConfig& config;
    };

    TelnetSession(Deps deps, std::string session_id, std::string src_ip, std::uint16_t src_port);

    SessionIo open();
    SessionIo on_line(const std::string& line);
    SessionIo on_idle();
    SessionIo on_reboot_broadcast();
    /// Logs the disconnect once; later calls are no-ops.
    void close(std::string_view reason);

    State state() const { return state_; }
    std::optional<Role> role() const { return role_; }
    int attempts() const { return attempts_; }
    const std::string& id() const { return id_; }

private:
    SessionIo login_line(const std::string& line);
    SessionIo shell_line(const std::string& line);
    std::string slot_value(const std::string& slot, std::optional<Telemetry>& t);
    void say(SessionIo& io, std::string_view text);
    void emit(std::string event, nlohmann::json detail);

    Deps d_;
    std::string id_;
    std::string src_ip_;
    std::uint16_t src_port_;
    State state_ = State::AwaitUser;
    std::optional<Role> role_;
    std::string username_;
    std::string account_name_;
    int attempts_ = 0;
    std::string pending_;  // transcript not yet attached to an event
    Timestamp opened_at_{};
};

/// Thread-per-connection Telnet listener with device reboot emulation.
class TelnetServer {
public:
    TelnetServer(TelnetConfig cfg, Device& device, store::DeceptionStore& store, const CommandTable& commands,
                 eventlog::EventSink& log, Clock& clock);
    ~TelnetServer();
    TelnetServer(const TelnetServer&) = delete;
    TelnetServer& operator=(const TelnetServer&) = delete;

    /// Binds the listener; throws net::NetError(PortInUse).
    void start();
    void stop();

    net::Endpoint local() const;
    std::size_t active_sessions() const;
    /// False once stopped or after the accept loop died.
    bool running() const { return running_.load(); }
    bool rebooting() const { return rebooting_.load(); }
    std::uint64_t reboots() const { return reboots_.load(); }

private:
    struct Connection {
        std::jthread thread;
        std::atomic<bool> kill{false};
        std::atomic<bool> done{false};
    };

    void accept_loop(std::stop_token st);
    void serve(std::shared_ptr<Connection> conn, net::TcpStream stream, std::stop_token st);
    bool request_reboot();
    void reap();

    TelnetConfig cfg_;
    Device& device_;
    store::DeceptionStore& store_;
    const CommandTable& commands_;
    eventlog::EventSink& log_;
    Clock& clock_;

    mutable std::mutex mu_;
    std::optional<net::TcpListener> listener_;
    net::Endpoint bound_;
    std::list<std::shared_ptr<Connection>> conns_;
    std::atomic<bool> running_{false};
    std::atomic<bool> rebooting_{false};
    std::atomic<std::uint64_t> reboots_{0};
    std::optional<Timestamp> reboot_at_;
    std::jthread acceptor_;
};

}  // namespace honeynet::telnet
