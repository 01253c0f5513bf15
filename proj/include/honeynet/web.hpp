#pragma once

#include "honeynet/device.hpp"
#include "honeynet/event_log.hpp"
#include "honeynet/http.hpp"
#include "honeynet/net.hpp"
#include "honeynet/store.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <list>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace honeynet::web {

struct WebConfig {
    net::Endpoint listen{"0.0.0.0", 80};
    /// Sent on every response, in this order.
    std::vector<std::pair<std::string, std::string>> mimicry_headers{
        {"Server", "GoAhead-Webs"},
        {"Pragma", "no-cache"},
        {"Cache-Control", "no-cache"},
    };
    std::string cookie_name = "SID";
    std::chrono::milliseconds session_ttl{std::chrono::minutes{30}};
    std::optional<std::filesystem::path> asset_dir;  // overrides built-in /css and /js files
    std::size_t body_log_cap = 8 * 1024;
    std::chrono::milliseconds read_timeout{std::chrono::seconds{10}};
};

enum class RouteKind { StaticAsset, StatusApi, MutationApi, Upload, Page };

struct RouteSpec {
    std::string method;  // GET or POST
    std::string path;
    std::optional<Role> min_role;  // nullopt: public
    RouteKind kind = RouteKind::Page;
};

/// Route table of the portal; public for tests that scan it.
const std::vector<RouteSpec>& routes();
std::string menu_path(Role r);

struct WebSession {
    std::string token;
    std::string ref;  // log-safe short id derived from the token
    Role role = Role::User;
    std::string username;
    std::string src_ip;
    Timestamp created_at{};
    Timestamp expires_at{};
};

class SessionTable {
public:
    SessionTable(Clock& clock, std::chrono::milliseconds ttl) : clock_(clock), ttl_(ttl) {}

    WebSession create(Role role, std::string username, std::string src_ip);
    /// Expired tokens are removed and treated as absent. Valid ones slide.
    std::optional<WebSession> validate(const std::string& token);
    void remove(const std::string& token);
    std::size_t size() const;

private:
    Clock& clock_;
    std::chrono::milliseconds ttl_;
    mutable std::mutex mu_;
    std::map<std::string, WebSession> sessions_;
};

/// Request handling without sockets: one call, one response, exactly one
/// http.request event (plus any marker events the route produces).
class WebApp {
public:
    WebApp(WebConfig cfg, Device& device, store::DeceptionStore& store, eventlog::EventSink& log, Clock& clock);

    http::Response handle(const http::Request& req, const std::string& src_ip, std::uint16_t src_port);
    /// Response and log event for bytes that did not parse as HTTP.
    http::Response handle_malformed(const std::string& why, std::size_t bytes, const std::string& src_ip,
                                    std::uint16_t src_port);

    /// Runs before each route handler; a throwing hook exercises the fault path.
    void set_fault_hook(std::function<void(const http::Request&)> hook) { fault_hook_ = std::move(hook); }

    SessionTable& sessions() { return sessions_; }
    const WebConfig& config() const { return cfg_; }

private:
    struct Ctx;
    http::Response dispatch(Ctx& ctx);
    http::Response finish(http::Response r);
    http::Response page(int status, const std::string& title, const std::string& body_html);
    http::Response redirect(const std::string& location);
    http::Response error_page(int status);
    void emit(Ctx& ctx, std::string event, nlohmann::json detail);

    http::Response login(Ctx& ctx);
    http::Response status_api(Ctx& ctx);
    http::Response config_sat(Ctx& ctx);
    http::Response set_ant_params(Ctx& ctx);
    http::Response ship_position(Ctx& ctx);
    http::Response password(Ctx& ctx);
    http::Response data_export(Ctx& ctx);
    http::Response upload(Ctx& ctx, store::UploadKind kind);
    http::Response static_asset(Ctx& ctx);
    http::Response simple_page(Ctx& ctx);

    WebConfig cfg_;
    Device& device_;
    store::DeceptionStore& store_;
    eventlog::EventSink& log_;
    Clock& clock_;
    SessionTable sessions_;
    std::function<void(const http::Request&)> fault_hook_;
};

class WebServer {
public:
    WebServer(WebApp& app, eventlog::EventSink& log);
    ~WebServer();
    WebServer(const WebServer&) = delete;
    WebServer& operator=(const WebServer&) = delete;

    void start();  // throws net::NetError(PortInUse)
    void stop();
    net::Endpoint local() const { return bound_; }
    bool running() const { return running_.load(); }

private:
    struct Connection {
        std::jthread thread;
        std::atomic<bool> done{false};
    };
    void accept_loop(std::stop_token st);
    void serve(net::TcpStream stream, std::stop_token st);

    WebApp& app_;
    eventlog::EventSink& log_;
    std::optional<net::TcpListener> listener_;
    net::Endpoint bound_;
    std::mutex mu_;
    std::list<std::shared_ptr<Connection>> conns_;
    std::atomic<bool> running_{false};
    std::jthread acceptor_;
};

}  // namespace honeynet::web
