#include "honeynet/telnet.hpp"

#include <charconv>
#include <cmath>

namespace honeynet::telnet {

using json = nlohmann::json;
using eventlog::LogEvent;
using eventlog::Service;

namespace {

std::string crlf(std::string_view text) {
    std::string out;
    out.reserve(text.size() + 8);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n' && (i == 0 || text[i - 1] != '\r')) out.push_back('\r');
        out.push_back(text[i]);
    }
    return out;
}

std::optional<double> parse_number(const std::string& s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

TelnetSession::TelnetSession(Deps deps, std::string session_id, std::string src_ip, std::uint16_t src_port)
    : d_(deps), id_(std::move(session_id)), src_ip_(std::move(src_ip)), src_port_(src_port) {}

void TelnetSession::say(SessionIo& io, std::string_view text) {
    auto t = crlf(text);
    io.text += t;
    pending_ += t;
}

void TelnetSession::emit(std::string event, json detail) {
    detail["transcript"] = std::move(pending_);
    pending_.clear();
    LogEvent e;
    e.service = Service::Telnet;
    e.event = std::move(event);
    e.session = id_;
    e.src_ip = src_ip_;
    e.src_port = src_port_;
    e.detail = std::move(detail);
    d_.log.emit(std::move(e));
}

SessionIo TelnetSession::open() {
    opened_at_ = d_.device.clock().now();
    SessionIo io;
    say(io, "\n" + d_.device.identity().model + " Antenna Control Unit\n\nusername: ");
    emit("connect", json::object());
    return io;
}

SessionIo TelnetSession::on_line(const std::string& line) {
    if (state_ == State::Closed) {
        SessionIo io;
        io.close = true;
        return io;
    }
    // input the client echoed itself becomes part of what the attacker saw
    if (state_ != State::AwaitPassword) pending_ += line + "\r\n";
    if (state_ == State::Shell) return shell_line(line);
    return login_line(line);
}

SessionIo TelnetSession::login_line(const std::string& line) {
    SessionIo io;
    if (state_ == State::AwaitUser) {
        username_ = line;
        state_ = State::AwaitPassword;
        io.echo = true;
        say(io, "password: ");
        return io;
    }

    io.echo = false;
    const std::string& password = line;
    auto role = d_.store.verify_credentials(username_, password);
    json detail{{"username", username_}, {"password", password}};
    if (role) {
        bool is_default = false;
        for (const auto& a : d_.store.config().defaults.all())
            if (a.role == *role && a.username == username_ && a.password == password) is_default = true;
        role_ = role;
        account_name_ = username_;
        state_ = State::Shell;
        const auto& id = d_.device.identity();
        say(io, "\n\n" + id.model + " ACU  firmware " + id.firmware_version + "\nVessel " + id.ship_name +
                    "  MAC " + id.mac_address + "\nLogged in as " + username_ + " (" +
                    std::string(role_name(*role)) + ")\n\n" + d_.config.prompt);
        detail["role"] = role_name(*role);
        detail["default_credential"] = is_default;
        emit("login.success", std::move(detail));
        return io;
    }

    ++attempts_;
    detail["attempt"] = attempts_;
    if (attempts_ >= d_.config.max_attempts) {
        say(io, "\nLogin incorrect\nToo many failures, connection closed.\n");
        io.close = true;
        emit("login.failed", std::move(detail));
        close("max_attempts");
        return io;
    }
    state_ = State::AwaitUser;
    say(io, "\nLogin incorrect\n\nusername: ");
    emit("login.failed", std::move(detail));
    return io;
}

std::string TelnetSession::slot_value(const std::string& slot, std::optional<Telemetry>& t) {
    const auto& id = d_.device.identity();
    if (slot == "user") return account_name_;
    if (slot == "role") return role_ ? std::string(role_name(*role_)) : "";
    if (slot == "ship_name") return id.ship_name;
    if (slot == "call_sign") return id.call_sign;
    if (slot == "mmsi") return id.mmsi;
    if (slot == "mac") return id.mac_address;
    if (slot == "firmware") return id.firmware_version;
    if (slot == "model") return id.model;
    if (slot == "serial") return id.serial;
    if (slot == "uptime") return d_.device.uptime().render();
    if (slot == "date" || slot == "time") {
        auto iso = format_iso8601_ms(d_.device.clock().now());
        return slot == "date" ? iso.substr(0, 10) : iso.substr(11, 8);
    }
    if (slot == "log") {
        std::string out;
        for (const auto& l : d_.device.log_lines(10)) out += (out.empty() ? "" : "\n") + l;
        return out;
    }

    if (!t) t = d_.device.read();
    auto nav = vessel::render_nav(t->snapshot);
    if (slot == "lat") return nav.latitude;
    if (slot == "lon") return nav.longitude;
    if (slot == "heading") return nav.heading;
    if (slot == "speed") return nav.speed;
    if (slot == "utc") return nav.utc;
    if (slot == "seq") return nav.seq;
    if (slot == "az") return format_fixed(t->antenna.azimuth_deg, 1);
    if (slot == "el") return format_fixed(t->antenna.elevation_deg, 1);
    if (slot == "rel_az") return format_fixed(t->antenna.relative_az_deg, 1);
    if (slot == "signal") return format_fixed(t->antenna.signal_strength_db, 1);
    if (slot == "sat_lon") return format_fixed(t->antenna.satellite_longitude_deg, 1);
    if (slot == "tracking") return t->antenna.tracking ? "YES" : "NO";
    return "";
}

SessionIo TelnetSession::shell_line(const std::string& line) {
    SessionIo io;
    auto parsed = d_.commands.parse(line);
    if (parsed.kind == ParsedLine::Empty) {
        say(io, d_.config.prompt);
        return io;
    }

    json detail{{"command", parsed.name}, {"args", parsed.args}, {"line", line}};
    std::string response;
    std::string result = "ok";
    SideEffect effect = SideEffect::None;

    if (parsed.kind == ParsedLine::Unknown) {
        response = d_.commands.unknown_message();
        result = "unknown";
    } else if (parsed.kind == ParsedLine::BadArity) {
        response = d_.commands.arity_message();
        result = "arity";
    } else {
        const auto& spec = *parsed.spec;
        if (spec.status_class) detail["class"] = "status";
        effect = spec.side_effect;
        bool setter = effect == SideEffect::SetAzimuth || effect == SideEffect::SetElevation ||
                      effect == SideEffect::SetSatellite;
        if (setter && !parsed.args.empty()) {
            auto v = parse_number(parsed.args[0]);
            bool in_range = v && (effect != SideEffect::SetElevation || (*v >= 0 && *v <= 90)) &&
                            (effect != SideEffect::SetSatellite || (*v >= -180 && *v <= 180));
            if (!in_range) {
                result = "invalid";
                response = d_.commands.invalid_message();
            } else {
                try {
                    store::ConfigChange change;
                    if (effect == SideEffect::SetSatellite) {
                        change = d_.store.record_change(id_, "ConfigSat", {{"satellite_longitude", parsed.args[0]}});
                        d_.device.set_satellite(*v);
                    } else {
                        bool az = effect == SideEffect::SetAzimuth;
                        change = d_.store.record_change(id_, "setAntParams", {{az ? "azimuth" : "elevation", parsed.args[0]}});
                        d_.device.point_antenna(az ? v : std::nullopt, az ? std::nullopt : v);
                    }
                    detail["change"] = {{"endpoint", change.endpoint},
                                        {"parameters", change.parameters},
                                        {"change_id", change.change_id}};
                } catch (const store::StoreError&) {
                    result = "error";
                    response = "ERROR: command failed";
                }
            }
            effect = SideEffect::None;
        }
        if (result == "ok") {
            std::optional<Telemetry> t;
            response = d_.commands.render(spec, parsed.args, [&](const std::string& s) { return slot_value(s, t); });
        }
    }
    detail["result"] = result;

    say(io, response + "\n");
    if (effect == SideEffect::Reboot) {
        io.reboot = true;
        io.close = true;
    } else if (effect == SideEffect::Exit) {
        io.close = true;
    } else {
        say(io, d_.config.prompt);
    }
    emit("cli.command", std::move(detail));
    if (io.close) close(effect == SideEffect::Reboot ? "reboot" : "exit");
    return io;
}

SessionIo TelnetSession::on_idle() {
    SessionIo io;
    say(io, "\nIdle timeout, session closed.\n");
    io.close = true;
    close("idle");
    return io;
}

SessionIo TelnetSession::on_reboot_broadcast() {
    SessionIo io;
    say(io, "\n*** System is going down for reboot ***\n");
    io.close = true;
    close("reboot");
    return io;
}

void TelnetSession::close(std::string_view reason) {
    if (state_ == State::Closed) return;
    state_ = State::Closed;
    auto dur = std::chrono::duration_cast<Millis>(d_.device.clock().now() - opened_at_).count();
    emit("disconnect", {{"reason", reason}, {"duration_ms", dur}});
}

TelnetServer::TelnetServer(TelnetConfig cfg, Device& device, store::DeceptionStore& store,
                           const CommandTable& commands, eventlog::EventSink& log, Clock& clock)
    : cfg_(std::move(cfg)), device_(device), store_(store), commands_(commands), log_(log), clock_(clock) {}

TelnetServer::~TelnetServer() { stop(); }

void TelnetServer::start() {
    std::lock_guard lock(mu_);
    listener_ = net::TcpListener::bind(bound_.port != 0 ? bound_ : cfg_.listen);
    bound_ = listener_->local();
    running_ = true;
    acceptor_ = std::jthread([this](std::stop_token st) {
        try {
            accept_loop(st);
        } catch (const std::exception& e) {
            LogEvent err;
            err.service = Service::Telnet;
            err.event = "session.error";
            err.src_ip = "";
            err.detail = {{"error", e.what()}, {"scope", "listener"}};
            log_.emit(std::move(err));
        }
        running_ = false;
    });
}

void TelnetServer::stop() {
    if (acceptor_.joinable()) {
        acceptor_.request_stop();
        acceptor_.join();
    }
    std::list<std::shared_ptr<Connection>> conns;
    {
        std::lock_guard lock(mu_);
        conns.swap(conns_);
        listener_.reset();
    }
    for (auto& c : conns) c->thread.request_stop();
    for (auto& c : conns)
        if (c->thread.joinable()) c->thread.join();
    running_ = false;
}

net::Endpoint TelnetServer::local() const {
    std::lock_guard lock(mu_);
    return bound_;
}

std::size_t TelnetServer::active_sessions() const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& c : conns_) n += !c->done.load();
    return n;
}

void TelnetServer::reap() {
    std::list<std::shared_ptr<Connection>> finished;
    {
        std::lock_guard lock(mu_);
        for (auto it = conns_.begin(); it != conns_.end();) {
            if ((*it)->done.load()) {
                finished.push_back(std::move(*it));
                it = conns_.erase(it);
            } else {
                ++it;
            }
        }
    }
    for (auto& c : finished)
        if (c->thread.joinable()) c->thread.join();
}

bool TelnetServer::request_reboot() {
    if (rebooting_.exchange(true)) return false;
    ++reboots_;
    LogEvent alarm;
    alarm.service = Service::Telnet;
    alarm.event = "device.alarm";
    alarm.src_ip = "";
    alarm.detail = {{"alarm", "reboot"}, {"downtime_ms", cfg_.reboot_downtime.count()}};
    log_.emit(std::move(alarm));

    std::lock_guard lock(mu_);
    reboot_at_ = clock_.now();
    if (listener_) listener_->shutdown();
    for (auto& c : conns_) c->kill.store(true);
    return true;
}

void TelnetServer::accept_loop(std::stop_token st) {
    while (!st.stop_requested()) {
        std::optional<Timestamp> reboot_at;
        {
            std::lock_guard lock(mu_);
            reboot_at = reboot_at_;
            if (reboot_at) listener_.reset();
        }
        if (reboot_at) {
            auto until = *reboot_at + cfg_.reboot_downtime;
            if (!clock_.sleep_until(until, st)) return;
            while (!st.stop_requested()) {
                try {
                    auto l = net::TcpListener::bind(bound_);
                    std::lock_guard lock(mu_);
                    listener_ = std::move(l);
                    break;
                } catch (const net::NetError&) {
                    clock_.sleep_until(clock_.now() + Millis{200}, st);
                }
            }
            device_.uptime().reset();
            {
                std::lock_guard lock(mu_);
                reboot_at_.reset();
            }
            rebooting_.store(false);
            continue;
        }

        std::optional<net::TcpStream> stream;
        {
            // accept() is only ever called from this thread
            net::TcpListener* l = nullptr;
            {
                std::lock_guard lock(mu_);
                if (listener_) l = &*listener_;
            }
            if (l) stream = l->accept(Millis{100});
        }
        reap();
        if (!stream) continue;

        auto conn = std::make_shared<Connection>();
        std::lock_guard lock(mu_);
        if (rebooting_.load()) conn->kill.store(true);
        conn->thread = std::jthread([this, conn, s = std::move(*stream)](std::stop_token cst) mutable {
            serve(conn, std::move(s), cst);
        });
        conns_.push_back(conn);
    }
}

void TelnetServer::serve(std::shared_ptr<Connection> conn, net::TcpStream stream, std::stop_token st) {
    TelnetSession session({device_, store_, commands_, log_, cfg_}, "t-" + random_hex(8), stream.peer_ip(),
                          stream.peer_port());
    OptionDecoder options;
    LineAssembler lines;

    auto apply = [&](const SessionIo& io) {
        std::string out;
        if (io.echo) out += options.set_echo(*io.echo);
        out += io.text;
        return stream.write_all(out);
    };

    try {
        bool open = apply(session.open());
        auto last_activity = clock_.now();
        while (open && !st.stop_requested()) {
            if (conn->kill.load()) {
                apply(session.on_reboot_broadcast());
                break;
            }
            std::string buf;
            auto status = stream.read_some(buf, Millis{100});
            if (status == net::TcpStream::ReadStatus::Closed) break;
            if (status == net::TcpStream::ReadStatus::Timeout) {
                if (clock_.now() - last_activity >= cfg_.idle_timeout) {
                    apply(session.on_idle());
                    break;
                }
                continue;
            }
            last_activity = clock_.now();
            auto decoded = options.feed(buf);
            if (!decoded.replies.empty()) stream.write_all(decoded.replies);
            for (const auto& line : lines.feed(decoded.data)) {
                auto io = session.on_line(line);
                if (!apply(io)) open = false;
                if (io.reboot) request_reboot();
                if (io.close || !open) {
                    open = false;
                    break;
                }
            }
        }
    } catch (const std::exception& e) {
        LogEvent err;
        err.service = Service::Telnet;
        err.event = "session.error";
        err.session = session.id();
        err.src_ip = stream.peer_ip();
        err.src_port = stream.peer_port();
        err.detail = {{"error", e.what()}};
        log_.emit(std::move(err));
    }
    session.close(st.stop_requested() ? "shutdown" : "client");
    stream.shutdown();
    conn->done.store(true);
}

}  // namespace honeynet::telnet
