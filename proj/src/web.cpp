#include "honeynet/web.hpp"

#include "web_pages.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace honeynet::web {

using json = nlohmann::json;
using eventlog::LogEvent;
using eventlog::Service;

namespace {

constexpr const char* kStatusPath = "/cgi-bin/getSysStatus";

const std::set<std::string>& credential_routes() {
    static const std::set<std::string> s{"/Login", "/UserPassword.html"};
    return s;
}

std::optional<double> number_in(const std::map<std::string, std::string>& form, const std::string& key, double lo,
                                double hi) {
    auto it = form.find(key);
    if (it == form.end()) return std::nullopt;
    auto s = std::string(trim(it->second));
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v) || v < lo || v > hi)
        return std::nullopt;
    return v;
}

std::string content_type_of(const std::filesystem::path& p) {
    auto ext = p.extension().string();
    if (ext == ".css") return "text/css";
    if (ext == ".js") return "application/javascript";
    if (ext == ".png") return "image/png";
    if (ext == ".gif") return "image/gif";
    if (ext == ".html" || ext == ".htm") return "text/html";
    return "application/octet-stream";
}

}  // namespace

const std::vector<RouteSpec>& routes() {
    using enum RouteKind;
    static const std::vector<RouteSpec> table{
        {"GET", "/", std::nullopt, Page},
        {"GET", "/Login", std::nullopt, Page},
        {"POST", "/Login", std::nullopt, Page},
        {"GET", "/Logout", std::nullopt, Page},
        {"GET", "/MenuUserGX.html", Role::User, Page},
        {"GET", "/MenuSysAdminGX.html", Role::SysAdmin, Page},
        {"GET", "/MenuDealerGX.html", Role::Dealer, Page},
        {"GET", kStatusPath, Role::User, StatusApi},
        {"GET", "/ConfigSat.html", Role::SysAdmin, Page},
        {"POST", "/ConfigSat.html", Role::SysAdmin, MutationApi},
        {"GET", "/cgi-bin/setAntParams", Role::SysAdmin, MutationApi},
        {"POST", "/cgi-bin/setAntParams", Role::SysAdmin, MutationApi},
        {"GET", "/UserShpPosSet.html", Role::User, Page},
        {"POST", "/UserShpPosSet.html", Role::User, MutationApi},
        {"GET", "/UserPassword.html", Role::User, Page},
        {"POST", "/UserPassword.html", Role::User, MutationApi},
        {"GET", "/Viewlog.html", Role::User, Page},
        {"GET", "/DataExport.html", Role::User, Page},
        {"GET", "/cgi-bin/dataExport", Role::User, Page},
        {"GET", "/Diagnostics.html", Role::SysAdmin, Page},
        {"GET", "/ConfigUpload.html", Role::SysAdmin, Page},
        {"POST", "/cgi-bin/uploadConfig", Role::SysAdmin, Upload},
        {"GET", "/Commissioning.html", Role::Dealer, Page},
        {"GET", "/FirmwareUpload.html", Role::Dealer, Page},
        {"POST", "/cgi-bin/uploadFirmware", Role::Dealer, Upload},
        {"GET", "/css/", std::nullopt, StaticAsset},
        {"GET", "/js/", std::nullopt, StaticAsset},
    };
    return table;
}

std::string menu_path(Role r) {
    switch (r) {
        case Role::User: return "/MenuUserGX.html";
        case Role::SysAdmin: return "/MenuSysAdminGX.html";
        case Role::Dealer: return "/MenuDealerGX.html";
    }
    return "/MenuUserGX.html";
}

WebSession SessionTable::create(Role role, std::string username, std::string src_ip) {
    WebSession s;
    s.token = random_hex(20);
    s.ref = "w-" + sha256_hex(s.token).substr(0, 12);
    s.role = role;
    s.username = std::move(username);
    s.src_ip = std::move(src_ip);
    s.created_at = clock_.now();
    s.expires_at = s.created_at + ttl_;
    std::lock_guard lock(mu_);
    sessions_[s.token] = s;
    return s;
}

std::optional<WebSession> SessionTable::validate(const std::string& token) {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(token);
    if (it == sessions_.end()) return std::nullopt;
    auto now = clock_.now();
    if (now >= it->second.expires_at) {
        sessions_.erase(it);
        return std::nullopt;
    }
    it->second.expires_at = now + ttl_;
    return it->second;
}

void SessionTable::remove(const std::string& token) {
    std::lock_guard lock(mu_);
    sessions_.erase(token);
}

std::size_t SessionTable::size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

struct WebApp::Ctx {
    const http::Request& req;
    const std::string& src_ip;
    std::uint16_t src_port;
    std::optional<WebSession> session;
    const RouteSpec* route = nullptr;
    json detail = json::object();

    std::map<std::string, std::string> form() const {
        auto out = http::parse_urlencoded(req.query);
        auto ct = req.header("Content-Type").value_or("");
        if (to_lower(ct).starts_with("multipart/form-data")) {
            if (auto parts = http::parse_multipart(ct, req.body))
                for (const auto& p : *parts)
                    if (!p.filename) out[p.name] = p.data;
        } else if (!req.body.empty()) {
            for (auto& [k, v] : http::parse_urlencoded(req.body)) out[k] = v;
        }
        return out;
    }
};

WebApp::WebApp(WebConfig cfg, Device& device, store::DeceptionStore& store, eventlog::EventSink& log, Clock& clock)
    : cfg_(std::move(cfg)),
      device_(device),
      store_(store),
      log_(log),
      clock_(clock),
      sessions_(clock, cfg_.session_ttl) {}

void WebApp::emit(Ctx& ctx, std::string event, json detail) {
    LogEvent e;
    e.service = Service::Web;
    e.event = std::move(event);
    if (ctx.session) e.session = ctx.session->ref;
    e.src_ip = ctx.src_ip;
    e.src_port = ctx.src_port;
    e.detail = std::move(detail);
    log_.emit(std::move(e));
}

http::Response WebApp::finish(http::Response r) {
    http::Response out;
    out.status = r.status;
    out.headers = cfg_.mimicry_headers;
    if (!r.header("Content-Type")) r.set("Content-Type", "text/html");
    for (auto& h : r.headers) out.headers.push_back(std::move(h));
    out.headers.emplace_back("Content-Length", std::to_string(r.body.size()));
    out.headers.emplace_back("Connection", "close");
    out.body = std::move(r.body);
    return out;
}

http::Response WebApp::page(int status, const std::string& title, const std::string& body_html) {
    http::Response r;
    r.status = status;
    r.body = pages::layout(title, body_html, device_.identity());
    return r;
}

http::Response WebApp::redirect(const std::string& location) {
    http::Response r;
    r.status = 302;
    r.set("Location", location);
    r.body = "<html><body>This document has moved to a new <a href=\"" + location + "\">location</a>.</body></html>\n";
    return r;
}

http::Response WebApp::error_page(int status) {
    http::Response r;
    r.status = status;
    r.body = pages::error_body(status);
    return r;
}

http::Response WebApp::handle(const http::Request& req, const std::string& src_ip, std::uint16_t src_port) {
    Ctx ctx{req, src_ip, src_port, std::nullopt};
    if (auto cookie = req.header("Cookie")) {
        auto jar = http::parse_cookies(*cookie);
        if (auto it = jar.find(cfg_.cookie_name); it != jar.end()) ctx.session = sessions_.validate(it->second);
    }

    http::Response resp;
    try {
        if (fault_hook_) fault_hook_(req);
        resp = dispatch(ctx);
    } catch (const store::StoreError& e) {
        resp = error_page(e.code() == store::StoreErrc::UploadTooLarge ? 413 : 500);
        ctx.detail["error"] = store::errc_name(e.code());
    } catch (const std::exception& e) {
        resp = error_page(500);
        ctx.detail["error"] = "internal";
    }
    if (req.method == "HEAD") resp.body.clear();
    resp = finish(std::move(resp));

    json headers = json::object();
    for (const auto& [k, v] : req.headers) {
        auto lk = to_lower(k);
        if (lk == "cookie" || lk == "authorization" || lk == "proxy-authorization") continue;
        if (headers.size() >= 32) break;
        headers[lk] = v.substr(0, 512);
    }
    json& d = ctx.detail;
    d["method"] = req.method;
    d["path"] = req.path;
    d["query"] = req.query;
    d["status"] = resp.status;
    d["headers"] = std::move(headers);
    d["body_size"] = req.body.size();
    d["route"] = ctx.route ? json(ctx.route->path) : json(nullptr);
    d["probe"] = ctx.route == nullptr;
    if (ctx.session) d["role"] = role_name(ctx.session->role);
    if (!req.body.empty()) {
        if (credential_routes().count(req.path)) {
            d["body_redacted"] = true;
        } else {
            d["body"] = req.body.substr(0, cfg_.body_log_cap);
            if (req.body.size() > cfg_.body_log_cap) {
                d["body_truncated"] = true;
                d["body_sha256"] = sha256_hex(req.body);
            }
        }
    }
    emit(ctx, "http.request", std::move(d));
    return resp;
}

http::Response WebApp::handle_malformed(const std::string& why, std::size_t bytes, const std::string& src_ip,
                                        std::uint16_t src_port) {
    auto resp = finish(error_page(why == "body too large" ? 413 : 400));
    http::Request none;
    Ctx ctx{none, src_ip, src_port, std::nullopt};
    emit(ctx, "http.request",
         {{"method", ""}, {"path", ""}, {"query", ""}, {"status", resp.status}, {"headers", json::object()},
          {"body_size", bytes}, {"route", nullptr}, {"probe", false}, {"malformed", why}});
    return resp;
}

http::Response WebApp::dispatch(Ctx& ctx) {
    const auto& req = ctx.req;
    std::string method = req.method == "HEAD" ? "GET" : req.method;
    for (const auto& r : routes()) {
        if (r.method != method) continue;
        bool match = r.kind == RouteKind::StaticAsset ? req.path.starts_with(r.path) : req.path == r.path;
        if (match) {
            ctx.route = &r;
            break;
        }
    }
    if (!ctx.route) return error_page(404);

    if (ctx.route->min_role) {
        if (!ctx.session) {
            if (req.path == kStatusPath) emit(ctx, "status.direct_access", {{"path", req.path}});
            return redirect("/Login");
        }
        if (!role_at_least(ctx.session->role, *ctx.route->min_role)) {
            emit(ctx, "escalation.attempt",
                 {{"path", req.path},
                  {"method", req.method},
                  {"role", role_name(ctx.session->role)},
                  {"required", role_name(*ctx.route->min_role)}});
            return redirect("/Login");
        }
    }

    const std::string& p = req.path;
    if (p == "/") return redirect("/Login");
    if (p == "/Login") return login(ctx);
    if (p == "/Logout") {
        if (auto cookie = req.header("Cookie")) {
            auto jar = http::parse_cookies(*cookie);
            if (auto it = jar.find(cfg_.cookie_name); it != jar.end()) sessions_.remove(it->second);
        }
        auto r = redirect("/Login");
        r.set("Set-Cookie", cfg_.cookie_name + "=; path=/");
        return r;
    }
    if (p == "/MenuUserGX.html" || p == "/MenuSysAdminGX.html" || p == "/MenuDealerGX.html") {
        Role shown = *ctx.route->min_role;
        return page(200, std::string(role_name(shown)) + " Menu",
                    pages::menu(shown, device_.status_document(device_.read())));
    }
    if (p == kStatusPath) return status_api(ctx);
    if (p == "/ConfigSat.html") return config_sat(ctx);
    if (p == "/cgi-bin/setAntParams") return set_ant_params(ctx);
    if (p == "/UserShpPosSet.html") return ship_position(ctx);
    if (p == "/UserPassword.html") return password(ctx);
    if (p == "/cgi-bin/dataExport") return data_export(ctx);
    if (p == "/cgi-bin/uploadFirmware") return upload(ctx, store::UploadKind::Firmware);
    if (p == "/cgi-bin/uploadConfig") return upload(ctx, store::UploadKind::Config);
    if (ctx.route->kind == RouteKind::StaticAsset) return static_asset(ctx);
    return simple_page(ctx);
}

http::Response WebApp::login(Ctx& ctx) {
    if (ctx.req.method != "POST") return page(200, "Login", pages::login_form(""));
    auto form = ctx.form();
    std::string user = form["username"];
    std::string pass = form["password"];
    json detail{{"username", user}, {"password", pass}};
    auto role = store_.verify_credentials(user, pass);
    if (!role) {
        emit(ctx, "login.failed", std::move(detail));
        return page(200, "Login", pages::login_form("Invalid username or password"));
    }
    bool is_default = false;
    for (const auto& a : store_.config().defaults.all())
        if (a.role == *role && a.username == user && a.password == pass) is_default = true;
    ctx.session = sessions_.create(*role, user, ctx.src_ip);
    detail["role"] = role_name(*role);
    detail["default_credential"] = is_default;
    emit(ctx, "login.success", std::move(detail));
    auto r = redirect(menu_path(*role));
    r.set("Set-Cookie", cfg_.cookie_name + "=" + ctx.session->token + "; path=/");
    return r;
}

http::Response WebApp::status_api(Ctx&) {
    http::Response r;
    r.set("Content-Type", "application/json");
    r.body = device_.status_document(device_.read()).dump();
    return r;
}

http::Response WebApp::config_sat(Ctx& ctx) {
    std::string message;
    if (ctx.req.method == "POST") {
        auto form = ctx.form();
        std::map<std::string, std::string> params;
        for (const auto& key : {"satellite_longitude", "polarization", "rx_frequency"})
            if (auto it = form.find(key); it != form.end() && !it->second.empty()) params[key] = it->second.substr(0, 256);
        auto sat = number_in(form, "satellite_longitude", -180, 180);
        if (params.empty() || (params.count("satellite_longitude") && !sat)) {
            message = "Invalid parameter";
        } else {
            auto change = store_.record_change(ctx.session->ref, "ConfigSat", params);
            if (sat) device_.set_satellite(*sat);
            emit(ctx, "config.change", {{"endpoint", "ConfigSat"}, {"parameters", params}, {"change_id", change.change_id}});
            message = "Settings saved";
        }
    }
    return page(200, "Satellite Configuration", pages::config_sat(format_fixed(device_.satellite(), 1), message));
}

http::Response WebApp::set_ant_params(Ctx& ctx) {
    auto form = ctx.form();
    auto az = number_in(form, "azimuth", 0, 360);
    auto el = number_in(form, "elevation", 0, 90);
    bool bad = (form.count("azimuth") && !az) || (form.count("elevation") && !el) || (!az && !el);
    http::Response r;
    r.set("Content-Type", "text/plain");
    if (bad) {
        r.body = "ERROR: invalid parameter\n";
        return r;
    }
    std::map<std::string, std::string> params;
    if (az) params["azimuth"] = std::string(trim(form["azimuth"]));
    if (el) params["elevation"] = std::string(trim(form["elevation"]));
    auto change = store_.record_change(ctx.session->ref, "setAntParams", params);
    device_.point_antenna(az, el);
    emit(ctx, "config.change", {{"endpoint", "setAntParams"}, {"parameters", params}, {"change_id", change.change_id}});
    r.body = "OK\n";
    return r;
}

http::Response WebApp::ship_position(Ctx& ctx) {
    std::string message;
    if (ctx.req.method == "POST") {
        auto form = ctx.form();
        auto lat = number_in(form, "latitude", -90, 90);
        auto lon = number_in(form, "longitude", -180, 180);
        if (!lat || !lon) {
            message = "Invalid position";
        } else {
            std::map<std::string, std::string> params{{"latitude", std::string(trim(form["latitude"]))},
                                                      {"longitude", std::string(trim(form["longitude"]))}};
            auto change = store_.record_change(ctx.session->ref, "UserShpPosSet", params);
            device_.set_position(*lat, *lon);
            emit(ctx, "config.change",
                 {{"endpoint", "UserShpPosSet"}, {"parameters", params}, {"change_id", change.change_id}});
            message = "Position updated";
        }
    }
    auto nav = vessel::render_nav(device_.vessel().current_snapshot());
    return page(200, "Ship Position", pages::ship_position(nav.latitude, nav.longitude, message));
}

http::Response WebApp::password(Ctx& ctx) {
    Role actor = ctx.session->role;
    std::string message;
    if (ctx.req.method == "POST") {
        auto form = ctx.form();
        std::string account = form.count("account") ? form["account"] : std::string(role_name(actor));
        std::optional<Role> target = parse_role(account);
        if (!target)
            for (const auto& a : store_.accounts())
                if (a.username == account) target = a.role;
        if (!target) {
            message = "Unknown account";
        } else {
            try {
                store_.change_password(actor, *target, form["new_password"], ctx.session->ref);
                emit(ctx, "config.change",
                     {{"endpoint", store::kPasswordChangeEndpoint}, {"parameters", {{"account", role_name(*target)}}}});
                message = "Password changed";
            } catch (const store::StoreError& e) {
                if (e.code() == store::StoreErrc::PrivilegeDenied) {
                    emit(ctx, "escalation.attempt",
                         {{"path", ctx.req.path},
                          {"method", ctx.req.method},
                          {"role", role_name(actor)},
                          {"required", role_name(*target)},
                          {"action", "change_password"}});
                    message = "Permission denied";
                } else if (e.code() == store::StoreErrc::EmptyPassword) {
                    message = "Password must not be empty";
                } else {
                    throw;
                }
            }
        }
    }
    return page(200, "Change Password", pages::password_form(actor, message));
}

http::Response WebApp::data_export(Ctx&) {
    std::ostringstream csv;
    csv << "utc,latitude,longitude,heading,speed,seq\r\n";
    for (const auto& s : device_.vessel().history()) {
        auto nav = vessel::render_nav(s);
        csv << nav.utc << ',' << nav.latitude << ',' << nav.longitude << ',' << nav.heading << ',' << nav.speed << ','
            << nav.seq << "\r\n";
    }
    http::Response r;
    r.set("Content-Type", "text/csv");
    r.set("Content-Disposition", "attachment; filename=\"navlog.csv\"");
    r.body = csv.str();
    return r;
}

http::Response WebApp::upload(Ctx& ctx, store::UploadKind kind) {
    bool firmware = kind == store::UploadKind::Firmware;
    const char* field = firmware ? "firmware" : "config";
    const char* title = firmware ? "Firmware Upload" : "Configuration Upload";
    const char* action = firmware ? "/cgi-bin/uploadFirmware" : "/cgi-bin/uploadConfig";
    auto parts = http::parse_multipart(ctx.req.header("Content-Type").value_or(""), ctx.req.body);
    const http::MultipartPart* file = nullptr;
    if (parts)
        for (const auto& p : *parts)
            if (p.filename && (!file || p.name == field)) file = &p;
    if (!file || file->data.empty())
        return page(200, title, pages::upload_form(action, field, "File", "No file selected"));

    auto up = store_.quarantine_upload(ctx.session->role, ctx.session->ref, kind, *file->filename,
                                       std::span<const char>(file->data.data(), file->data.size()));
    emit(ctx, "upload.saved",
         {{"kind", store::upload_kind_name(kind)},
          {"filename", up.original_filename},
          {"size", up.size_bytes},
          {"digest", up.content_digest},
          {"upload_id", up.upload_id}});
    return page(200, title, pages::upload_accepted(firmware ? "Firmware" : "Configuration", up.original_filename,
                                                   up.size_bytes));
}

http::Response WebApp::static_asset(Ctx& ctx) {
    const auto& path = ctx.req.path;
    auto name = path.substr(path.find('/', 1) + 1);
    bool safe = !name.empty() && name.find('/') == std::string::npos && name.find("..") == std::string::npos &&
                name.find('\0') == std::string::npos;
    if (safe && cfg_.asset_dir) {
        auto file = *cfg_.asset_dir / path.substr(1);
        std::ifstream in(file, std::ios::binary);
        if (in) {
            http::Response r;
            r.set("Content-Type", content_type_of(file));
            r.body.assign(std::istreambuf_iterator<char>(in), {});
            return r;
        }
    }
    if (auto asset = pages::builtin_asset(path)) {
        http::Response r;
        r.set("Content-Type", asset->first);
        r.body = asset->second;
        return r;
    }
    ctx.route = nullptr;
    return error_page(404);
}

http::Response WebApp::simple_page(Ctx& ctx) {
    const auto& p = ctx.req.path;
    if (p == "/Viewlog.html") return page(200, "Event Log", pages::view_log(device_.log_lines(50)));
    if (p == "/DataExport.html") return page(200, "Data Export", pages::data_export());
    if (p == "/Diagnostics.html") return page(200, "Diagnostics", pages::diagnostics(device_.status_document(device_.read())));
    if (p == "/Commissioning.html") return page(200, "Commissioning", pages::commissioning(device_.identity()));
    if (p == "/FirmwareUpload.html")
        return page(200, "Firmware Upload", pages::upload_form("/cgi-bin/uploadFirmware", "firmware", "Firmware image", ""));
    if (p == "/ConfigUpload.html")
        return page(200, "Configuration Upload", pages::upload_form("/cgi-bin/uploadConfig", "config", "Configuration file", ""));
    ctx.route = nullptr;
    return error_page(404);
}

WebServer::WebServer(WebApp& app, eventlog::EventSink& log) : app_(app), log_(log) {}

WebServer::~WebServer() { stop(); }

void WebServer::start() {
    // a restart comes back on the address the first start bound
    listener_ = net::TcpListener::bind(bound_.port != 0 ? bound_ : app_.config().listen);
    bound_ = listener_->local();
    running_ = true;
    acceptor_ = std::jthread([this](std::stop_token st) {
        try {
            accept_loop(st);
        } catch (const std::exception& e) {
            LogEvent err;
            err.service = Service::Web;
            err.event = "session.error";
            err.detail = {{"error", e.what()}, {"scope", "listener"}};
            log_.emit(std::move(err));
        }
        running_ = false;
    });
}

void WebServer::stop() {
    if (acceptor_.joinable()) {
        acceptor_.request_stop();
        acceptor_.join();
    }
    std::list<std::shared_ptr<Connection>> conns;
    {
        std::lock_guard lock(mu_);
        conns.swap(conns_);
    }
    for (auto& c : conns) c->thread.request_stop();
    for (auto& c : conns)
        if (c->thread.joinable()) c->thread.join();
    listener_.reset();
    running_ = false;
}

void WebServer::accept_loop(std::stop_token st) {
    while (!st.stop_requested()) {
        auto stream = listener_->accept(Millis{100});
        {
            std::list<std::shared_ptr<Connection>> finished;
            std::lock_guard lock(mu_);
            for (auto it = conns_.begin(); it != conns_.end();) {
                if ((*it)->done.load()) {
                    finished.push_back(std::move(*it));
                    it = conns_.erase(it);
                } else {
                    ++it;
                }
            }
            for (auto& c : finished) c->thread.join();
        }
        if (!stream) continue;
        auto conn = std::make_shared<Connection>();
        std::lock_guard lock(mu_);
        conn->thread = std::jthread([this, conn, s = std::move(*stream)](std::stop_token cst) mutable {
            serve(std::move(s), cst);
            conn->done.store(true);
        });
        conns_.push_back(conn);
    }
}

void WebServer::serve(net::TcpStream stream, std::stop_token st) {
    LogEvent connect;
    connect.service = Service::Web;
    connect.event = "connect";
    connect.src_ip = stream.peer_ip();
    connect.src_port = stream.peer_port();
    log_.emit(std::move(connect));

    auto cap = app_.config().read_timeout;
    http::RequestParser parser(65 * 1024 * 1024);
    auto started = std::chrono::steady_clock::now();
    auto state = http::RequestParser::State::NeedMore;
    try {
        while (state == http::RequestParser::State::NeedMore && !st.stop_requested()) {
            if (std::chrono::steady_clock::now() - started > cap) {
                state = parser.finish();
                break;
            }
            std::string buf;
            auto rs = stream.read_some(buf, Millis{100});
            if (rs == net::TcpStream::ReadStatus::Closed) {
                state = parser.finish();
                break;
            }
            if (rs == net::TcpStream::ReadStatus::Data) state = parser.feed(buf);
        }
        if (state == http::RequestParser::State::Complete) {
            stream.write_all(http::serialize(app_.handle(parser.request(), stream.peer_ip(), stream.peer_port())));
        } else if (state == http::RequestParser::State::Error && parser.bytes_seen() > 0) {
            stream.write_all(http::serialize(
                app_.handle_malformed(parser.error(), parser.bytes_seen(), stream.peer_ip(), stream.peer_port())));
        }
    } catch (const std::exception& e) {
        LogEvent err;
        err.service = Service::Web;
        err.event = "session.error";
        err.src_ip = stream.peer_ip();
        err.src_port = stream.peer_port();
        err.detail = {{"error", e.what()}};
        log_.emit(std::move(err));
    }
    stream.shutdown();
}

}  // namespace honeynet::web
