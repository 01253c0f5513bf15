#include "honeynet/event_log.hpp"

#include <cstdio>
#include <stdexcept>

namespace honeynet::eventlog {

using json = nlohmann::json;

std::string_view service_name(Service s) {
    switch (s) {
        case Service::Web: return "web";
        case Service::Telnet: return "telnet";
        case Service::Replayer: return "replayer";
        case Service::Store: return "store";
    }
    return "web";
}

std::optional<Service> parse_service(std::string_view s) {
    for (auto svc : kAllServices)
        if (service_name(svc) == s) return svc;
    return std::nullopt;
}

json to_json(const LogEvent& e) {
    json j;
    j["ts"] = format_iso8601_ms(e.ts);
    j["service"] = service_name(e.service);
    j["event"] = e.event;
    j["session"] = e.session ? json(*e.session) : json(nullptr);
    j["src_ip"] = e.src_ip;
    j["src_port"] = e.src_port ? json(*e.src_port) : json(nullptr);
    j["detail"] = e.detail.is_object() ? e.detail : json::object();
    j["schema_version"] = e.schema_version;
    return j;
}

LogEvent from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("event is not an object");
    auto need_string = [&](const char* key) -> std::string {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) throw std::invalid_argument(std::string("missing ") + key);
        return it->get<std::string>();
    };
    LogEvent e;
    auto ts = parse_iso8601(need_string("ts"));
    if (!ts) throw std::invalid_argument("bad ts");
    e.ts = *ts;
    auto svc = parse_service(need_string("service"));
    if (!svc) throw std::invalid_argument("bad service");
    e.service = *svc;
    e.event = need_string("event");
    e.src_ip = need_string("src_ip");
    if (auto it = j.find("session"); it != j.end() && it->is_string()) e.session = it->get<std::string>();
    if (auto it = j.find("src_port"); it != j.end() && it->is_number_unsigned()) {
        auto p = it->get<std::uint64_t>();
        if (p > 65535) throw std::invalid_argument("bad src_port");
        e.src_port = static_cast<std::uint16_t>(p);
    }
    if (auto it = j.find("detail"); it != j.end() && it->is_object()) e.detail = *it;
    auto v = j.find("schema_version");
    if (v == j.end() || !v->is_number_integer()) throw std::invalid_argument("missing schema_version");
    e.schema_version = v->get<int>();
    return e;
}

std::string to_line(const LogEvent& e) {
    return to_json(e).dump(-1, ' ', false, json::error_handler_t::replace);
}

std::optional<LogEvent> parse_line(std::string_view line) {
    try {
        return from_json(json::parse(line));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string file_name(Service s, Timestamp ts) {
    return std::string(service_name(s)) + "-" + format_date(ts) + ".jsonl";
}

Timestamp Stamper::stamp(Service s) {
    auto now = truncate_to_ms(clock_.now());
    auto& last = last_[s];
    if (now < last) now = last;
    last = now;
    return now;
}

void MemorySink::emit(LogEvent e) {
    std::function<void(const LogEvent&)> cb;
    {
        std::lock_guard lock(mu_);
        e.ts = stamper_.stamp(e.service);
        events_.push_back(e);
        cb = cb_;
    }
    if (cb) cb(e);
}

std::vector<LogEvent> MemorySink::events() const {
    std::lock_guard lock(mu_);
    return events_;
}

std::vector<LogEvent> MemorySink::of_type(std::string_view event) const {
    std::lock_guard lock(mu_);
    std::vector<LogEvent> out;
    for (const auto& e : events_)
        if (e.event == event) out.push_back(e);
    return out;
}

void MemorySink::clear() {
    std::lock_guard lock(mu_);
    events_.clear();
}

void MemorySink::on_emit(std::function<void(const LogEvent&)> cb) {
    std::lock_guard lock(mu_);
    cb_ = std::move(cb);
}

namespace {

LogEvent drop_marker(Service s, Timestamp ts, std::uint64_t count) {
    LogEvent m;
    m.ts = ts;
    m.service = s;
    m.event = "log.dropped";
    m.src_ip = "";
    m.detail = {{"count", count}};
    return m;
}

}  // namespace

EventLog::EventLog(EventLogConfig cfg, Clock& clock) : cfg_(std::move(cfg)), stamper_(clock) {
    std::filesystem::create_directories(cfg_.directory);
    worker_ = std::jthread([this](std::stop_token st) { run(st); });
}

EventLog::~EventLog() {
    flush();
    worker_.request_stop();
    cv_.notify_all();
    if (worker_.joinable()) worker_.join();
    for (auto& [svc, f] : files_)
        if (f.fp) std::fclose(f.fp);
}

void EventLog::emit(LogEvent e) {
    {
        std::lock_guard lock(mu_);
        auto& drops = pending_drops_[e.service];
        std::size_t need = drops ? 2 : 1;
        if (queue_.size() + need > cfg_.queue_capacity) {
            ++drops;
            ++dropped_;
            return;
        }
        e.ts = stamper_.stamp(e.service);
        if (drops) {
            queue_.push_back({drop_marker(e.service, e.ts, drops), ++enqueued_seq_});
            drops = 0;
        }
        queue_.push_back({std::move(e), ++enqueued_seq_});
    }
    cv_.notify_one();
}

void EventLog::flush() {
    std::unique_lock lock(mu_);
    // Outstanding drops have no following event to carry their marker.
    for (auto& [svc, drops] : pending_drops_) {
        if (!drops) continue;
        queue_.push_back({drop_marker(svc, stamper_.stamp(svc), drops), ++enqueued_seq_});
        drops = 0;
    }
    auto target = enqueued_seq_;
    cv_.notify_one();
    flushed_cv_.wait(lock, [&] { return done_seq_ >= target; });
}

std::uint64_t EventLog::written() const {
    std::lock_guard lock(mu_);
    return written_;
}

std::uint64_t EventLog::dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
}

bool EventLog::write_one(const LogEvent& e) {
    auto date = format_date(e.ts);
    auto& f = files_[e.service];
    if (!f.fp || f.date != date) {
        if (f.fp) std::fclose(f.fp);
        auto path = cfg_.directory / file_name(e.service, e.ts);
        f.fp = std::fopen(path.c_str(), "ab");
        f.date = date;
        if (!f.fp) return false;
    }
    auto line = to_line(e);
    line.push_back('\n');
    return std::fwrite(line.data(), 1, line.size(), f.fp) == line.size();
}

void EventLog::run(std::stop_token st) {
    std::deque<Pending> batch;
    for (;;) {
        {
            std::unique_lock lock(mu_);
            cv_.wait(lock, st, [&] { return !queue_.empty(); });
            if (queue_.empty()) return;
            batch.swap(queue_);
        }
        std::uint64_t ok = 0;
        std::map<Service, std::uint64_t> failed;
        std::uint64_t newly_dropped = 0;
        for (const auto& p : batch) {
            if (write_one(p.event)) {
                ++ok;
            } else {
                // A lost marker still accounts for the events it described.
                std::uint64_t n = 1;
                if (p.event.event == "log.dropped")
                    n = p.event.detail.value("count", std::uint64_t{0});
                else
                    ++newly_dropped;
                failed[p.event.service] += n;
                auto& f = files_[p.event.service];
                if (f.fp) std::fclose(f.fp);
                f.fp = nullptr;
            }
        }
        for (auto& [svc, f] : files_)
            if (f.fp && std::fflush(f.fp) != 0) {
                std::fclose(f.fp);
                f.fp = nullptr;
            }
        {
            std::lock_guard lock(mu_);
            written_ += ok;
            for (auto& [svc, n] : failed) pending_drops_[svc] += n;
            dropped_ += newly_dropped;
            done_seq_ = batch.back().seq;
        }
        batch.clear();
        flushed_cv_.notify_all();
    }
}

}  // namespace honeynet::eventlog
