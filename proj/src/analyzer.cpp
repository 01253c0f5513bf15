#include "honeynet/analyzer.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

namespace honeynet::analyzer {

namespace fs = std::filesystem;
using json = nlohmann::json;
using eventlog::LogEvent;
using eventlog::Service;

namespace {

constexpr std::string_view kStatusPath = "/cgi-bin/getSysStatus";

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(std::initializer_list<std::string_view> fields) {
    std::string out;
    bool first = true;
    for (auto f : fields) {
        if (!first) out += ',';
        out += csv_field(f);
        first = false;
    }
    return out + "\n";
}

std::string str_or(const json& j, const char* key, std::string fallback = "") {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    return it->is_string() ? it->get<std::string>() : it->dump();
}

bool is_true(const json& j, const char* key) {
    auto it = j.find(key);
    return it != j.end() && it->is_boolean() && it->get<bool>();
}

void read_into(std::istream& in, const fs::path& name, EventSet& es) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            es.events.push_back(eventlog::from_json(json::parse(line)));
        } catch (const std::exception& e) {
            es.malformed.push_back({name, n, e.what()});
        }
    }
}

void sort_events(EventSet& es) {
    std::stable_sort(es.events.begin(), es.events.end(),
                     [](const LogEvent& a, const LogEvent& b) { return a.ts < b.ts; });
}

json event_json(const EventSet& es, std::size_t i) {
    const auto& e = es.events[i];
    return {{"index", i},
            {"ts", format_iso8601_ms(e.ts)},
            {"service", eventlog::service_name(e.service)},
            {"src_ip", e.src_ip},
            {"event", e.event},
            {"description", describe(e)}};
}

std::string event_text(const EventSet& es, std::size_t i) {
    const auto& e = es.events[i];
    return format_iso8601_ms(e.ts) + "  " + std::string(eventlog::service_name(e.service)) + "  " + e.src_ip + "  " +
           describe(e);
}

std::string join_services(const std::set<Service>& s) {
    std::string out;
    for (auto svc : s) {
        if (!out.empty()) out += '+';
        out += eventlog::service_name(svc);
    }
    return out;
}

std::optional<std::uint32_t> parse_ipv4(std::string_view s) {
    std::uint32_t out = 0;
    int parts = 0;
    std::size_t pos = 0;
    while (parts < 4) {
        auto dot = s.find('.', pos);
        auto piece = s.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        if (piece.empty() || piece.size() > 3) return std::nullopt;
        int v = 0;
        for (char c : piece) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + (c - '0');
        }
        if (v > 255) return std::nullopt;
        out = (out << 8) | static_cast<std::uint32_t>(v);
        ++parts;
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    if (parts != 4 || s.find('.', pos) != std::string_view::npos) return std::nullopt;
    return out;
}

}  // namespace

EventSet load_stream(std::istream& in, const fs::path& name) {
    EventSet es;
    es.source_files.push_back(name);
    read_into(in, name, es);
    sort_events(es);
    return es;
}

EventSet load(const std::vector<fs::path>& paths) {
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
        } else if (fs::exists(p, ec)) {
            files.push_back(p);
        } else {
            throw NoFiles("no such file or directory: " + p.string());
        }
    }
    if (files.empty()) throw NoFiles("no event-log files given");
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());

    EventSet es;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw NoFiles("cannot open " + f.string());
        es.source_files.push_back(f);
        read_into(in, f, es);
    }
    sort_events(es);
    return es;
}

std::optional<Format> parse_format(std::string_view s) {
    if (s == "text") return Format::Text;
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    return std::nullopt;
}

std::vector<CredentialCount> top_credentials(const EventSet& es, std::size_t n, std::optional<Service> service) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
    for (const auto& e : es.events) {
        if (e.event != "login.failed" && e.event != "login.success") continue;
        if (service && e.service != *service) continue;
        ++counts[{str_or(e.detail, "username"), str_or(e.detail, "password")}];
    }
    std::vector<CredentialCount> rows;
    rows.reserve(counts.size());
    for (auto& [k, c] : counts) rows.push_back({k.first, k.second, c});
    // counts is ordered by (username, password), so a stable sort keeps that as the tie-break
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
    if (rows.size() > n) rows.resize(n);
    return rows;
}

std::vector<DailyCount> daily_counts(const EventSet& es) {
    std::map<std::pair<std::string, Service>, std::uint64_t> buckets;
    std::int64_t cached_day = INT64_MIN;
    std::string cached_date;
    for (const auto& e : es.events) {
        auto day = std::chrono::floor<std::chrono::days>(e.ts).time_since_epoch().count();
        if (day != cached_day) {
            cached_day = day;
            cached_date = format_date(e.ts);
        }
        ++buckets[{cached_date, e.service}];
    }
    std::vector<DailyCount> out;
    for (auto& [k, c] : buckets) out.push_back({k.first, k.second, c});
    return out;
}

GeoMap GeoMap::parse(std::istream& in) {
    GeoMap g;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto comma = t.find(',');
        auto slash = t.find('/');
        if (comma == std::string_view::npos || slash == std::string_view::npos || slash > comma)
            throw std::invalid_argument("geo map line " + std::to_string(n) + ": expected a.b.c.d/len,Country");
        auto net = parse_ipv4(trim(t.substr(0, slash)));
        auto len_s = trim(t.substr(slash + 1, comma - slash - 1));
        int len = -1;
        if (!len_s.empty() && len_s.size() <= 2 && std::all_of(len_s.begin(), len_s.end(), ::isdigit))
            len = std::stoi(std::string(len_s));
        auto country = std::string(trim(t.substr(comma + 1)));
        if (!net || len < 0 || len > 32 || country.empty())
            throw std::invalid_argument("geo map line " + std::to_string(n) + ": expected a.b.c.d/len,Country");
        std::uint32_t mask = len == 0 ? 0 : ~std::uint32_t{0} << (32 - len);
        g.entries_.push_back({*net & mask, mask, len, std::move(country)});
    }
    std::stable_sort(g.entries_.begin(), g.entries_.end(), [](const Entry& a, const Entry& b) { return a.len > b.len; });
    return g;
}

GeoMap GeoMap::load(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::invalid_argument("cannot open geo map " + p.string());
    return parse(in);
}

std::string GeoMap::lookup(std::string_view ip) const {
    auto addr = parse_ipv4(ip);
    if (addr)
        for (const auto& e : entries_)
            if ((*addr & e.mask) == e.net) return e.country;
    return "Unknown";
}

SourceReport distinct_sources(const EventSet& es, const GeoMap* geo) {
    std::unordered_map<std::string, SourceSummary> by_ip;
    std::unordered_map<std::string, std::uint64_t> connects;
    for (const auto& e : es.events) {
        if (e.src_ip.empty()) continue;
        auto [it, fresh] = by_ip.try_emplace(e.src_ip);
        auto& s = it->second;
        if (fresh) {
            s.ip = e.src_ip;
            s.first_seen = e.ts;
            s.last_seen = e.ts;
        }
        s.first_seen = std::min(s.first_seen, e.ts);
        s.last_seen = std::max(s.last_seen, e.ts);
        s.services.insert(e.service);
        ++s.events;
        if (e.event == "connect") ++connects[e.src_ip];
    }
    SourceReport r;
    r.sources.reserve(by_ip.size());
    for (auto& [ip, s] : by_ip) r.sources.push_back(std::move(s));
    std::sort(r.sources.begin(), r.sources.end(), [](const auto& a, const auto& b) { return a.ip < b.ip; });
    for (const auto& s : r.sources)
        if (s.services.count(Service::Web) && s.services.count(Service::Telnet)) r.dual_service.push_back(s.ip);

    if (geo) {
        std::map<std::string, std::uint64_t> per_country;
        for (const auto& [ip, c] : connects) per_country[geo->lookup(ip)] += c;
        std::vector<CountryCount> rows;
        for (auto& [country, c] : per_country) rows.push_back({country, c});
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.connections > b.connections; });
        r.countries = std::move(rows);
    }
    return r;
}

std::string_view technique_name(std::string_view id) {
    static const std::map<std::string_view, std::string_view> names{
        {"T0807", "Command-Line Interface"},
        {"T0812", "Default Credentials"},
        {"T0816", "Device Restart/Shutdown"},
        {"T0819", "Exploit Public-Facing Application"},
        {"T0846", "Remote System Discovery"},
        {"T0857", "System Firmware"},
        {"T0859", "Valid Accounts"},
        {"T0885", "Commonly Used Port"},
        {"T0888", "Remote System Information Discovery"},
    };
    auto it = names.find(id);
    return it == names.end() ? std::string_view() : it->second;
}

std::vector<TechniqueTag> tag_event(const LogEvent& e, std::size_t i) {
    std::vector<TechniqueTag> tags;
    auto add = [&](const char* id, std::string why) { tags.push_back({id, i, std::move(why)}); };
    const auto& d = e.detail;
    const std::string svc(eventlog::service_name(e.service));

    if (e.event == "connect") {
        add("T0885", "connection to the " + svc + " port");
    } else if (e.event == "login.failed") {
        add("T0812", "failed logon with guessed credentials");
    } else if (e.event == "login.success") {
        add("T0859", "logon with a valid " + str_or(d, "role", "device") + " account");
    } else if (e.event == "cli.command") {
        add("T0807", "CLI command " + str_or(d, "command"));
        if (str_or(d, "class") == "status") add("T0888", "status read on the CLI");
    } else if (e.event == "http.request") {
        if (is_true(d, "probe")) {
            add("T0846", "request for a path the portal does not serve");
        } else if (d.contains("route") && d["route"].is_string()) {
            add("T0819", "request to portal route " + d["route"].get<std::string>());
            if (str_or(d, "path") == kStatusPath && d.value("status", 0) == 200)
                add("T0888", "status document read");
        }
    } else if (e.event == "status.direct_access") {
        add("T0888", "unauthenticated status read attempt");
    } else if (e.event == "upload.saved") {
        if (str_or(d, "kind") == "firmware") add("T0857", "firmware image uploaded");
    } else if (e.event == "device.alarm") {
        if (str_or(d, "alarm") == "reboot") add("T0816", "device reboot");
    }
    std::sort(tags.begin(), tags.end(),
              [](const TechniqueTag& a, const TechniqueTag& b) { return a.technique_id < b.technique_id; });
    return tags;
}

std::vector<TechniqueTag> tag_techniques(const EventSet& es) {
    std::vector<TechniqueTag> out;
    for (std::size_t i = 0; i < es.events.size(); ++i) {
        auto t = tag_event(es.events[i], i);
        out.insert(out.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
    }
    return out;
}

RqReport answer_rqs(const EventSet& es) {
    RqReport r;
    for (std::size_t i = 0; i < es.events.size(); ++i) {
        const auto& e = es.events[i];
        const auto& d = e.detail;
        if (e.event == "login.success" && is_true(d, "default_credential")) {
            r.default_credential_logins.push_back(i);
        } else if (e.event == "status.direct_access") {
            r.direct_status_access.push_back(i);
        } else if (e.event == "http.request" && str_or(d, "path") == kStatusPath && d.value("status", 0) == 200) {
            r.authenticated_status_reads.push_back(i);
        } else if (e.event == "config.change") {
            (str_or(d, "endpoint") == "change_password" ? r.password_changes : r.config_changes).push_back(i);
        } else if (e.event == "cli.command" && d.contains("change")) {
            r.config_changes.push_back(i);
        } else if (e.event == "upload.saved") {
            r.uploads.push_back(i);
        } else if (e.event == "escalation.attempt") {
            r.escalations.push_back(i);
        }
    }

    auto sources = distinct_sources(es);
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& ip : sources.dual_service) {
        slot[ip] = r.cross_service.size();
        r.cross_service.push_back({ip, {}});
    }
    for (std::size_t i = 0; i < es.events.size(); ++i)
        if (auto it = slot.find(es.events[i].src_ip); it != slot.end()) r.cross_service[it->second].events.push_back(i);
    return r;
}

std::string describe(const LogEvent& e) {
    const auto& d = e.detail;
    const auto& ev = e.event;
    if (ev == "login.failed" || ev == "login.success") {
        std::string s = ev + " user=" + json(str_or(d, "username")).dump() + " password=" + json(str_or(d, "password")).dump();
        if (ev == "login.success") s += " role=" + str_or(d, "role");
        return s;
    }
    if (ev == "cli.command") return ev + " " + json(str_or(d, "line")).dump() + " result=" + str_or(d, "result");
    if (ev == "http.request") {
        if (d.contains("malformed")) return ev + " malformed (" + str_or(d, "malformed") + ") -> " + str_or(d, "status");
        std::string target = str_or(d, "path");
        if (auto q = str_or(d, "query"); !q.empty()) target += "?" + q;
        return ev + " " + str_or(d, "method") + " " + target + " -> " + str_or(d, "status");
    }
    if (ev == "escalation.attempt")
        return ev + " " + str_or(d, "path") + " as " + str_or(d, "role") + " (requires " + str_or(d, "required") + ")";
    if (ev == "status.direct_access") return ev + " " + str_or(d, "path");
    if (ev == "config.change")
        return ev + " " + str_or(d, "endpoint") + " " + (d.contains("parameters") ? d["parameters"].dump() : "{}");
    if (ev == "upload.saved")
        return ev + " " + str_or(d, "kind") + " " + json(str_or(d, "filename")).dump() + " " + str_or(d, "size") +
               " bytes sha256=" + str_or(d, "digest").substr(0, 16);
    if (ev == "device.alarm") return ev + " " + str_or(d, "alarm");
    if (ev == "disconnect") return ev + " " + str_or(d, "reason");
    return ev;
}

std::string render_top_credentials(const std::vector<CredentialCount>& rows, Format f) {
    std::ostringstream out;
    switch (f) {
        case Format::Csv:
            out << "username,password,count\n";
            for (const auto& r : rows) out << csv_row({r.username, r.password, std::to_string(r.count)});
            break;
        case Format::Json: {
            json arr = json::array();
            for (const auto& r : rows) arr.push_back({{"username", r.username}, {"password", r.password}, {"count", r.count}});
            out << arr.dump(2) << "\n";
            break;
        }
        case Format::Text: {
            std::size_t wu = 8, wp = 8;
            for (const auto& r : rows) {
                wu = std::max(wu, r.username.size());
                wp = std::max(wp, r.password.size() + (r.password.empty() ? 7 : 0));
            }
            out << std::left << std::setw(static_cast<int>(wu + 2)) << "Username" << std::setw(static_cast<int>(wp + 2))
                << "Password" << "Times\n";
            for (const auto& r : rows)
                out << std::setw(static_cast<int>(wu + 2)) << r.username << std::setw(static_cast<int>(wp + 2))
                    << (r.password.empty() ? "(empty)" : r.password) << r.count << "\n";
            break;
        }
    }
    return out.str();
}

std::string render_daily(const std::vector<DailyCount>& rows, Format f) {
    std::ostringstream out;
    switch (f) {
        case Format::Csv:
            out << "date,service,count\n";
            for (const auto& r : rows) out << r.date << ',' << eventlog::service_name(r.service) << ',' << r.count << "\n";
            break;
        case Format::Json: {
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"date", r.date}, {"service", eventlog::service_name(r.service)}, {"count", r.count}});
            out << arr.dump(2) << "\n";
            break;
        }
        case Format::Text: {
            std::map<std::string, std::map<Service, std::uint64_t>> grid;
            std::set<Service> services;
            for (const auto& r : rows) {
                grid[r.date][r.service] = r.count;
                services.insert(r.service);
            }
            out << std::left << std::setw(12) << "Date";
            for (auto s : services) out << std::right << std::setw(10) << eventlog::service_name(s);
            out << "\n";
            for (const auto& [date, counts] : grid) {
                out << std::left << std::setw(12) << date;
                for (auto s : services) {
                    auto it = counts.find(s);
                    out << std::right << std::setw(10) << (it == counts.end() ? 0 : it->second);
                }
                out << "\n";
            }
            break;
        }
    }
    return out.str();
}

std::string render_sources(const SourceReport& r, std::size_t n, Format f) {
    std::ostringstream out;
    switch (f) {
        case Format::Csv:
            out << "ip,first_seen,last_seen,services,events,both_services\n";
            for (const auto& s : r.sources) {
                bool dual = s.services.count(Service::Web) && s.services.count(Service::Telnet);
                out << csv_row({s.ip, format_iso8601_ms(s.first_seen), format_iso8601_ms(s.last_seen),
                                join_services(s.services), std::to_string(s.events), dual ? "yes" : "no"});
            }
            break;
        case Format::Json: {
            json doc{{"distinct_sources", r.sources.size()},
                     {"dual_service_count", r.dual_service.size()},
                     {"dual_service", r.dual_service}};
            json arr = json::array();
            for (const auto& s : r.sources) {
                json svcs = json::array();
                for (auto svc : s.services) svcs.push_back(eventlog::service_name(svc));
                arr.push_back({{"ip", s.ip},
                               {"first_seen", format_iso8601_ms(s.first_seen)},
                               {"last_seen", format_iso8601_ms(s.last_seen)},
                               {"services", svcs},
                               {"events", s.events}});
            }
            doc["sources"] = std::move(arr);
            if (r.countries) {
                json c = json::array();
                for (const auto& row : *r.countries) c.push_back({{"country", row.country}, {"connections", row.connections}});
                doc["geolocation"] = std::move(c);
            }
            out << doc.dump(2) << "\n";
            break;
        }
        case Format::Text: {
            out << "distinct sources: " << r.sources.size() << "\n";
            out << "sources on both services: " << r.dual_service.size() << "\n";
            std::vector<const SourceSummary*> busiest;
            for (const auto& s : r.sources) busiest.push_back(&s);
            std::stable_sort(busiest.begin(), busiest.end(), [](auto a, auto b) { return a->events > b->events; });
            if (busiest.size() > n) busiest.resize(n);
            out << "\nbusiest " << busiest.size() << " sources:\n";
            for (const auto* s : busiest)
                out << "  " << std::left << std::setw(16) << s->ip << std::right << std::setw(8) << s->events << "  "
                    << join_services(s->services) << "  " << format_iso8601_ms(s->first_seen) << " .. "
                    << format_iso8601_ms(s->last_seen) << "\n";
            if (r.countries) {
                out << "\nconnections by geolocation:\n";
                std::size_t shown = 0;
                for (const auto& row : *r.countries) {
                    if (shown++ == n) break;
                    out << "  " << std::left << std::setw(24) << row.country << std::right << std::setw(8)
                        << row.connections << "\n";
                }
            }
            out << "\nsources on both services:\n";
            for (const auto& ip : r.dual_service) out << "  " << ip << "\n";
            break;
        }
    }
    return out.str();
}

std::string render_techniques(const EventSet& es, const std::vector<TechniqueTag>& tags, Format f) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& id : technique_ids()) counts[id] = 0;
    for (const auto& t : tags) ++counts[t.technique_id];
    std::ostringstream out;
    switch (f) {
        case Format::Csv:
            out << "event_ref,ts,service,src_ip,technique_id,technique,rationale\n";
            for (const auto& t : tags) {
                const auto& e = es.events[t.event_ref];
                out << csv_row({std::to_string(t.event_ref), format_iso8601_ms(e.ts), eventlog::service_name(e.service),
                                e.src_ip, t.technique_id, technique_name(t.technique_id), t.rationale});
            }
            break;
        case Format::Json: {
            json c = json::object();
            for (const auto& [id, n] : counts) c[id] = {{"name", technique_name(id)}, {"count", n}};
            json arr = json::array();
            for (const auto& t : tags)
                arr.push_back({{"event_ref", t.event_ref}, {"technique_id", t.technique_id}, {"rationale", t.rationale}});
            out << json{{"counts", c}, {"tags", arr}}.dump(2) << "\n";
            break;
        }
        case Format::Text:
            for (const auto& [id, n] : counts)
                out << id << "  " << std::left << std::setw(38) << technique_name(id) << std::right << std::setw(8) << n
                    << "\n";
            break;
    }
    return out.str();
}

std::string render_rqs(const EventSet& es, const RqReport& r, Format f) {
    struct Section {
        const char* rq;
        const char* key;
        const char* title;
        const std::vector<std::size_t>* items;
    };
    const Section rq1[] = {
        {"RQ1", "default_credential_logins", "logins with default credentials", &r.default_credential_logins},
        {"RQ1", "direct_status_access", "direct getSysStatus access attempts", &r.direct_status_access},
        {"RQ1", "authenticated_status_reads", "authenticated getSysStatus reads", &r.authenticated_status_reads},
    };
    const Section rq3[] = {
        {"RQ3", "password_changes", "password changes", &r.password_changes},
        {"RQ3", "config_changes", "configuration changes", &r.config_changes},
        {"RQ3", "uploads", "uploaded files", &r.uploads},
        {"RQ3", "escalations", "privilege escalation attempts", &r.escalations},
    };

    std::ostringstream out;
    switch (f) {
        case Format::Csv: {
            out << "rq,category,index,ts,service,src_ip,event,description\n";
            auto rows = [&](const char* rq, const std::string& cat, const std::vector<std::size_t>& items) {
                for (auto i : items) {
                    const auto& e = es.events[i];
                    out << csv_row({rq, cat, std::to_string(i), format_iso8601_ms(e.ts), eventlog::service_name(e.service),
                                    e.src_ip, e.event, describe(e)});
                }
            };
            for (const auto& s : rq1) rows(s.rq, s.key, *s.items);
            for (const auto& t : r.cross_service) rows("RQ2", "timeline:" + t.ip, t.events);
            for (const auto& s : rq3) rows(s.rq, s.key, *s.items);
            break;
        }
        case Format::Json: {
            auto list = [&](const std::vector<std::size_t>& items) {
                json arr = json::array();
                for (auto i : items) arr.push_back(event_json(es, i));
                return arr;
            };
            json doc;
            for (const auto& s : rq1) doc["rq1"][s.key] = list(*s.items);
            json timelines = json::array();
            for (const auto& t : r.cross_service) timelines.push_back({{"ip", t.ip}, {"events", list(t.events)}});
            doc["rq2"] = {{"cross_service_sources", r.cross_service.size()}, {"timelines", std::move(timelines)}};
            for (const auto& s : rq3) doc["rq3"][s.key] = list(*s.items);
            out << doc.dump(2) << "\n";
            break;
        }
        case Format::Text: {
            auto section = [&](const Section& s) {
                out << "  " << s.title << ": " << s.items->size() << "\n";
                for (auto i : *s.items) out << "    " << event_text(es, i) << "\n";
            };
            out << "RQ1: exploitation of default credentials and direct status access\n";
            for (const auto& s : rq1) section(s);
            out << "\nRQ2: sources that interacted with both services: " << r.cross_service.size() << "\n";
            for (const auto& t : r.cross_service) {
                out << "  " << t.ip << " (" << t.events.size() << " events)\n";
                for (auto i : t.events) out << "    " << event_text(es, i) << "\n";
            }
            out << "\nRQ3: persistence attempts" << (r.rq3_empty() ? ": none" : "") << "\n";
            for (const auto& s : rq3) section(s);
            break;
        }
    }
    return out.str();
}

}  // namespace honeynet::analyzer
