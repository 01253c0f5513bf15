#pragma once

#include "honeynet/event_log.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace honeynet::analyzer {

class NoFiles : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MalformedLine {
    std::filesystem::path file;
    std::size_t line = 0;  // 1-based
    std::string error;
};

struct EventSet {
    std::vector<eventlog::LogEvent> events;  // ordered by ts, ties by file then line
    std::vector<std::filesystem::path> source_files;
    std::vector<MalformedLine> malformed;
};

/// Accepts files and directories (every *.jsonl inside, non-recursive).
/// Files are read in path order, so the result does not depend on argument order.
EventSet load(const std::vector<std::filesystem::path>& paths);
EventSet load_stream(std::istream& in, const std::filesystem::path& name = "<stream>");

enum class Format { Text, Csv, Json };
std::optional<Format> parse_format(std::string_view s);

struct CredentialCount {
    std::string username;
    std::string password;
    std::uint64_t count = 0;
    bool operator==(const CredentialCount&) const = default;
};

/// Counts login.success and login.failed, optionally restricted to one service.
std::vector<CredentialCount> top_credentials(const EventSet& es, std::size_t n,
                                             std::optional<eventlog::Service> service = std::nullopt);

struct DailyCount {
    std::string date;  // YYYY-MM-DD (UTC)
    eventlog::Service service = eventlog::Service::Web;
    std::uint64_t count = 0;
    bool operator==(const DailyCount&) const = default;
};

/// Sorted by date, then service.
std::vector<DailyCount> daily_counts(const EventSet& es);

struct SourceSummary {
    std::string ip;
    Timestamp first_seen{};
    Timestamp last_seen{};
    std::set<eventlog::Service> services;
    std::uint64_t events = 0;
};

/// IPv4 prefix to country table, one `a.b.c.d/len,Country` entry per line.
/// Lines starting with '#' and blank lines are ignored. Longest prefix wins.
class GeoMap {
public:
    static GeoMap parse(std::istream& in);  // throws std::invalid_argument with the line number
    static GeoMap load(const std::filesystem::path& p);
    std::string lookup(std::string_view ip) const;  // "Unknown" when unmatched
    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        std::uint32_t net;
        std::uint32_t mask;
        int len;
        std::string country;
    };
    std::vector<Entry> entries_;  // sorted by descending prefix length
};

struct CountryCount {
    std::string country;
    std::uint64_t connections = 0;
};

struct SourceReport {
    std::vector<SourceSummary> sources;     // sorted by ip
    std::vector<std::string> dual_service;  // ips seen on both web and telnet, sorted
    std::optional<std::vector<CountryCount>> countries;  // connect events per country, descending
};

SourceReport distinct_sources(const EventSet& es, const GeoMap* geo = nullptr);

inline const std::set<std::string>& technique_ids() {
    static const std::set<std::string> ids{"T0807", "T0812", "T0816", "T0819", "T0846",
                                           "T0857", "T0859", "T0885", "T0888"};
    return ids;
}
std::string_view technique_name(std::string_view id);

struct TechniqueTag {
    std::string technique_id;
    std::size_t event_ref = 0;  // index into EventSet::events
    std::string rationale;
    bool operator==(const TechniqueTag&) const = default;
};

/// Tags in event order; an event may carry several techniques, listed by id.
std::vector<TechniqueTag> tag_techniques(const EventSet& es);
std::vector<TechniqueTag> tag_event(const eventlog::LogEvent& e, std::size_t index);

struct RqReport {
    // RQ1: exploitation of the two device weaknesses
    std::vector<std::size_t> default_credential_logins;
    std::vector<std::size_t> direct_status_access;
    std::vector<std::size_t> authenticated_status_reads;
    // RQ2: sources that touched both services, with their full timelines
    struct Timeline {
        std::string ip;
        std::vector<std::size_t> events;
    };
    std::vector<Timeline> cross_service;
    // RQ3: persistence attempts
    std::vector<std::size_t> password_changes;
    std::vector<std::size_t> config_changes;
    std::vector<std::size_t> uploads;
    std::vector<std::size_t> escalations;

    bool rq3_empty() const {
        return password_changes.empty() && config_changes.empty() && uploads.empty() && escalations.empty();
    }
};

RqReport answer_rqs(const EventSet& es);

/// One-line human description of an event.
std::string describe(const eventlog::LogEvent& e);

std::string render_top_credentials(const std::vector<CredentialCount>& rows, Format f);
std::string render_daily(const std::vector<DailyCount>& rows, Format f);
std::string render_sources(const SourceReport& r, std::size_t n, Format f);
std::string render_techniques(const EventSet& es, const std::vector<TechniqueTag>& tags, Format f);
std::string render_rqs(const EventSet& es, const RqReport& r, Format f);

}  // namespace honeynet::analyzer
