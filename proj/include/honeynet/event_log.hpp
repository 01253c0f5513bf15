#pragma once

#include "honeynet/common.hpp"

#include <array>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace honeynet::eventlog {

enum class Service : std::uint8_t { Web, Telnet, Replayer, Store };
inline constexpr std::array kAllServices{Service::Web, Service::Telnet, Service::Replayer, Service::Store};

std::string_view service_name(Service s);
std::optional<Service> parse_service(std::string_view s);

inline constexpr int kSchemaVersion = 1;

struct LogEvent {
    Timestamp ts{};  // stamped by the sink at emit time
    Service service = Service::Web;
    std::string event;
    std::optional<std::string> session;
    std::string src_ip;
    std::optional<std::uint16_t> src_port;
    nlohmann::json detail = nlohmann::json::object();
    int schema_version = kSchemaVersion;

    bool operator==(const LogEvent&) const = default;
};

nlohmann::json to_json(const LogEvent& e);
/// Throws std::invalid_argument on a structurally invalid object.
LogEvent from_json(const nlohmann::json& j);

// Invalid UTF-8 in attacker input is replaced with U+FFFD.
std::string to_line(const LogEvent& e);
std::optional<LogEvent> parse_line(std::string_view line);

std::string file_name(Service s, Timestamp ts);

class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void emit(LogEvent e) = 0;
};

/// Keeps a per-service non-decreasing millisecond clock.
class Stamper {
public:
    explicit Stamper(Clock& clock) : clock_(clock) {}
    Timestamp stamp(Service s);  // caller holds its own lock

private:
    Clock& clock_;
    std::map<Service, Timestamp> last_;
};

class MemorySink final : public EventSink {
public:
    explicit MemorySink(Clock& clock) : stamper_(clock) {}

    void emit(LogEvent e) override;
    std::vector<LogEvent> events() const;
    std::vector<LogEvent> of_type(std::string_view event) const;
    void clear();

    /// Called after every emit, outside the lock.
    void on_emit(std::function<void(const LogEvent&)> cb);

private:
    mutable std::mutex mu_;
    Stamper stamper_;
    std::vector<LogEvent> events_;
    std::function<void(const LogEvent&)> cb_;
};

struct EventLogConfig {
    std::filesystem::path directory;
    std::size_t queue_capacity = 65536;
};

/// JSON-lines writer: producers enqueue into a bounded buffer, one
/// background thread appends to `<service>-YYYY-MM-DD.jsonl`.
///
/// When the buffer is full the event is dropped and counted; the next
/// event written for that service is preceded by a `log.dropped` marker
/// carrying the count. Write failures take the same path.
class EventLog final : public EventSink {
public:
    EventLog(EventLogConfig cfg, Clock& clock);
    ~EventLog() override;
    EventLog(const EventLog&) = delete;
    EventLog& operator=(const EventLog&) = delete;

    void emit(LogEvent e) override;

    /// Blocks until everything enqueued so far is on disk.
    void flush();

    std::uint64_t written() const;
    std::uint64_t dropped() const;

    const EventLogConfig& config() const { return cfg_; }

private:
    struct Pending {
        LogEvent event;
        std::uint64_t seq;
    };

    void run(std::stop_token st);
    bool write_one(const LogEvent& e);

    EventLogConfig cfg_;
    Stamper stamper_;

    mutable std::mutex mu_;
    std::condition_variable_any cv_;
    std::condition_variable flushed_cv_;
    std::deque<Pending> queue_;
    std::map<Service, std::uint64_t> pending_drops_;
    std::uint64_t enqueued_seq_ = 0;
    std::uint64_t done_seq_ = 0;
    std::uint64_t written_ = 0;
    std::uint64_t dropped_ = 0;

    // writer-thread only
    struct OpenFile {
        std::string date;
        std::FILE* fp = nullptr;
    };
    std::map<Service, OpenFile> files_;

    std::jthread worker_;
};

/// Forwards each event to every target.
class TeeSink final : public EventSink {
public:
    explicit TeeSink(std::vector<EventSink*> targets) : targets_(std::move(targets)) {}
    void emit(LogEvent e) override {
        for (auto* t : targets_) t->emit(e);
    }

private:
    std::vector<EventSink*> targets_;
};

}  // namespace honeynet::eventlog
