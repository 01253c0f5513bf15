#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>

namespace honeynet {

using Timestamp = std::chrono::system_clock::time_point;
using Millis = std::chrono::milliseconds;

/// Time source shared by every component that schedules or stamps anything.
/// Production code runs on SystemClock; tests inject a VirtualClock.
class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() const = 0;
    /// Blocks until `deadline` or until `stop` is requested.
    /// Returns false when woken by the stop request.
    virtual bool sleep_until(Timestamp deadline, std::stop_token stop) = 0;
};

class SystemClock final : public Clock {
public:
    Timestamp now() const override { return std::chrono::system_clock::now(); }
    bool sleep_until(Timestamp deadline, std::stop_token stop) override;

    static SystemClock& instance();
};

/// Manually driven clock. sleep_until jumps straight to the deadline, so
/// schedules that would take minutes of wall time run instantly.
class VirtualClock final : public Clock {
public:
    explicit VirtualClock(Timestamp start = Timestamp{}) : now_(start) {}

    Timestamp now() const override;
    bool sleep_until(Timestamp deadline, std::stop_token stop) override;

    void advance(std::chrono::nanoseconds d);
    void set(Timestamp t);

private:
    mutable std::mutex mu_;
    Timestamp now_;
};

/// Privilege levels of the emulated portal, ordered User < SysAdmin < Dealer.
enum class Role : std::uint8_t { User = 0, SysAdmin = 1, Dealer = 2 };

constexpr bool role_at_least(Role have, Role need) {
    return static_cast<int>(have) >= static_cast<int>(need);
}

std::string_view role_name(Role r);
std::optional<Role> parse_role(std::string_view s);

/// ISO-8601 UTC with millisecond precision, e.g. 2025-04-03T10:00:00.123Z.
std::string format_iso8601_ms(Timestamp t);
/// Accepts `YYYY-MM-DDThh:mm:ss(.f+)?Z`.
std::optional<Timestamp> parse_iso8601(std::string_view s);
/// UTC calendar date `YYYY-MM-DD`.
std::string format_date(Timestamp t);

Timestamp truncate_to_ms(Timestamp t);

std::string to_upper(std::string_view s);
std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

/// Cryptographically random bytes rendered as lowercase hex.
std::string random_hex(std::size_t bytes);
/// SHA-256 of `data` as lowercase hex.
std::string sha256_hex(std::string_view data);

}  // namespace honeynet
