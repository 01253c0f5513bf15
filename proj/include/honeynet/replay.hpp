#pragma once

#include "honeynet/common.hpp"

#include <functional>
#include <istream>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <vector>

namespace honeynet::replay {

enum class ReplayErrc { EmptyRecording, UnparseableTimestamp, TargetUnreachable, BadConfig };

class ReplayError : public std::runtime_error {
public:
    ReplayError(ReplayErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ReplayErrc code() const noexcept { return code_; }

private:
    ReplayErrc code_;
};

struct RecordingEntry {
    Millis offset{0};      // from recording start
    std::string line;      // raw sentence text, no line terminator
    bool verbatim = false; // line does not parse as NMEA 0183; replayed as-is

    bool operator==(const RecordingEntry&) const = default;
};

/// A recorded voyage. Offsets are non-decreasing.
struct Recording {
    std::vector<RecordingEntry> entries;

    Millis last_offset() const { return entries.empty() ? Millis{0} : entries.back().offset; }
};

/// Reads one sentence per line (LF or CRLF). A line may carry an
/// `YYYY-MM-DDThh:mm:ss(.fff)?Z ` prefix giving its absolute time; lines
/// without one are spaced `interval` after the previous entry.
Recording load_recording(std::istream& in, Millis interval = Millis{1000});
Recording load_recording_file(const std::string& path, Millis interval = Millis{1000});

struct ReplayConfig {
    double rate_multiplier = 1.0;  // 1.0 = real time, 2.0 = twice as fast
    Millis interval{1000};         // gap inserted between the last entry and the next cycle
    bool loop_forever = true;
    std::optional<std::size_t> max_ticks;  // stop after this many emissions
};

/// Receives one sentence per datagram. Throws ReplayError(TargetUnreachable)
/// when the consumer is not there; the replayer logs and carries on.
class DatagramSink {
public:
    virtual ~DatagramSink() = default;
    virtual void send(std::string_view datagram) = 0;
};

struct ReplayStats {
    std::size_t emitted = 0;
    std::size_t send_errors = 0;
    std::size_t cycles_started = 0;
};

/// Wall-offset of entry `i` within a cycle at the given rate.
Timestamp::duration scaled_offset(Millis offset, double rate);

/// Drives emissions against `clock` until `max_ticks`, a non-looping
/// recording runs out, or `stop` is requested. Entry i of a cycle goes out at
/// cycle_start + offset_i / rate; the next cycle starts `interval` after the
/// last entry of the previous one.
ReplayStats run_replay(const Recording& recording, const ReplayConfig& cfg, Clock& clock,
                       DatagramSink& sink, std::stop_token stop = {},
                       const std::function<void(const std::string&)>& on_error = {});

}  // namespace honeynet::replay
