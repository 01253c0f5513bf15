#include "honeynet/replay.hpp"

#include "honeynet/nmea.hpp"

#include <cctype>
#include <fstream>

namespace honeynet::replay {

namespace {

bool looks_timestamped(std::string_view line) {
    return line.size() >= 4 && std::isdigit(static_cast<unsigned char>(line[0])) &&
           std::isdigit(static_cast<unsigned char>(line[1])) &&
           std::isdigit(static_cast<unsigned char>(line[2])) &&
           std::isdigit(static_cast<unsigned char>(line[3]));
}

}  // namespace

Recording load_recording(std::istream& in, Millis interval) {
    Recording rec;
    std::optional<Timestamp> base;  // absolute time corresponding to `base_offset`
    Millis base_offset{0};
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string_view line = raw;
        if (trim(line).empty()) continue;

        std::optional<Millis> offset;
        if (looks_timestamped(line)) {
            auto space = line.find(' ');
            auto stamp = parse_iso8601(line.substr(0, space));
            if (space == std::string_view::npos || !stamp)
                throw ReplayError(ReplayErrc::UnparseableTimestamp,
                                  "line " + std::to_string(line_no) + ": unparseable timestamp prefix");
            if (!base) {
                base = *stamp;
                base_offset = rec.entries.empty() ? Millis{0} : rec.last_offset() + interval;
            }
            offset = base_offset + std::chrono::duration_cast<Millis>(*stamp - *base);
            line = line.substr(space + 1);
        }

        Millis next = offset ? *offset
                             : (rec.entries.empty() ? Millis{0} : rec.last_offset() + interval);
        // clock steps backwards in a recording are flattened, never reordered
        if (!rec.entries.empty() && next < rec.last_offset()) next = rec.last_offset();

        RecordingEntry entry{next, std::string(line), false};
        try {
            nmea::parse_sentence(entry.line);
        } catch (const nmea::NmeaError&) {
            entry.verbatim = true;
        }
        rec.entries.push_back(std::move(entry));
    }

    if (rec.entries.empty()) throw ReplayError(ReplayErrc::EmptyRecording, "recording has no sentences");
    return rec;
}

Recording load_recording_file(const std::string& path, Millis interval) {
    std::ifstream in(path);
    if (!in) throw ReplayError(ReplayErrc::EmptyRecording, "cannot open recording " + path);
    return load_recording(in, interval);
}

Timestamp::duration scaled_offset(Millis offset, double rate) {
    auto ns = std::chrono::duration<double, std::nano>(offset) / rate;
    return std::chrono::duration_cast<Timestamp::duration>(
        std::chrono::nanoseconds{static_cast<long long>(ns.count() + 0.5)});
}

ReplayStats run_replay(const Recording& recording, const ReplayConfig& cfg, Clock& clock,
                       DatagramSink& sink, std::stop_token stop,
                       const std::function<void(const std::string&)>& on_error) {
    if (recording.entries.empty())
        throw ReplayError(ReplayErrc::EmptyRecording, "recording has no sentences");
    if (!(cfg.rate_multiplier > 0.0))
        throw ReplayError(ReplayErrc::BadConfig, "rate_multiplier must be positive");

    ReplayStats stats;
    Timestamp cycle_start = clock.now();
    while (true) {
        ++stats.cycles_started;
        Timestamp last_emit = cycle_start;
        for (const auto& entry : recording.entries) {
            if (stop.stop_requested()) return stats;
            if (cfg.max_ticks && stats.emitted >= *cfg.max_ticks) return stats;

            last_emit = cycle_start + scaled_offset(entry.offset, cfg.rate_multiplier);
            if (!clock.sleep_until(last_emit, stop)) return stats;
            try {
                sink.send(entry.line);
            } catch (const std::exception& e) {
                ++stats.send_errors;
                if (on_error) on_error(e.what());
            }
            ++stats.emitted;
        }
        if (!cfg.loop_forever) return stats;
        cycle_start = last_emit + cfg.interval -
                      scaled_offset(recording.entries.front().offset, cfg.rate_multiplier);
    }
}

}  // namespace honeynet::replay
