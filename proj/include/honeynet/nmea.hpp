#pragma once

#include "honeynet/common.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace honeynet::nmea {

/// Longest legal sentence, counting the leading `$` and the trailing CRLF.
inline constexpr std::size_t kMaxSentenceLength = 82;

enum class NmeaErrc {
    MissingStart,
    BadChecksum,
    Malformed,
    FieldContainsReserved,
    FieldDecode,
    OutOfRange,
};

std::string_view errc_name(NmeaErrc e);

class NmeaError : public std::runtime_error {
public:
    NmeaError(NmeaErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    NmeaErrc code() const noexcept { return code_; }

private:
    NmeaErrc code_;
};

struct NmeaSentence {
    std::string talker;         // e.g. "GP"
    std::string sentence_type;  // e.g. "RMC"
    std::vector<std::string> fields;
    std::uint8_t checksum = 0;

    bool operator==(const NmeaSentence&) const = default;
};

struct NavFix {
    double latitude = 0.0;   // signed decimal degrees, north positive
    double longitude = 0.0;  // signed decimal degrees, east positive
    double heading_true = 0.0;
    double speed_over_ground = 0.0;  // knots
    Timestamp utc{};

    bool operator==(const NavFix&) const = default;
};

/// XOR of every byte in `payload` (the text between `$` and `*`).
std::uint8_t compute_checksum(std::string_view payload);

/// Builds a sentence whose checksum field matches its content.
NmeaSentence make_sentence(std::string talker, std::string sentence_type,
                           std::vector<std::string> fields);

/// Parses one raw sentence, with or without the trailing CR/LF.
/// The checksum is mandatory and verified.
NmeaSentence parse_sentence(std::string_view line);

/// Renders `$TTSSS,f1,f2*HH\r\n`. The checksum is recomputed from content.
std::string encode_sentence(const NmeaSentence& s);

/// Folds a navigation sentence into `prior`. RMC, GGA, HDT and VTG are
/// decoded; every other type returns `prior` unchanged. Empty fields keep
/// the prior value for that quantity.
NavFix decode_fix(const NmeaSentence& s, const NavFix& prior);

/// `ddmm.mmmm` / `dddmm.mmmm` plus hemisphere letter to signed degrees.
double parse_coordinate(std::string_view value, std::string_view hemisphere, bool is_latitude);

/// Inverse of parse_coordinate: returns the ddmm field and hemisphere letter.
std::pair<std::string, std::string> format_coordinate(double degrees, bool is_latitude,
                                                      int minute_decimals = 6);

double normalize_heading(double degrees);

/// Attacker-facing rendering of decimal degrees (four decimals).
std::string render_degrees(double degrees);

/// RMC and HDT sentences describing `fix`, used to synthesize voyages.
std::vector<NmeaSentence> encode_fix(const NavFix& fix, std::string_view talker = "GP");

}  // namespace honeynet::nmea
