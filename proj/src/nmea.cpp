#include "honeynet/nmea.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace honeynet::nmea {

namespace {

bool is_upper_alnum(std::string_view s) {
    for (char c : s) {
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return false;
    }
    return true;
}

bool is_reserved_field_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return c == '$' || c == '*' || c == ',' || u < 0x20 || u > 0x7E;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

const std::string& field(const NmeaSentence& s, std::size_t i) {
    static const std::string empty;
    return i < s.fields.size() ? s.fields[i] : empty;
}

double parse_number(std::string_view text, std::string_view what) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size() || !std::isfinite(v))
        throw NmeaError(NmeaErrc::FieldDecode,
                        std::string(what) + ": not a number: '" + std::string(text) + "'");
    return v;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// hhmmss(.sss) -> time of day
std::chrono::milliseconds parse_time_of_day(std::string_view t) {
    if (t.size() < 6 || !all_digits(t.substr(0, 6)))
        throw NmeaError(NmeaErrc::FieldDecode, "bad UTC time '" + std::string(t) + "'");
    int hh = (t[0] - '0') * 10 + (t[1] - '0');
    int mm = (t[2] - '0') * 10 + (t[3] - '0');
    double ss = parse_number(t.substr(4), "UTC seconds");
    if (hh > 23 || mm > 59 || ss < 0 || ss >= 61)
        throw NmeaError(NmeaErrc::OutOfRange, "UTC time out of range '" + std::string(t) + "'");
    auto ms = static_cast<long long>(std::llround(ss * 1000.0));
    return std::chrono::hours{hh} + std::chrono::minutes{mm} + std::chrono::milliseconds{ms};
}

// ddmmyy -> calendar day
std::chrono::sys_days parse_date(std::string_view d) {
    using namespace std::chrono;
    if (d.size() != 6 || !all_digits(d))
        throw NmeaError(NmeaErrc::FieldDecode, "bad date '" + std::string(d) + "'");
    unsigned dd = (d[0] - '0') * 10 + (d[1] - '0');
    unsigned mo = (d[2] - '0') * 10 + (d[3] - '0');
    int yy = (d[4] - '0') * 10 + (d[5] - '0');
    int yyyy = yy < 80 ? 2000 + yy : 1900 + yy;
    year_month_day ymd{year{yyyy}, month{mo}, day{dd}};
    if (!ymd.ok()) throw NmeaError(NmeaErrc::OutOfRange, "invalid date '" + std::string(d) + "'");
    return sys_days{ymd};
}

Timestamp combine(std::chrono::sys_days day, std::chrono::milliseconds tod) {
    return std::chrono::time_point_cast<Timestamp::duration>(day + tod);
}

std::chrono::sys_days day_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

double parse_speed(std::string_view text) {
    double v = parse_number(text, "speed");
    if (v < 0) throw NmeaError(NmeaErrc::OutOfRange, "negative speed");
    return v;
}

void apply_position(NavFix& fix, const NmeaSentence& s, std::size_t lat_idx) {
    const auto& lat = field(s, lat_idx);
    const auto& lat_h = field(s, lat_idx + 1);
    const auto& lon = field(s, lat_idx + 2);
    const auto& lon_h = field(s, lat_idx + 3);
    if (!lat.empty()) fix.latitude = parse_coordinate(lat, lat_h, true);
    if (!lon.empty()) fix.longitude = parse_coordinate(lon, lon_h, false);
}

}  // namespace

std::string_view errc_name(NmeaErrc e) {
    switch (e) {
        case NmeaErrc::MissingStart: return "MissingStart";
        case NmeaErrc::BadChecksum: return "BadChecksum";
        case NmeaErrc::Malformed: return "Malformed";
        case NmeaErrc::FieldContainsReserved: return "FieldContainsReserved";
        case NmeaErrc::FieldDecode: return "FieldDecode";
        case NmeaErrc::OutOfRange: return "OutOfRange";
    }
    return "Unknown";
}

std::uint8_t compute_checksum(std::string_view payload) {
    std::uint8_t sum = 0;
    for (char c : payload) sum ^= static_cast<std::uint8_t>(c);
    return sum;
}

NmeaSentence make_sentence(std::string talker, std::string sentence_type,
                           std::vector<std::string> fields) {
    NmeaSentence s{std::move(talker), std::move(sentence_type), std::move(fields), 0};
    std::string payload = s.talker + s.sentence_type;
    for (const auto& f : s.fields) {
        payload.push_back(',');
        payload += f;
    }
    s.checksum = compute_checksum(payload);
    return s;
}

NmeaSentence parse_sentence(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);

    if (line.empty() || line.front() != '$')
        throw NmeaError(NmeaErrc::MissingStart, "sentence does not start with '$'");
    if (line.size() + 2 > kMaxSentenceLength)
        throw NmeaError(NmeaErrc::Malformed, "sentence longer than 82 characters");
    for (char c : line) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x20 || u > 0x7E)
            throw NmeaError(NmeaErrc::Malformed, "non-printable or non-ASCII byte");
    }

    auto star = line.rfind('*');
    if (star == std::string_view::npos)
        throw NmeaError(NmeaErrc::Malformed, "missing '*' checksum delimiter");
    if (star + 3 != line.size())
        throw NmeaError(NmeaErrc::Malformed, "checksum must be exactly two hex digits");
    int hi = hex_value(line[star + 1]);
    int lo = hex_value(line[star + 2]);
    if (hi < 0 || lo < 0) throw NmeaError(NmeaErrc::Malformed, "checksum is not hex");

    std::string_view payload = line.substr(1, star - 1);
    if (payload.find_first_of("$*") != std::string_view::npos)
        throw NmeaError(NmeaErrc::Malformed, "reserved character inside payload");

    auto declared = static_cast<std::uint8_t>(hi * 16 + lo);
    auto computed = compute_checksum(payload);
    if (declared != computed) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "checksum mismatch: declared %02X, computed %02X",
                      declared, computed);
        throw NmeaError(NmeaErrc::BadChecksum, buf);
    }

    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (true) {
        auto comma = payload.find(',', start);
        tokens.emplace_back(payload.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    const std::string& address = tokens.front();
    if (address.size() != 5 || !is_upper_alnum(address))
        throw NmeaError(NmeaErrc::Malformed, "address field must be 5 uppercase characters");

    NmeaSentence s;
    s.talker = address.substr(0, 2);
    s.sentence_type = address.substr(2, 3);
    s.fields.assign(std::make_move_iterator(tokens.begin() + 1),
                    std::make_move_iterator(tokens.end()));
    s.checksum = declared;
    return s;
}

std::string encode_sentence(const NmeaSentence& s) {
    if (s.talker.size() != 2 || !is_upper_alnum(s.talker))
        throw NmeaError(NmeaErrc::Malformed, "talker must be 2 uppercase characters");
    if (s.sentence_type.size() != 3 || !is_upper_alnum(s.sentence_type))
        throw NmeaError(NmeaErrc::Malformed, "sentence type must be 3 uppercase characters");

    std::string payload = s.talker + s.sentence_type;
    for (const auto& f : s.fields) {
        for (char c : f) {
            if (is_reserved_field_char(c))
                throw NmeaError(NmeaErrc::FieldContainsReserved,
                                "field contains reserved character: '" + f + "'");
        }
        payload.push_back(',');
        payload += f;
    }

    char tail[6];
    std::snprintf(tail, sizeof tail, "*%02X\r\n", compute_checksum(payload));
    std::string out = "$" + payload + tail;
    if (out.size() > kMaxSentenceLength)
        throw NmeaError(NmeaErrc::Malformed, "encoded sentence longer than 82 characters");
    return out;
}

double parse_coordinate(std::string_view value, std::string_view hemisphere, bool is_latitude) {
    auto dot = value.find('.');
    std::string_view whole = value.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : value.substr(dot);
    if (whole.size() < 3 || !all_digits(whole) || (!frac.empty() && !all_digits(frac.substr(1))))
        throw NmeaError(NmeaErrc::FieldDecode, "bad coordinate '" + std::string(value) + "'");

    std::string_view deg_text = whole.substr(0, whole.size() - 2);
    std::string minutes_text(whole.substr(whole.size() - 2));
    minutes_text += frac;

    double degrees = parse_number(deg_text, "coordinate degrees");
    double minutes = parse_number(minutes_text, "coordinate minutes");
    if (minutes >= 60.0)
        throw NmeaError(NmeaErrc::OutOfRange, "minutes >= 60 in '" + std::string(value) + "'");

    double v = degrees + minutes / 60.0;
    if (is_latitude) {
        if (hemisphere == "S") v = -v;
        else if (hemisphere != "N")
            throw NmeaError(NmeaErrc::FieldDecode, "bad latitude hemisphere '" + std::string(hemisphere) + "'");
        if (v < -90.0 || v > 90.0) throw NmeaError(NmeaErrc::OutOfRange, "latitude out of range");
    } else {
        if (hemisphere == "W") v = -v;
        else if (hemisphere != "E")
            throw NmeaError(NmeaErrc::FieldDecode, "bad longitude hemisphere '" + std::string(hemisphere) + "'");
        if (v < -180.0 || v > 180.0) throw NmeaError(NmeaErrc::OutOfRange, "longitude out of range");
    }
    return v;
}

std::pair<std::string, std::string> format_coordinate(double degrees, bool is_latitude,
                                                      int minute_decimals) {
    std::string hemi = is_latitude ? (degrees < 0 ? "S" : "N") : (degrees < 0 ? "W" : "E");
    double a = std::fabs(degrees);
    double whole = std::floor(a);
    double minutes = (a - whole) * 60.0;
    double scale = std::pow(10.0, minute_decimals);
    minutes = std::round(minutes * scale) / scale;
    if (minutes >= 60.0) {
        whole += 1.0;
        minutes = 0.0;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, is_latitude ? "%02d%0*.*f" : "%03d%0*.*f",
                  static_cast<int>(whole), minute_decimals + 3, minute_decimals, minutes);
    return {buf, hemi};
}

double normalize_heading(double degrees) {
    double h = std::fmod(degrees, 360.0);
    if (h < 0) h += 360.0;
    if (h >= 360.0) h = 0.0;
    return h;
}

std::string render_degrees(double degrees) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", degrees);
    // avoid rendering tiny negatives as "-0.0000"
    if (std::string_view(buf) == "-0.0000") return "0.0000";
    return buf;
}

NavFix decode_fix(const NmeaSentence& s, const NavFix& prior) {
    NavFix fix = prior;
    const std::string& type = s.sentence_type;

    if (type == "RMC") {
        const auto& time = field(s, 0);
        const auto& date = field(s, 8);
        apply_position(fix, s, 2);
        if (!field(s, 6).empty()) fix.speed_over_ground = parse_speed(field(s, 6));
        if (!time.empty()) {
            auto day = date.empty() ? day_of(prior.utc) : parse_date(date);
            fix.utc = combine(day, parse_time_of_day(time));
        }
    } else if (type == "GGA") {
        const auto& time = field(s, 0);
        apply_position(fix, s, 1);
        if (!time.empty()) fix.utc = combine(day_of(prior.utc), parse_time_of_day(time));
    } else if (type == "HDT") {
        if (!field(s, 0).empty())
            fix.heading_true = normalize_heading(parse_number(field(s, 0), "heading"));
    } else if (type == "VTG") {
        if (!field(s, 4).empty()) fix.speed_over_ground = parse_speed(field(s, 4));
        else if (!field(s, 6).empty()) fix.speed_over_ground = parse_speed(field(s, 6)) / 1.852;
    }
    return fix;
}

std::vector<NmeaSentence> encode_fix(const NavFix& fix, std::string_view talker) {
    using namespace std::chrono;
    auto ms = time_point_cast<milliseconds>(fix.utc);
    auto day = floor<days>(ms);
    year_month_day ymd{day};
    hh_mm_ss hms{ms - day};

    char time_buf[16];
    std::snprintf(time_buf, sizeof time_buf, "%02lld%02lld%02lld.%02lld",
                  static_cast<long long>(hms.hours().count()),
                  static_cast<long long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()),
                  static_cast<long long>(hms.subseconds().count() / 10));
    char date_buf[16];
    std::snprintf(date_buf, sizeof date_buf, "%02u%02u%02d", static_cast<unsigned>(ymd.day()),
                  static_cast<unsigned>(ymd.month()), static_cast<int>(ymd.year()) % 100);
    char sog[16], hdg[16];
    std::snprintf(sog, sizeof sog, "%.1f", fix.speed_over_ground);
    std::snprintf(hdg, sizeof hdg, "%.2f", normalize_heading(fix.heading_true));

    auto [lat, lat_h] = format_coordinate(fix.latitude, true, 4);
    auto [lon, lon_h] = format_coordinate(fix.longitude, false, 4);

    std::string t(talker);
    std::vector<NmeaSentence> out;
    out.push_back(make_sentence(t, "RMC",
                                {time_buf, "A", lat, lat_h, lon, lon_h, sog, hdg, date_buf, "", "", "A"}));
    out.push_back(make_sentence("HE", "HDT", {hdg, "T"}));
    return out;
}

}  // namespace honeynet::nmea
