#include "honeynet/common.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace honeynet {

namespace {

std::string to_hex(const unsigned char* data, std::size_t n) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xF]);
    }
    return out;
}

bool parse_uint(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

bool SystemClock::sleep_until(Timestamp deadline, std::stop_token stop) {
    std::mutex mu;
    std::condition_variable_any cv;
    std::unique_lock lock(mu);
    cv.wait_until(lock, stop, deadline, [] { return false; });
    return !stop.stop_requested();
}

SystemClock& SystemClock::instance() {
    static SystemClock clock;
    return clock;
}

Timestamp VirtualClock::now() const {
    std::lock_guard lock(mu_);
    return now_;
}

bool VirtualClock::sleep_until(Timestamp deadline, std::stop_token stop) {
    if (stop.stop_requested()) return false;
    std::lock_guard lock(mu_);
    if (deadline > now_) now_ = deadline;
    return true;
}

void VirtualClock::advance(std::chrono::nanoseconds d) {
    std::lock_guard lock(mu_);
    now_ += std::chrono::duration_cast<Timestamp::duration>(d);
}

void VirtualClock::set(Timestamp t) {
    std::lock_guard lock(mu_);
    now_ = t;
}

std::string_view role_name(Role r) {
    switch (r) {
        case Role::User: return "User";
        case Role::SysAdmin: return "SysAdmin";
        case Role::Dealer: return "Dealer";
    }
    return "User";
}

std::optional<Role> parse_role(std::string_view s) {
    if (s == "User") return Role::User;
    if (s == "SysAdmin") return Role::SysAdmin;
    if (s == "Dealer") return Role::Dealer;
    return std::nullopt;
}

Timestamp truncate_to_ms(Timestamp t) {
    return std::chrono::time_point_cast<Millis>(t);
}

std::string format_iso8601_ms(Timestamp t) {
    using namespace std::chrono;
    auto ms_total = time_point_cast<milliseconds>(t);
    auto day = floor<days>(ms_total);
    year_month_day ymd{day};
    hh_mm_ss hms{ms_total - day};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(hms.hours().count()),
                  static_cast<long long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()),
                  static_cast<long long>(hms.subseconds().count()));
    return buf;
}

std::string format_date(Timestamp t) {
    using namespace std::chrono;
    year_month_day ymd{floor<days>(t)};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<Timestamp> parse_iso8601(std::string_view s) {
    using namespace std::chrono;
    // YYYY-MM-DDThh:mm:ss
    if (s.size() < 20 || s.back() != 'Z') return std::nullopt;
    if (s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':')
        return std::nullopt;
    int y, mo, d, h, mi, sec;
    if (!parse_uint(s.substr(0, 4), y) || !parse_uint(s.substr(5, 2), mo) ||
        !parse_uint(s.substr(8, 2), d) || !parse_uint(s.substr(11, 2), h) ||
        !parse_uint(s.substr(14, 2), mi) || !parse_uint(s.substr(17, 2), sec))
        return std::nullopt;
    if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;

    nanoseconds frac{0};
    std::string_view rest = s.substr(19, s.size() - 20);
    if (!rest.empty()) {
        if (rest[0] != '.' || rest.size() < 2 || rest.size() > 10) return std::nullopt;
        long long scale = 100'000'000;
        for (char c : rest.substr(1)) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            frac += nanoseconds{(c - '0') * scale};
            scale /= 10;
        }
    }
    auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
    return time_point_cast<Timestamp::duration>(tp + frac);
}

std::string to_upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string random_hex(std::size_t bytes) {
    std::string raw(bytes, '\0');
    if (RAND_bytes(reinterpret_cast<unsigned char*>(raw.data()), static_cast<int>(bytes)) != 1)
        throw std::runtime_error("RAND_bytes failed");
    return to_hex(reinterpret_cast<const unsigned char*>(raw.data()), bytes);
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("EVP_Digest failed");
    return to_hex(md.data(), len);
}

}  // namespace honeynet
