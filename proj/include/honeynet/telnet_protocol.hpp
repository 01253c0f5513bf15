#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace honeynet::telnet {

namespace iac {
inline constexpr unsigned char SE = 240;
inline constexpr unsigned char NOP = 241;
inline constexpr unsigned char SB = 250;
inline constexpr unsigned char WILL = 251;
inline constexpr unsigned char WONT = 252;
inline constexpr unsigned char DO = 253;
inline constexpr unsigned char DONT = 254;
inline constexpr unsigned char IAC = 255;
inline constexpr unsigned char ECHO = 1;
}  // namespace iac

std::string command(unsigned char verb, unsigned char option);

/// Strips Telnet commands from the inbound stream and produces the replies
/// a minimal device would send: every option is refused except server-side
/// ECHO, which the session turns on while a password is typed.
class OptionDecoder {
public:
    struct Result {
        std::string data;     // application bytes
        std::string replies;  // negotiation bytes to send back
    };

    Result feed(std::string_view bytes);

    /// Bytes announcing (or withdrawing) server echo; empty when already in that state.
    std::string set_echo(bool on);
    bool echo() const { return echo_; }

private:
    enum class St { Data, Iac, Verb, Sb, SbIac };
    St st_ = St::Data;
    unsigned char verb_ = 0;
    bool echo_ = false;
};

/// Splits application bytes into lines. Accepts CR LF, CR NUL, bare LF and
/// bare CR as terminators; BS and DEL erase one byte. Lines longer than
/// `max_line` are cut at that length.
class LineAssembler {
public:
    explicit LineAssembler(std::size_t max_line = 64 * 1024) : max_line_(max_line) {}

    std::vector<std::string> feed(std::string_view data);
    const std::string& partial() const { return buf_; }

private:
    std::size_t max_line_;
    std::string buf_;
    bool after_cr_ = false;
};

}  // namespace honeynet::telnet
