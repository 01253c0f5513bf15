#include "honeynet/telnet_protocol.hpp"

namespace honeynet::telnet {

std::string command(unsigned char verb, unsigned char option) {
    return {static_cast<char>(iac::IAC), static_cast<char>(verb), static_cast<char>(option)};
}

OptionDecoder::Result OptionDecoder::feed(std::string_view bytes) {
    Result r;
    for (char ch : bytes) {
        auto c = static_cast<unsigned char>(ch);
        switch (st_) {
            case St::Data:
                if (c == iac::IAC)
                    st_ = St::Iac;
                else
                    r.data.push_back(ch);
                break;
            case St::Iac:
                if (c == iac::IAC) {
                    r.data.push_back(ch);
                    st_ = St::Data;
                } else if (c >= iac::WILL) {
                    verb_ = c;
                    st_ = St::Verb;
                } else if (c == iac::SB) {
                    st_ = St::Sb;
                } else {
                    st_ = St::Data;  // NOP, AYT, GA, stray SE and the like
                }
                break;
            case St::Verb:
                st_ = St::Data;
                if (verb_ == iac::DO) {
                    if (!(c == iac::ECHO && echo_)) r.replies += command(iac::WONT, c);
                } else if (verb_ == iac::DONT) {
                    if (c == iac::ECHO && echo_) {
                        echo_ = false;
                        r.replies += command(iac::WONT, c);
                    }
                } else if (verb_ == iac::WILL) {
                    r.replies += command(iac::DONT, c);
                }
                break;
            case St::Sb:
                if (c == iac::IAC) st_ = St::SbIac;
                break;
            case St::SbIac:
                st_ = c == iac::SE ? St::Data : St::Sb;
                break;
        }
    }
    return r;
}

std::string OptionDecoder::set_echo(bool on) {
    if (on == echo_) return {};
    echo_ = on;
    return command(on ? iac::WILL : iac::WONT, iac::ECHO);
}

std::vector<std::string> LineAssembler::feed(std::string_view data) {
    std::vector<std::string> lines;
    for (char c : data) {
        if (after_cr_) {
            after_cr_ = false;
            if (c == '\n' || c == '\0') continue;
        }
        if (c == '\r' || c == '\n') {
            lines.push_back(std::move(buf_));
            buf_.clear();
            after_cr_ = c == '\r';
            continue;
        }
        if (c == '\b' || c == '\x7f') {
            if (!buf_.empty()) buf_.pop_back();
            continue;
        }
        buf_.push_back(c);
        if (buf_.size() >= max_line_) {
            lines.push_back(std::move(buf_));
            buf_.clear();
        }
    }
    return lines;
}

}  // namespace honeynet::telnet
