#include "honeynet/http.hpp"

#include "honeynet/common.hpp"

#include <charconv>

namespace honeynet::http {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

bool is_token(std::string_view s) {
    if (s.empty()) return false;
    for (unsigned char c : s)
        if (c <= 32 || c >= 127 || std::string_view("()<>@,;:\\\"/[]?={}").find(static_cast<char>(c)) != std::string_view::npos)
            return false;
    return true;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// Parameter of a header value such as `multipart/form-data; boundary=xyz`.
std::optional<std::string> header_param(std::string_view value, std::string_view key) {
    std::size_t pos = 0;
    while ((pos = value.find(';', pos)) != std::string_view::npos) {
        ++pos;
        auto rest = trim(value.substr(pos));
        auto eq = rest.find('=');
        if (eq == std::string_view::npos) continue;
        if (!iequals(trim(rest.substr(0, eq)), key)) continue;
        auto v = rest.substr(eq + 1);
        auto end = v.find(';');
        v = trim(v.substr(0, end));
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
        return std::string(v);
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> Request::header(std::string_view name) const {
    for (const auto& [k, v] : headers)
        if (iequals(k, name)) return v;
    return std::nullopt;
}

std::optional<std::string> Response::header(std::string_view name) const {
    for (const auto& [k, v] : headers)
        if (iequals(k, name)) return v;
    return std::nullopt;
}

void Response::set(std::string name, std::string value) {
    for (auto& [k, v] : headers)
        if (iequals(k, name)) {
            v = std::move(value);
            return;
        }
    headers.emplace_back(std::move(name), std::move(value));
}

std::string_view reason_phrase(int status) {
    switch (status) {
        case 200: return "OK";
        case 302: return "Redirect";
        case 400: return "Bad Request";
        case 404: return "Site or Page Not Found";
        case 405: return "Method Not Allowed";
        case 413: return "Request Entity Too Large";
        case 500: return "Internal Server Error";
        case 503: return "Service Unavailable";
    }
    return "Unknown";
}

std::string serialize(const Response& r) {
    std::string out = "HTTP/1.1 " + std::to_string(r.status) + " " + std::string(reason_phrase(r.status)) + "\r\n";
    for (const auto& [k, v] : r.headers) out += k + ": " + v + "\r\n";
    out += "\r\n";
    out += r.body;
    return out;
}

RequestParser::State RequestParser::fail(std::string why) {
    error_ = std::move(why);
    state_ = State::Error;
    return state_;
}

RequestParser::State RequestParser::feed(std::string_view bytes) {
    if (state_ != State::NeedMore) return state_;
    buf_.append(bytes);
    if (!have_head_) {
        auto end = buf_.find("\r\n\r\n");
        if (end == std::string::npos) {
            if (buf_.size() > max_head_) return fail("header too large");
            return state_;
        }
        if (end > max_head_) return fail("header too large");
        if (parse_head(end) == State::Error) return state_;
        consumed_ += end + 4;
        buf_.erase(0, end + 4);
        have_head_ = true;
    }
    return parse_body();
}

RequestParser::State RequestParser::finish() {
    if (state_ == State::NeedMore) return fail(buf_.empty() && !have_head_ ? "empty request" : "truncated request");
    return state_;
}

RequestParser::State RequestParser::parse_head(std::size_t head_end) {
    std::string_view head(buf_.data(), head_end);
    auto eol = head.find("\r\n");
    auto line = head.substr(0, eol);
    auto sp1 = line.find(' ');
    auto sp2 = line.rfind(' ');
    if (sp1 == std::string_view::npos || sp2 == sp1) return fail("bad request line");
    req_.method = std::string(line.substr(0, sp1));
    req_.target = std::string(line.substr(sp1 + 1, sp2 - sp1 - 1));
    req_.version = std::string(line.substr(sp2 + 1));
    if (!is_token(req_.method)) return fail("bad method");
    if (req_.version != "HTTP/1.1" && req_.version != "HTTP/1.0") return fail("bad version");
    if (req_.target.empty() || req_.target.find_first_of(" \t") != std::string::npos) return fail("bad target");

    std::string_view target = req_.target;
    if (target.compare(0, 7, "http://") == 0) {
        auto slash = target.find('/', 7);
        target = slash == std::string_view::npos ? std::string_view("/") : target.substr(slash);
    }
    if (target.front() != '/' && target != "*") return fail("bad target");
    auto q = target.find('?');
    req_.path = url_decode(target.substr(0, q), false);
    if (q != std::string_view::npos) req_.query = std::string(target.substr(q + 1));

    std::size_t pos = eol == std::string_view::npos ? head.size() : eol + 2;
    while (pos < head.size()) {
        auto next = head.find("\r\n", pos);
        if (next == std::string_view::npos) next = head.size();
        auto h = head.substr(pos, next - pos);
        pos = next + 2;
        auto colon = h.find(':');
        if (colon == std::string_view::npos || !is_token(h.substr(0, colon))) return fail("bad header");
        req_.headers.emplace_back(std::string(h.substr(0, colon)), std::string(trim(h.substr(colon + 1))));
    }

    if (req_.version == "HTTP/1.1" && !req_.header("Host")) return fail("missing Host header");
    if (auto te = req_.header("Transfer-Encoding")) {
        if (!iequals(trim(*te), "chunked")) return fail("unsupported transfer encoding");
        chunked_ = true;
    } else if (auto cl = req_.header("Content-Length")) {
        auto v = trim(*cl);
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), content_length_);
        if (ec != std::errc{} || p != v.data() + v.size()) return fail("bad Content-Length");
        if (content_length_ > max_body_) return fail("body too large");
    }
    return State::NeedMore;
}

RequestParser::State RequestParser::parse_body() {
    if (!chunked_) {
        if (buf_.size() < content_length_) return state_;
        req_.body = buf_.substr(0, content_length_);
        state_ = State::Complete;
        return state_;
    }
    // Decode whole chunks from the front of buf_ into the body.
    for (;;) {
        auto eol = buf_.find("\r\n");
        if (eol == std::string::npos) return state_;
        std::string_view size_line(buf_.data(), eol);
        size_line = size_line.substr(0, size_line.find(';'));
        std::size_t size = 0;
        auto sl = trim(size_line);
        auto [p, ec] = std::from_chars(sl.data(), sl.data() + sl.size(), size, 16);
        if (ec != std::errc{} || p != sl.data() + sl.size()) return fail("bad chunk size");
        if (req_.body.size() + size > max_body_) return fail("body too large");
        if (size == 0) {
            auto trailer_end = buf_.find("\r\n", eol + 2);
            if (trailer_end == std::string::npos) return state_;
            state_ = State::Complete;
            return state_;
        }
        if (buf_.size() < eol + 2 + size + 2) return state_;
        req_.body.append(buf_, eol + 2, size);
        consumed_ += eol + 2 + size + 2;
        buf_.erase(0, eol + 2 + size + 2);
    }
}

std::string url_decode(std::string_view s, bool plus_is_space) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '+' && plus_is_space) {
            out.push_back(' ');
        } else if (c == '%' && i + 2 < s.size() && hex_value(s[i + 1]) >= 0 && hex_value(s[i + 2]) >= 0) {
            out.push_back(static_cast<char>(hex_value(s[i + 1]) * 16 + hex_value(s[i + 2])));
            i += 2;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::map<std::string, std::string> parse_urlencoded(std::string_view s) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto amp = s.find('&', pos);
        if (amp == std::string_view::npos) amp = s.size();
        auto pair = s.substr(pos, amp - pos);
        if (!pair.empty()) {
            auto eq = pair.find('=');
            auto key = url_decode(pair.substr(0, eq), true);
            auto val = eq == std::string_view::npos ? std::string() : url_decode(pair.substr(eq + 1), true);
            out[key] = val;
        }
        pos = amp + 1;
    }
    return out;
}

std::map<std::string, std::string> parse_cookies(std::string_view header) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos < header.size()) {
        auto semi = header.find(';', pos);
        if (semi == std::string_view::npos) semi = header.size();
        auto item = trim(header.substr(pos, semi - pos));
        auto eq = item.find('=');
        if (eq != std::string_view::npos) out.emplace(std::string(trim(item.substr(0, eq))), std::string(trim(item.substr(eq + 1))));
        pos = semi + 1;
    }
    return out;
}

std::optional<std::vector<MultipartPart>> parse_multipart(std::string_view content_type, std::string_view body) {
    if (to_lower(trim(content_type.substr(0, content_type.find(';')))) != "multipart/form-data") return std::nullopt;
    auto boundary = header_param(content_type, "boundary");
    if (!boundary || boundary->empty()) return std::nullopt;
    const std::string delim = "--" + *boundary;

    std::vector<MultipartPart> parts;
    auto pos = body.find(delim);
    if (pos == std::string_view::npos) return std::nullopt;
    pos += delim.size();
    for (;;) {
        if (body.substr(pos, 2) == "--") return parts;
        if (body.substr(pos, 2) != "\r\n") return std::nullopt;
        pos += 2;
        auto head_end = body.find("\r\n\r\n", pos);
        if (head_end == std::string_view::npos) return std::nullopt;
        MultipartPart part;
        auto head = body.substr(pos, head_end - pos);
        std::size_t hp = 0;
        while (hp <= head.size()) {
            auto e = head.find("\r\n", hp);
            if (e == std::string_view::npos) e = head.size();
            auto line = head.substr(hp, e - hp);
            auto colon = line.find(':');
            if (colon != std::string_view::npos) {
                auto name = trim(line.substr(0, colon));
                auto value = trim(line.substr(colon + 1));
                if (iequals(name, "Content-Disposition")) {
                    part.name = header_param(value, "name").value_or("");
                    part.filename = header_param(value, "filename");
                } else if (iequals(name, "Content-Type")) {
                    part.content_type = std::string(value);
                }
            }
            hp = e + 2;
        }
        auto data_start = head_end + 4;
        auto next = body.find("\r\n" + delim, data_start);
        if (next == std::string_view::npos) return std::nullopt;
        part.data = std::string(body.substr(data_start, next - data_start));
        parts.push_back(std::move(part));
        pos = next + 2 + delim.size();
    }
}

std::string html_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace honeynet::http
