#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace honeynet::http {

struct Request {
    std::string method;
    std::string target;  // as sent
    std::string path;    // percent-decoded, without query
    std::string query;   // raw, without '?'
    std::string version;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;

    /// Case-insensitive; first occurrence.
    std::optional<std::string> header(std::string_view name) const;
};

struct Response {
    int status = 200;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;

    std::optional<std::string> header(std::string_view name) const;
    void set(std::string name, std::string value);
};

std::string_view reason_phrase(int status);
std::string serialize(const Response& r);

/// Incremental request reader. Accepts Content-Length and chunked bodies.
class RequestParser {
public:
    enum class State { NeedMore, Complete, Error };

    explicit RequestParser(std::size_t max_body = 65 * 1024 * 1024, std::size_t max_head = 16 * 1024)
        : max_body_(max_body), max_head_(max_head) {}

    State feed(std::string_view bytes);
    /// Called when the peer stops sending: a partial request becomes an error.
    State finish();

    State state() const { return state_; }
    const std::string& error() const { return error_; }
    const Request& request() const { return req_; }
    std::size_t bytes_seen() const { return buf_.size() + consumed_; }

private:
    State fail(std::string why);
    State parse_head(std::size_t head_end);
    State parse_body();

    std::size_t max_body_;
    std::size_t max_head_;
    std::string buf_;
    std::size_t consumed_ = 0;
    bool have_head_ = false;
    bool chunked_ = false;
    std::size_t content_length_ = 0;
    State state_ = State::NeedMore;
    std::string error_;
    Request req_;
};

std::string url_decode(std::string_view s, bool plus_is_space);
/// `a=1&b=2`; later keys overwrite earlier ones.
std::map<std::string, std::string> parse_urlencoded(std::string_view s);
std::map<std::string, std::string> parse_cookies(std::string_view header);

struct MultipartPart {
    std::string name;
    std::optional<std::string> filename;
    std::string content_type;
    std::string data;
};

/// nullopt when the body is not well-formed multipart for `content_type`.
std::optional<std::vector<MultipartPart>> parse_multipart(std::string_view content_type, std::string_view body);

std::string html_escape(std::string_view s);

}  // namespace honeynet::http
