#pragma once

#include "honeynet/common.hpp"
#include "honeynet/replay.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <string_view>

namespace honeynet::net {

enum class NetErrc { PortInUse, BadAddress, Io };

class NetError : public std::runtime_error {
public:
    NetError(NetErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    NetErrc code() const noexcept { return code_; }

private:
    NetErrc code_;
};

struct Endpoint {
    std::string host = "0.0.0.0";
    std::uint16_t port = 0;

    std::string str() const { return host + ":" + std::to_string(port); }
    bool operator==(const Endpoint&) const = default;
};

/// "host:port" with an IPv4 literal host.
std::optional<Endpoint> parse_endpoint(std::string_view s);

class Fd {
public:
    Fd() = default;
    explicit Fd(int fd) : fd_(fd) {}
    ~Fd() { reset(); }
    Fd(Fd&& o) noexcept : fd_(o.release()) {}
    Fd& operator=(Fd&& o) noexcept {
        if (this != &o) reset(o.release());
        return *this;
    }
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;

    int get() const { return fd_; }
    explicit operator bool() const { return fd_ >= 0; }
    int release() {
        int f = fd_;
        fd_ = -1;
        return f;
    }
    void reset(int fd = -1);

private:
    int fd_ = -1;
};

class TcpStream {
public:
    TcpStream() = default;
    TcpStream(Fd fd, std::string peer_ip, std::uint16_t peer_port)
        : fd_(std::move(fd)), peer_ip_(std::move(peer_ip)), peer_port_(peer_port) {}

    enum class ReadStatus { Data, Timeout, Closed };
    /// Waits up to `timeout` for bytes; appends them to `out`.
    ReadStatus read_some(std::string& out, Millis timeout);
    bool write_all(std::string_view data);
    /// Wakes a reader blocked on this stream from another thread.
    void shutdown();

    const std::string& peer_ip() const { return peer_ip_; }
    std::uint16_t peer_port() const { return peer_port_; }
    int fd() const { return fd_.get(); }

private:
    Fd fd_;
    std::string peer_ip_;
    std::uint16_t peer_port_ = 0;
};

class TcpListener {
public:
    /// Throws NetError(PortInUse) when the address is taken.
    static TcpListener bind(const Endpoint& ep, int backlog = 64);

    std::optional<TcpStream> accept(Millis timeout);
    Endpoint local() const { return local_; }
    bool is_open() const { return static_cast<bool>(fd_); }
    void close() { fd_.reset(); }
    /// Stops listening and wakes a thread blocked in accept().
    void shutdown();

private:
    Fd fd_;
    Endpoint local_;
};

/// Blocking connect with a timeout; nullopt when refused or timed out.
std::optional<TcpStream> tcp_connect(const Endpoint& ep, Millis timeout);

/// Sends each payload as one datagram to a fixed destination.
class UdpSender final : public replay::DatagramSink {
public:
    explicit UdpSender(const Endpoint& dest);
    void send(std::string_view payload) override;

private:
    Fd fd_;
    Endpoint dest_;
};

class UdpReceiver {
public:
    static UdpReceiver bind(const Endpoint& ep);
    std::optional<std::string> receive(Millis timeout);
    Endpoint local() const { return local_; }

private:
    Fd fd_;
    Endpoint local_;
};

}  // namespace honeynet::net
