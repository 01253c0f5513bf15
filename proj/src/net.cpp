#include "honeynet/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace honeynet::net {

namespace {

sockaddr_in to_sockaddr(const Endpoint& ep) {
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(ep.port);
    if (inet_pton(AF_INET, ep.host.c_str(), &sa.sin_addr) != 1)
        throw NetError(NetErrc::BadAddress, "not an IPv4 address: " + ep.host);
    return sa;
}

Endpoint from_sockaddr(const sockaddr_in& sa) {
    char buf[INET_ADDRSTRLEN] = {};
    inet_ntop(AF_INET, &sa.sin_addr, buf, sizeof buf);
    return {buf, ntohs(sa.sin_port)};
}

Endpoint local_of(int fd) {
    sockaddr_in sa{};
    socklen_t len = sizeof sa;
    getsockname(fd, reinterpret_cast<sockaddr*>(&sa), &len);
    return from_sockaddr(sa);
}

[[noreturn]] void fail(const std::string& what) {
    throw NetError(NetErrc::Io, what + ": " + std::strerror(errno));
}

bool wait_fd(int fd, short events, Millis timeout) {
    pollfd p{fd, events, 0};
    for (;;) {
        int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
        if (rc < 0 && errno == EINTR) continue;
        return rc > 0;
    }
}

}  // namespace

std::optional<Endpoint> parse_endpoint(std::string_view s) {
    auto colon = s.rfind(':');
    if (colon == std::string_view::npos || colon == 0) return std::nullopt;
    Endpoint ep;
    ep.host = std::string(s.substr(0, colon));
    auto port = s.substr(colon + 1);
    unsigned value = 0;
    auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc{} || p != port.data() + port.size() || port.empty() || value > 65535) return std::nullopt;
    ep.port = static_cast<std::uint16_t>(value);
    in_addr tmp{};
    if (inet_pton(AF_INET, ep.host.c_str(), &tmp) != 1) return std::nullopt;
    return ep;
}

void Fd::reset(int fd) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
}

TcpStream::ReadStatus TcpStream::read_some(std::string& out, Millis timeout) {
    if (!fd_) return ReadStatus::Closed;
    pollfd p{fd_.get(), POLLIN, 0};
    int rc;
    do {
        rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    } while (rc < 0 && errno == EINTR);
    if (rc == 0) return ReadStatus::Timeout;
    if (rc < 0) return ReadStatus::Closed;
    char buf[4096];
    ssize_t n;
    do {
        n = ::recv(fd_.get(), buf, sizeof buf, 0);
    } while (n < 0 && errno == EINTR);
    if (n <= 0) return ReadStatus::Closed;
    out.append(buf, static_cast<std::size_t>(n));
    return ReadStatus::Data;
}

bool TcpStream::write_all(std::string_view data) {
    while (!data.empty()) {
        ssize_t n = ::send(fd_.get(), data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return false;
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

void TcpStream::shutdown() {
    if (fd_) ::shutdown(fd_.get(), SHUT_RDWR);
}

TcpListener TcpListener::bind(const Endpoint& ep, int backlog) {
    auto sa = to_sockaddr(ep);
    Fd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
    if (!fd) fail("socket");
    int one = 1;
    setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
        if (errno == EADDRINUSE) throw NetError(NetErrc::PortInUse, "address in use: " + ep.str());
        fail("bind " + ep.str());
    }
    if (::listen(fd.get(), backlog) != 0) fail("listen " + ep.str());
    TcpListener l;
    l.local_ = local_of(fd.get());
    l.fd_ = std::move(fd);
    return l;
}

void TcpListener::shutdown() {
    if (fd_) ::shutdown(fd_.get(), SHUT_RDWR);
}

std::optional<TcpStream> TcpListener::accept(Millis timeout) {
    if (!fd_ || !wait_fd(fd_.get(), POLLIN, timeout)) return std::nullopt;
    sockaddr_in sa{};
    socklen_t len = sizeof sa;
    int c = ::accept4(fd_.get(), reinterpret_cast<sockaddr*>(&sa), &len, SOCK_CLOEXEC);
    if (c < 0) return std::nullopt;
    int one = 1;
    setsockopt(c, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    auto peer = from_sockaddr(sa);
    return TcpStream(Fd(c), peer.host, peer.port);
}

std::optional<TcpStream> tcp_connect(const Endpoint& ep, Millis timeout) {
    auto sa = to_sockaddr(ep);
    Fd fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
    if (!fd) fail("socket");
    int rc = ::connect(fd.get(), reinterpret_cast<sockaddr*>(&sa), sizeof sa);
    if (rc != 0) {
        if (errno != EINPROGRESS) return std::nullopt;
        if (!wait_fd(fd.get(), POLLOUT, timeout)) return std::nullopt;
        int err = 0;
        socklen_t len = sizeof err;
        getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0) return std::nullopt;
    }
    int flags = fcntl(fd.get(), F_GETFL);
    fcntl(fd.get(), F_SETFL, flags & ~O_NONBLOCK);
    auto local = local_of(fd.get());
    return TcpStream(std::move(fd), local.host, local.port);
}

UdpSender::UdpSender(const Endpoint& dest) : fd_(::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0)), dest_(dest) {
    if (!fd_) fail("socket");
    auto sa = to_sockaddr(dest_);
    // Connected, so the socket accepts replies from `dest` only; for a
    // loopback destination it also never gets a wildcard local address.
    if (dest_.host.rfind("127.", 0) == 0) {
        auto local = to_sockaddr({"127.0.0.1", 0});
        if (::bind(fd_.get(), reinterpret_cast<sockaddr*>(&local), sizeof local) != 0) fail("bind 127.0.0.1");
    }
    if (::connect(fd_.get(), reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) fail("connect " + dest_.str());
}

void UdpSender::send(std::string_view payload) {
    ssize_t n = ::send(fd_.get(), payload.data(), payload.size(), MSG_NOSIGNAL);
    if (n >= 0) return;
    if (errno == ECONNREFUSED)
        throw replay::ReplayError(replay::ReplayErrc::TargetUnreachable, "no listener at " + dest_.str());
    fail("send " + dest_.str());
}

UdpReceiver UdpReceiver::bind(const Endpoint& ep) {
    auto sa = to_sockaddr(ep);
    Fd fd(::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0));
    if (!fd) fail("socket");
    if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
        if (errno == EADDRINUSE) throw NetError(NetErrc::PortInUse, "address in use: " + ep.str());
        fail("bind " + ep.str());
    }
    UdpReceiver r;
    r.local_ = local_of(fd.get());
    r.fd_ = std::move(fd);
    return r;
}

std::optional<std::string> UdpReceiver::receive(Millis timeout) {
    if (!wait_fd(fd_.get(), POLLIN, timeout)) return std::nullopt;
    char buf[2048];
    ssize_t n = ::recv(fd_.get(), buf, sizeof buf, 0);
    if (n < 0) return std::nullopt;
    return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace honeynet::net
