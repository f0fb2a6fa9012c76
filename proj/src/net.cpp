#include "holmes/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <thread>

#include "holmes/error.hpp"

namespace holmes::net {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::ConnectionFailed, what + ": " + std::strerror(errno));
}

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head != nullptr) freeaddrinfo(head);
  }
};

void resolve(const Endpoint& ep, bool passive, AddrInfo& out) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  const std::string port = std::to_string(ep.port);
  const int rc = getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(),
                             port.c_str(), &hints, &out.head);
  if (rc != 0) {
    throw Error(ErrorCode::ConnectionFailed,
                "cannot resolve " + ep.host + ": " + gai_strerror(rc));
  }
}

}  // namespace

Endpoint parse_endpoint(std::string_view text) {
  Endpoint ep;
  std::string_view port_text = text;
  const auto colon = text.rfind(':');
  if (colon != std::string_view::npos) {
    if (colon > 0) {
      std::string_view host = text.substr(0, colon);
      if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
        host = host.substr(1, host.size() - 2);
      }
      ep.host = std::string(host);
    }
    port_text = text.substr(colon + 1);
  }
  unsigned value = 0;
  const auto res =
      std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
  if (port_text.empty() || res.ec != std::errc{} ||
      res.ptr != port_text.data() + port_text.size() || value > 65535) {
    throw Error(ErrorCode::InvalidValue, "bad endpoint '" + std::string(text) + "'");
  }
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.release();
  }
  return *this;
}

Socket::~Socket() {
  if (fd_ >= 0) ::close(fd_);
}

void Socket::shutdown_write() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
}

Socket listen_on(const Endpoint& ep) {
  AddrInfo info;
  resolve(ep, true, info);
  for (addrinfo* ai = info.head; ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (!s.valid()) continue;
    const int yes = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    if (::bind(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(s.fd(), 4) == 0) {
      return s;
    }
  }
  fail("cannot listen on " + ep.host + ":" + std::to_string(ep.port));
}

std::uint16_t local_port(const Socket& s) {
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    fail("getsockname");
  }
  if (addr.ss_family == AF_INET6) {
    return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  }
  return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

Socket accept_one(const Socket& listener) {
  for (;;) {
    const int fd = ::accept(listener.fd(), nullptr, nullptr);
    if (fd >= 0) return Socket(fd);
    if (errno != EINTR) fail("accept");
  }
}

Socket connect_to(const Endpoint& ep, std::chrono::milliseconds patience) {
  const auto deadline = std::chrono::steady_clock::now() + patience;
  for (;;) {
    AddrInfo info;
    resolve(ep, false, info);
    for (addrinfo* ai = info.head; ai != nullptr; ai = ai->ai_next) {
      Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
      if (!s.valid()) continue;
      if (::connect(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0) return s;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      fail("cannot connect to " + ep.host + ":" + std::to_string(ep.port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds{50});
  }
}

FdStreamBuf::FdStreamBuf(int fd, std::size_t buffer_size)
    : fd_(fd), in_(buffer_size), out_(buffer_size) {
  setg(in_.data(), in_.data(), in_.data());
  setp(out_.data(), out_.data() + out_.size());
}

FdStreamBuf::~FdStreamBuf() { flush_out(); }

FdStreamBuf::int_type FdStreamBuf::underflow() {
  if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
  for (;;) {
    const ssize_t n = ::recv(fd_, in_.data(), in_.size(), 0);
    if (n > 0) {
      setg(in_.data(), in_.data(), in_.data() + n);
      return traits_type::to_int_type(*gptr());
    }
    if (n == 0) return traits_type::eof();
    if (errno != EINTR) return traits_type::eof();
  }
}

bool FdStreamBuf::flush_out() {
  const char* p = pbase();
  while (p < pptr()) {
    const ssize_t n = ::send(fd_, p, static_cast<std::size_t>(pptr() - p), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      setp(out_.data(), out_.data() + out_.size());
      return false;
    }
    p += n;
  }
  setp(out_.data(), out_.data() + out_.size());
  return true;
}

FdStreamBuf::int_type FdStreamBuf::overflow(int_type ch) {
  if (!flush_out()) return traits_type::eof();
  if (!traits_type::eq_int_type(ch, traits_type::eof())) {
    *pptr() = traits_type::to_char_type(ch);
    pbump(1);
  }
  return traits_type::not_eof(ch);
}

int FdStreamBuf::sync() { return flush_out() ? 0 : -1; }

SocketStream::SocketStream(Socket socket)
    : std::iostream(nullptr),
      socket_(std::move(socket)),
      buf_(std::make_unique<FdStreamBuf>(socket_.fd())) {
  rdbuf(buf_.get());
}

SocketStream::~SocketStream() {
  buf_->pubsync();
  rdbuf(nullptr);
}

}  // namespace holmes::net
