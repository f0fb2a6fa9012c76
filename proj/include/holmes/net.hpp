#pragma once

#include <chrono>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <streambuf>
#include <string>
#include <string_view>
#include <vector>

// Minimal TCP byte-stream transport for the line_stream adapter.
namespace holmes::net {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

// "host:port", ":port" or "port". Throws InvalidValue.
Endpoint parse_endpoint(std::string_view text);

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() noexcept {
    const int fd = fd_;
    fd_ = -1;
    return fd;
  }
  // Half-closes the write side so the peer sees end-of-stream.
  void shutdown_write();

 private:
  int fd_ = -1;
};

// Bound and listening. Port 0 picks an ephemeral port; see local_port().
Socket listen_on(const Endpoint& ep);
std::uint16_t local_port(const Socket& s);
Socket accept_one(const Socket& listener);
// Retries until `patience` elapses. Throws ConnectionFailed.
Socket connect_to(const Endpoint& ep,
                  std::chrono::milliseconds patience = std::chrono::milliseconds{5000});

class FdStreamBuf final : public std::streambuf {
 public:
  explicit FdStreamBuf(int fd, std::size_t buffer_size = 1 << 16);
  ~FdStreamBuf() override;

 protected:
  int_type underflow() override;
  int_type overflow(int_type ch) override;
  int sync() override;

 private:
  bool flush_out();

  int fd_;
  std::vector<char> in_;
  std::vector<char> out_;
};

// Owns a connected socket and exposes it as an iostream.
class SocketStream : public std::iostream {
 public:
  explicit SocketStream(Socket socket);
  ~SocketStream() override;
  Socket& socket() { return socket_; }

 private:
  Socket socket_;
  std::unique_ptr<FdStreamBuf> buf_;
};

}  // namespace holmes::net
