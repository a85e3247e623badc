#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "acwa/errors.hpp"

// Line-oriented TCP broadcaster for sensor streams.
//
// Serves a fixed sequence of newline-delimited records to each connecting
// consumer, exactly as they appear in the JSONL dataset file. Consumers are
// independent: each gets its own sending thread and its own pacing clock, a
// slow or dead consumer is disconnected (5 s send timeout) without touching
// the others, and the producer never reads from clients.
//
// Pacing: factor 0 streams as fast as the sockets accept; factor f > 0
// replays record timestamps scaled by 1/f, so factor 1 is real time and
// factor 10 is ten times faster than real time.

namespace acwa {

class StreamServer {
 public:
  // Binds and listens immediately; port 0 picks an ephemeral port (read it
  // back via port()).
  StreamServer(const std::string& host, int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw std::runtime_error("stream server: cannot create socket");
    const int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
      ::close(fd_);
      throw std::runtime_error("stream server: bad host address '" + host + "'");
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      ::close(fd_);
      throw std::runtime_error("stream server: cannot bind " + host + ":" +
                               std::to_string(port));
    }
    if (::listen(fd_, 16) != 0) {
      ::close(fd_);
      throw std::runtime_error("stream server: listen failed");
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
  }

  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  ~StreamServer() {
    if (fd_ >= 0) ::close(fd_);
  }

  int port() const { return port_; }

  struct ServeStats {
    int completed = 0;  // consumers that received the whole stream
    int dropped = 0;    // consumers disconnected early
  };

  // Accept `max_clients` consumers, stream every line to each, return once
  // all of them have finished or been dropped.
  ServeStats serve(const std::vector<std::string>& lines,
                   const std::vector<long long>& timestamps_ms,
                   double pace_factor, int max_clients) {
    if (!timestamps_ms.empty() && timestamps_ms.size() != lines.size()) {
      throw ContractViolation("stream server: timestamps do not match lines");
    }
    ServeStats stats;
    std::vector<std::thread> workers;
    std::vector<char> results(
        static_cast<std::size_t>(max_clients > 0 ? max_clients : 0), 0);
    for (int c = 0; c < max_clients; ++c) {
      const int client = ::accept(fd_, nullptr, nullptr);
      if (client < 0) {
        throw std::runtime_error("stream server: accept failed");
      }
      timeval timeout{};
      timeout.tv_sec = 5;
      ::setsockopt(client, SOL_SOCKET, SO_SNDTIMEO, &timeout, sizeof timeout);
      char* ok = &results[static_cast<std::size_t>(c)];
      workers.emplace_back([client, &lines, &timestamps_ms, pace_factor, ok] {
        *ok = stream_to(client, lines, timestamps_ms, pace_factor) ? 1 : 0;
        ::close(client);
      });
    }
    for (auto& w : workers) w.join();
    for (char ok : results) {
      if (ok) {
        ++stats.completed;
      } else {
        ++stats.dropped;
      }
    }
    return stats;
  }

 private:
  static bool send_all(int fd, const char* data, std::size_t len) {
    while (len > 0) {
      const ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
      if (n <= 0) return false;  // timeout, reset, or closed: drop consumer
      data += n;
      len -= static_cast<std::size_t>(n);
    }
    return true;
  }

  static bool stream_to(int fd, const std::vector<std::string>& lines,
                        const std::vector<long long>& timestamps_ms,
                        double pace_factor) {
    using clock = std::chrono::steady_clock;
    const clock::time_point start = clock::now();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (pace_factor > 0.0 && !timestamps_ms.empty()) {
        const double elapsed_ms =
            static_cast<double>(timestamps_ms[i] - timestamps_ms[0]) /
            pace_factor;
        std::this_thread::sleep_until(
            start + std::chrono::duration_cast<clock::duration>(
                        std::chrono::duration<double, std::milli>(elapsed_ms)));
      }
      std::string line = lines[i];
      line += "\n";
      if (!send_all(fd, line.data(), line.size())) return false;
    }
    return true;
  }

  int fd_ = -1;
  int port_ = 0;
};

}  // namespace acwa
