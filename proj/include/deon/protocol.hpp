#pragma once

#include <atomic>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "deon/governor.hpp"

namespace deon {

/// One governor session spoken over the newline-delimited wire protocol.
/// Transport-agnostic: feed one request line, get the response lines back.
///
///   client: load <hash>            server: ok <hash>
///   client: load inline ... end    server: ok <hash>
///   client: propose <action>       server: verdict approved <action>
///                                        | verdict substituted <orig> <repl>
///                                        | verdict refused <reason>
///   client: percept <symbol>       server: ack <cycle-index>
///
/// Protocol violations are answered in-band with `error <code> <message>`
/// and freeze the session.
class ProtocolSession {
 public:
  struct Preloaded {
    Deontology deontology;
    std::string hash;
  };

  explicit ProtocolSession(std::optional<Preloaded> preloaded, GovernorConfig cfg = {})
      : preloaded_(std::move(preloaded)), config_(std::move(cfg)) {}

  std::vector<std::string> handle_line(std::string_view raw) {
    std::string line(raw);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (collecting_) {
      if (line == "end") {
        collecting_ = false;
        return open_inline();
      }
      inline_text_ += line;
      inline_text_ += '\n';
      return {};
    }

    std::istringstream in(line);
    std::string command;
    if (!(in >> command)) return {};  // blank line

    if (frozen_) return {"error frozen session is frozen"};

    if (command == "load") {
      std::string arg, extra;
      if (!(in >> arg) || (in >> extra)) return freeze("bad-message expected 'load <hash|inline>'");
      if (session_) return freeze("protocol session already loaded");
      if (arg == "inline") {
        collecting_ = true;
        inline_text_.clear();
        return {};
      }
      if (!preloaded_ || preloaded_->hash != arg)
        return freeze("unknown-spec no spec with hash " + arg);
      return open(preloaded_->deontology, preloaded_->hash);
    }
    if (command == "propose") {
      std::string arg, extra;
      if (!(in >> arg) || (in >> extra)) return freeze("bad-message expected 'propose <action>'");
      if (!session_) return freeze("no-session propose before load");
      try {
        ProposalOutcome outcome = session_->propose(arg);
        switch (outcome.kind) {
          case ProposalKind::approved:
            return {"verdict approved " + alphabet().name(*outcome.emitted)};
          case ProposalKind::substituted:
            return {"verdict substituted " + alphabet().name(outcome.proposed) + " " +
                    alphabet().name(*outcome.emitted)};
          case ProposalKind::refused:
            return {std::string("verdict refused ") + refuse_reason_name(*outcome.reason)};
        }
        return {};
      } catch (const Error& e) {
        return freeze(error_code(e.code()) + " " + e.what());
      }
    }
    if (command == "percept") {
      std::string arg, extra;
      if (!(in >> arg) || (in >> extra)) return freeze("bad-message expected 'percept <symbol>'");
      if (!session_) return freeze("no-session percept before load");
      try {
        session_->observe(arg);
        return {"ack " + std::to_string(session_->emitted_history().cycles())};
      } catch (const Error& e) {
        return freeze(error_code(e.code()) + " " + e.what());
      }
    }
    return freeze("bad-message unknown command '" + command + "'");
  }

  bool frozen() const { return frozen_; }
  const GovernorSession* session() const { return session_ ? &*session_ : nullptr; }

 private:
  const Alphabet& alphabet() const { return session_->alphabet(); }

  static std::string error_code(Errc c) {
    switch (c) {
      case Errc::protocol_order: return "protocol";
      case Errc::unknown_symbol: return "unknown-symbol";
      default: return "bad-spec";
    }
  }

  std::vector<std::string> freeze(const std::string& message) {
    frozen_ = true;
    return {"error " + message};
  }

  std::vector<std::string> open(const Deontology& d, const std::string& hash) {
    try {
      session_.emplace(open_session(d, config_));
    } catch (const Error& e) {
      return freeze(std::string("bad-spec ") + e.what());
    }
    return {"ok " + hash};
  }

  std::vector<std::string> open_inline() {
    try {
      Deontology d = compile(parse_spec(inline_text_));
      return open(d, spec_hash(d));
    } catch (const Error& e) {
      return freeze(std::string("bad-spec ") + e.what());
    }
  }

  std::optional<Preloaded> preloaded_;
  GovernorConfig config_;
  std::optional<GovernorSession> session_;
  bool collecting_ = false;
  bool frozen_ = false;
  std::string inline_text_;
};

/// Serves exactly one session over a line stream (the --stdio transport).
inline void serve_stream(const Deontology& d, const GovernorConfig& cfg, std::istream& in,
                         std::ostream& out) {
  ProtocolSession session(ProtocolSession::Preloaded{d, spec_hash(d)}, cfg);
  std::string line;
  while (std::getline(in, line)) {
    for (const std::string& response : session.handle_line(line)) out << response << '\n';
    out.flush();
  }
}

/// TCP transport: one independent session per connection. Connections share
/// nothing but the immutable compiled deontology.
class TcpServer {
 public:
  TcpServer(Deontology d, GovernorConfig cfg, const std::string& host, int port)
      : deontology_(std::move(d)), hash_(spec_hash(deontology_)), config_(std::move(cfg)) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) fail(Errc::format_error, "cannot create listening socket");
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
      ::close(fd);
      fail(Errc::format_error, "listen address must be an IPv4 address, got '" + host + "'");
    }
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
        ::listen(fd, 16) != 0) {
      ::close(fd);
      fail(Errc::format_error, "cannot bind " + host + ":" + std::to_string(port));
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    listen_fd_ = fd;
  }

  ~TcpServer() { stop(); }

  int port() const { return port_; }

  /// Blocking accept loop; returns after stop().
  void run() {
    while (true) {
      int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) break;  // listener closed
      std::lock_guard<std::mutex> lock(mutex_);
      workers_.emplace_back([this, fd] { serve_connection(fd); });
    }
  }

  void start() {
    accept_thread_ = std::thread([this] { run(); });
  }

  void stop() {
    int fd = listen_fd_.exchange(-1);
    if (fd >= 0) {
      ::shutdown(fd, SHUT_RDWR);
      ::close(fd);
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> workers;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      workers.swap(workers_);
    }
    for (auto& w : workers)
      if (w.joinable()) w.join();
  }

 private:
  void serve_connection(int fd) {
    ProtocolSession session(ProtocolSession::Preloaded{deontology_, hash_}, config_);
    std::string buffer;
    char chunk[1024];
    while (true) {
      ssize_t n = ::read(fd, chunk, sizeof chunk);
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t pos;
      while ((pos = buffer.find('\n')) != std::string::npos) {
        std::string line = buffer.substr(0, pos);
        buffer.erase(0, pos + 1);
        std::string out;
        for (const std::string& response : session.handle_line(line)) {
          out += response;
          out += '\n';
        }
        if (!out.empty() && ::write(fd, out.data(), out.size()) < 0) {
          ::close(fd);
          return;
        }
      }
    }
    ::close(fd);
  }

  Deontology deontology_;
  std::string hash_;
  GovernorConfig config_;
  std::atomic<int> listen_fd_{-1};
  int port_ = 0;
  std::thread accept_thread_;
  std::mutex mutex_;
  std::vector<std::thread> workers_;
};

}  // namespace deon
