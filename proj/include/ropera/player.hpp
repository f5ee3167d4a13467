#pragma once

// Streams a compiled command stream to a bridge over TCP at wall-clock time.
// One thread sends on a monotonic schedule while a second reads ack/nack lines.

#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "ropera/error.hpp"
#include "ropera/protocol.hpp"

namespace ropera {

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept {
        if (this != &other) {
            reset();
            fd_ = std::exchange(other.fd_, -1);
        }
        return *this;
    }
    ~Socket() { reset(); }

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }

    void reset() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

    void send_all(std::string_view bytes) const {
        while (!bytes.empty()) {
            ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
            if (n <= 0) {
                throw Error(ErrorCode::Io, "send failed");
            }
            bytes.remove_prefix(static_cast<std::size_t>(n));
        }
    }

    // Reads one '\n'-terminated line (without the terminator). Returns false on
    // EOF before any byte of a new line.
    bool read_line(std::string& buffer, std::string& line) const {
        for (;;) {
            auto nl = buffer.find('\n');
            if (nl != std::string::npos) {
                line = buffer.substr(0, nl);
                buffer.erase(0, nl + 1);
                return true;
            }
            char chunk[512];
            ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
            if (n <= 0) {
                if (buffer.empty()) {
                    return false;
                }
                line = std::move(buffer);
                buffer.clear();
                return true;
            }
            buffer.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    int fd_ = -1;
};

inline Socket connect_tcp(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const std::string service = std::to_string(port);
    if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &found) != 0 || !found) {
        throw Error(ErrorCode::ConnectionRefused, "cannot resolve " + host);
    }
    Socket sock;
    for (addrinfo* ai = found; ai; ai = ai->ai_next) {
        Socket candidate(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
        if (candidate.valid() && ::connect(candidate.fd(), ai->ai_addr, ai->ai_addrlen) == 0) {
            sock = std::move(candidate);
            break;
        }
    }
    ::freeaddrinfo(found);
    if (!sock.valid()) {
        throw Error(ErrorCode::ConnectionRefused, "cannot connect to " + host + ":" + service);
    }
    return sock;
}

struct PlayOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
    std::chrono::milliseconds overrun_threshold{50};
    std::chrono::milliseconds ack_timeout{3000};
    std::function<void(const std::string&)> warn;
};

struct PlayReport {
    std::size_t sent = 0;
    std::vector<std::uint64_t> acked;     // in receive order
    std::vector<double> send_lag_s;       // actual send time minus scheduled t
    std::size_t overruns = 0;
};

// Never sends a record before its scheduled offset. Throws PeerNack on the
// first nack (after stopping the sender) and Io if acks do not arrive in time.
inline PlayReport play(const std::vector<CommandMessage>& stream, const PlayOptions& options) {
    Socket sock = connect_tcp(options.host, options.port);

    std::mutex mu;
    std::condition_variable cv;
    std::vector<Reply> replies;
    bool reader_done = false;

    std::thread reader([&] {
        std::string buffer, line;
        while (sock.read_line(buffer, line)) {
            auto reply = parse_reply(line);
            std::lock_guard lock(mu);
            if (!reply) {
                replies.push_back(Reply{false, UINT64_MAX, "unparseable reply '" + line + "'"});
            } else {
                replies.push_back(*reply);
            }
            cv.notify_all();
        }
        std::lock_guard lock(mu);
        reader_done = true;
        cv.notify_all();
    });

    auto first_nack = [&]() -> const Reply* {
        for (const auto& r : replies) {
            if (!r.ack) return &r;
        }
        return nullptr;
    };

    PlayReport report;
    std::string failure;
    const auto start = std::chrono::steady_clock::now();
    try {
        for (const auto& msg : stream) {
            {
                std::lock_guard lock(mu);
                if (const Reply* nack = first_nack()) {
                    failure = "nack " + std::to_string(nack->seq) + " " + nack->reason;
                    break;
                }
            }
            const auto due = start + std::chrono::microseconds(msg.t.micros());
            std::this_thread::sleep_until(due);
            auto now = std::chrono::steady_clock::now();
            while (now < due) {
                std::this_thread::sleep_until(due);
                now = std::chrono::steady_clock::now();
            }
            sock.send_all(to_wire(msg) + "\n");
            const auto lag = std::chrono::steady_clock::now() - due;
            report.send_lag_s.push_back(std::chrono::duration<double>(lag).count());
            if (lag > options.overrun_threshold) {
                ++report.overruns;
                if (options.warn) {
                    options.warn("ScheduleOverrun: seq " + std::to_string(msg.seq) + " sent " +
                                 std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(lag).count()) +
                                 " ms late");
                }
            }
            ++report.sent;
        }
        if (failure.empty()) {
            std::unique_lock lock(mu);
            cv.wait_for(lock, options.ack_timeout, [&] {
                return reader_done || first_nack() || replies.size() >= report.sent;
            });
            if (const Reply* nack = first_nack()) {
                failure = "nack " + std::to_string(nack->seq) + " " + nack->reason;
            } else if (replies.size() < report.sent) {
                failure = "timeout";
            }
        }
    } catch (...) {
        ::shutdown(sock.fd(), SHUT_RDWR);
        reader.join();
        throw;
    }
    ::shutdown(sock.fd(), SHUT_RDWR);
    reader.join();

    for (const auto& r : replies) {
        if (r.ack) report.acked.push_back(r.seq);
    }
    if (failure == "timeout") {
        throw Error(ErrorCode::Io, "bridge acknowledged " + std::to_string(report.acked.size()) + " of " +
                                       std::to_string(report.sent) + " records");
    }
    if (!failure.empty()) {
        throw Error(ErrorCode::PeerNack, failure);
    }
    return report;
}

// Human-readable schedule for --dry-run; opens no socket.
inline std::string dry_run(const std::vector<CommandMessage>& stream) {
    std::string out;
    for (const auto& m : stream) {
        out += "t=" + m.t.to_string() + "s " + to_wire(m) + "\n";
    }
    return out;
}

} // namespace ropera
