#pragma once

// In-process stand-in for the hardware bridge: accepts one connection on
// 127.0.0.1, records each line with its receive time and answers with the
// same ack/nack rules the real bridge applies.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ropera/player.hpp"

namespace ropera::test {

struct Received {
    std::string line;
    std::chrono::steady_clock::time_point at;
};

class LoopbackBridge {
public:
    // `decide` may override the reply for a record; by default the record is
    // checked and acked or nacked accordingly.
    using Decide = std::function<std::optional<Reply>(const CommandMessage&)>;

    explicit LoopbackBridge(Decide decide = {}) : decide_(std::move(decide)) {
        listener_ = Socket(::socket(AF_INET, SOCK_STREAM, 0));
        int one = 1;
        ::setsockopt(listener_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = 0;
        if (::bind(listener_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
            ::listen(listener_.fd(), 1) != 0) {
            throw Error(ErrorCode::Io, "loopback bridge cannot listen");
        }
        socklen_t len = sizeof(addr);
        ::getsockname(listener_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
        thread_ = std::thread([this] { serve(); });
    }

    ~LoopbackBridge() {
        ::shutdown(listener_.fd(), SHUT_RDWR);
        if (thread_.joinable()) thread_.join();
    }

    std::uint16_t port() const { return port_; }

    std::vector<Received> received() {
        std::lock_guard lock(mu_);
        return received_;
    }

    void wait() {
        if (thread_.joinable()) thread_.join();
    }

private:
    void serve() {
        Socket conn(::accept(listener_.fd(), nullptr, nullptr));
        if (!conn.valid()) return;
        std::string buffer, line;
        while (conn.read_line(buffer, line)) {
            auto now = std::chrono::steady_clock::now();
            {
                std::lock_guard lock(mu_);
                received_.push_back({line, now});
            }
            Reply reply;
            try {
                auto msg = parse_wire(line);
                std::optional<Reply> custom = decide_ ? decide_(msg) : std::nullopt;
                if (custom) {
                    reply = *custom;
                } else if (auto reason = check_record(msg)) {
                    reply = {false, msg.seq, *reason};
                } else {
                    reply = {true, msg.seq, {}};
                }
            } catch (const Error&) {
                reply = {false, 0, "malformed"};
            }
            try {
                conn.send_all(to_wire(reply) + "\n");
            } catch (const Error&) {
                return;
            }
        }
    }

    Decide decide_;
    Socket listener_;
    std::uint16_t port_ = 0;
    std::thread thread_;
    std::mutex mu_;
    std::vector<Received> received_;
};

} // namespace ropera::test
