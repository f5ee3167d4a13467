#pragma once

// Command stream records and the newline-delimited bridge protocol.
//
// Client -> bridge, one JSON object per line, fields in this order:
//   {"seq":0,"t":0.0,"angles":[0.0,45.0,-45.0,-45.0,0.0,135.0],"speed":75,"last":true}
// Bridge -> client, one line per record:
//   ack <seq>
//   nack <seq> <reason>
// See docs/protocol.md.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ropera/decoder.hpp"
#include "ropera/error.hpp"
#include "ropera/notation.hpp"
#include "ropera/trajectory.hpp"

namespace ropera {

inline constexpr double kCommandAngleLimit = 175.0;

struct CommandMessage {
    std::uint64_t seq = 0;
    Duration t;                     // scheduled offset from stream start
    std::vector<double> angles;     // degrees
    std::optional<int> speed;       // vendor speed hint, 1..100
    bool last = false;

    bool operator==(const CommandMessage&) const = default;
};

inline std::string to_wire(const CommandMessage& msg) {
    nlohmann::ordered_json j;
    j["seq"] = msg.seq;
    j["t"] = msg.t.seconds();
    j["angles"] = msg.angles;
    if (msg.speed) {
        j["speed"] = *msg.speed;
    }
    j["last"] = msg.last;
    return j.dump();
}

inline CommandMessage parse_wire(std::string_view line) {
    nlohmann::json j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::Syntax, "record is not a JSON object");
    }
    CommandMessage msg;
    try {
        if (!j.at("seq").is_number_unsigned()) {
            throw Error(ErrorCode::Syntax, "seq must be a non-negative integer");
        }
        msg.seq = j.at("seq").get<std::uint64_t>();
        double t = j.at("t").get<double>();
        if (!j.at("t").is_number() || !std::isfinite(t) || std::abs(t) > 1e12) {
            throw Error(ErrorCode::Syntax, "t must be a finite number of seconds");
        }
        auto micros = std::llround(t * 1e6);
        msg.t = Duration::from_micros(micros);
        msg.angles = j.at("angles").get<std::vector<double>>();
        if (j.contains("speed") && !j["speed"].is_null()) {
            msg.speed = j["speed"].get<int>();
        }
        msg.last = j.at("last").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Syntax, std::string("bad record: ") + e.what());
    }
    return msg;
}

// Reason a bridge would refuse the record, or nullopt if acceptable.
inline std::optional<std::string> check_record(const CommandMessage& msg) {
    if (msg.angles.empty()) {
        return "no_angles";
    }
    for (double a : msg.angles) {
        if (!std::isfinite(a) || std::abs(a) > kCommandAngleLimit) {
            return "clip_violation";
        }
    }
    if (msg.speed && (*msg.speed < 1 || *msg.speed > 100)) {
        return "bad_speed";
    }
    if (msg.t.micros() < 0) {
        return "bad_time";
    }
    return std::nullopt;
}

struct Reply {
    bool ack = false;
    std::uint64_t seq = 0;
    std::string reason;

    bool operator==(const Reply&) const = default;
};

inline std::string to_wire(const Reply& reply) {
    std::string out = (reply.ack ? "ack " : "nack ") + std::to_string(reply.seq);
    if (!reply.ack) {
        out += " " + (reply.reason.empty() ? std::string("unspecified") : reply.reason);
    }
    return out;
}

inline std::optional<Reply> parse_reply(std::string_view line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' ')) {
        line.remove_suffix(1);
    }
    Reply r;
    if (line.rfind("ack ", 0) == 0) {
        r.ack = true;
        line.remove_prefix(4);
    } else if (line.rfind("nack ", 0) == 0) {
        line.remove_prefix(5);
    } else {
        return std::nullopt;
    }
    auto space = line.find(' ');
    auto seq = detail::parse_integer(line.substr(0, space));
    if (!seq || *seq < 0) {
        return std::nullopt;
    }
    r.seq = static_cast<std::uint64_t>(*seq);
    if (space != std::string_view::npos) {
        if (r.ack) {
            return std::nullopt;
        }
        r.reason = std::string(line.substr(space + 1));
    }
    return r;
}

// round(100 * (max|dq| / v_max) / T): share of the vendor speed range needed
// to cover the largest joint move within the frame, clamped to 1..100.
inline int speed_hint(const std::vector<double>& from, const std::vector<double>& to, Duration duration,
                      double v_max) {
    double max_delta = 0.0;
    for (std::size_t j = 0; j < from.size() && j < to.size(); ++j) {
        max_delta = std::max(max_delta, std::abs(to[j] - from[j]));
    }
    double hint = std::round(100.0 * (max_delta / v_max) / duration.seconds());
    return static_cast<int>(std::clamp(hint, 1.0, 100.0));
}

// One record per frame at the frame's start offset. The trajectory is planned
// under `config` first so infeasible schedules are rejected here.
inline std::vector<CommandMessage> compile_stream(const Score& score, const ProfileConfig& config) {
    auto targets = decode_score(score);
    const auto home = score.home_or_zero();
    (void)plan(targets, config, home);

    std::vector<CommandMessage> out;
    Duration t;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        CommandMessage msg;
        msg.seq = i;
        msg.t = t;
        msg.angles = targets[i].angles;
        const auto& from = i == 0 ? home : targets[i - 1].angles;
        msg.speed = speed_hint(from, msg.angles, targets[i].duration, config.v_max);
        msg.last = i + 1 == targets.size();
        out.push_back(std::move(msg));
        t += targets[i].duration;
    }
    return out;
}

inline std::vector<CommandMessage> compile_stream(const Score& score) { return compile_stream(score, score.profile); }

inline std::string stream_to_text(const std::vector<CommandMessage>& stream) {
    std::string out;
    for (const auto& m : stream) {
        out += to_wire(m);
        out += '\n';
    }
    return out;
}

} // namespace ropera
