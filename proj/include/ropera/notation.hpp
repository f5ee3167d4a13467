#pragma once

// Score notation: codebook, frames, and the line-oriented score language.
// The grammar is documented in docs/notation.md.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ropera/detail/text.hpp"
#include "ropera/error.hpp"
#include "ropera/types.hpp"

namespace ropera {

inline constexpr std::size_t kMaxServos = 64;
inline constexpr int kNotationVersion = 1;

// Maps any angle into (-180, 180].
inline double normalize_degrees(double degrees) {
    double r = std::fmod(degrees, 360.0);
    if (r <= -180.0) {
        r += 360.0;
    } else if (r > 180.0) {
        r -= 360.0;
    }
    return r;
}

class Codebook {
public:
    // Default table: nine symbols A..I at k*45 degrees, clip at 175.
    Codebook() : Codebook(standard_angles(), 175.0) {}

    Codebook(std::vector<double> angles, double clip_limit) : angles_(std::move(angles)), clip_limit_(clip_limit) {
        if (angles_.empty() || angles_.size() > 26) {
            throw Error(ErrorCode::InvalidArgument, "codebook needs between 1 and 26 symbols");
        }
        if (!(clip_limit_ > 0.0) || !std::isfinite(clip_limit_)) {
            throw Error(ErrorCode::InvalidArgument, "clip limit must be positive");
        }
        for (double a : angles_) {
            if (!std::isfinite(a)) {
                throw Error(ErrorCode::InvalidArgument, "codebook angle must be finite");
            }
        }
    }

    std::size_t size() const { return angles_.size(); }
    double clip_limit() const { return clip_limit_; }
    const std::vector<double>& angles() const { return angles_; }

    char symbol(std::size_t index) const { return static_cast<char>('A' + index); }

    bool contains(char symbol) const {
        return symbol >= 'A' && static_cast<std::size_t>(symbol - 'A') < angles_.size();
    }

    // Table angle before clipping.
    double raw(char symbol) const {
        if (!contains(symbol)) {
            throw Error(ErrorCode::UnknownSymbol, std::string("symbol '") + symbol + "' not in codebook");
        }
        return angles_[static_cast<std::size_t>(symbol - 'A')];
    }

    double clip(double degrees) const { return std::clamp(degrees, -clip_limit_, clip_limit_); }

    double lookup(char symbol) const { return clip(raw(symbol)); }

    bool operator==(const Codebook&) const = default;

private:
    static std::vector<double> standard_angles() {
        std::vector<double> angles;
        for (int k = 0; k <= 8; ++k) {
            angles.push_back(normalize_degrees(45.0 * k));
        }
        return angles;
    }

    std::vector<double> angles_;
    double clip_limit_;
};

inline Codebook default_codebook() { return Codebook{}; }

enum class MotionFlag { Dynamic, Hold };

inline char to_char(MotionFlag flag) { return flag == MotionFlag::Dynamic ? 'D' : 'H'; }

inline std::optional<MotionFlag> parse_motion_flag(std::string_view text) {
    if (text == "D" || text == "Default" || text == "Dynamic") {
        return MotionFlag::Dynamic;
    }
    if (text == "H" || text == "Hold") {
        return MotionFlag::Hold;
    }
    return std::nullopt;
}

struct Frame {
    std::vector<char> symbols;
    std::vector<MotionFlag> flags;
    Duration duration;
    std::optional<std::string> label;

    bool operator==(const Frame&) const = default;
};

struct NamedPose {
    std::string name;
    std::vector<char> symbols;

    bool operator==(const NamedPose&) const = default;
};

struct Score {
    int version = kNotationVersion;
    std::size_t servo_count = 6;
    Codebook codebook;
    ProfileConfig profile;
    std::optional<CouplingModel> coupling;
    std::optional<std::vector<double>> home;
    Palette palette;
    std::vector<NamedPose> poses;
    std::vector<Frame> frames;

    Duration total_duration() const {
        Duration total;
        for (const auto& f : frames) {
            total += f.duration;
        }
        return total;
    }

    const NamedPose* find_pose(std::string_view name) const {
        for (const auto& p : poses) {
            if (p.name == name) {
                return &p;
            }
        }
        return nullptr;
    }

    CouplingModel coupling_or_default() const { return coupling.value_or(CouplingModel{}); }

    std::vector<double> home_or_zero() const { return home.value_or(std::vector<double>(servo_count, 0.0)); }

    bool operator==(const Score&) const = default;
};

namespace detail {

inline bool label_is_printable(std::string_view label) {
    return std::none_of(label.begin(), label.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return (u < 0x20 && c != '\n' && c != '\t' && c != '\r') || u == 0x7f;
    });
}

inline void check_symbols(const std::vector<char>& symbols, const Codebook& codebook, std::size_t n,
                          std::string_view what) {
    if (symbols.size() != n) {
        throw Error(ErrorCode::LengthMismatch, std::string(what) + " has " + std::to_string(symbols.size()) +
                                                   " symbols, expected " + std::to_string(n));
    }
    for (char s : symbols) {
        if (!codebook.contains(s)) {
            throw Error(ErrorCode::UnknownSymbol, std::string(what) + " uses symbol outside the codebook");
        }
    }
}

} // namespace detail

// Throws Error on the first violated invariant.
inline void validate(const Score& score) {
    if (score.version != kNotationVersion) {
        throw Error(ErrorCode::BadHeader, "unsupported version " + std::to_string(score.version));
    }
    if (score.servo_count < 1 || score.servo_count > kMaxServos) {
        throw Error(ErrorCode::BadHeader, "servo count out of range");
    }
    validate(score.profile);
    if (score.coupling) {
        const auto& c = *score.coupling;
        if (c.driver_index == c.driven_index || c.driver_index >= score.servo_count ||
            c.driven_index >= score.servo_count || !std::isfinite(c.kappa)) {
            throw Error(ErrorCode::BadHeader, "coupling joints must differ and lie within the servo count");
        }
    }
    if (score.home) {
        if (score.home->size() != score.servo_count) {
            throw Error(ErrorCode::LengthMismatch, "home pose length differs from servo count");
        }
        for (double a : *score.home) {
            if (!std::isfinite(a) || std::abs(a) > score.codebook.clip_limit()) {
                throw Error(ErrorCode::BadHeader, "home angle outside clip limit");
            }
        }
    }
    for (std::size_t i = 0; i < score.palette.size(); ++i) {
        if (!detail::is_identifier(score.palette[i].name)) {
            throw Error(ErrorCode::BadHeader, "invalid palette name");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (score.palette[j].name == score.palette[i].name) {
                throw Error(ErrorCode::BadHeader, "duplicate palette name " + score.palette[i].name);
            }
        }
    }
    for (std::size_t i = 0; i < score.poses.size(); ++i) {
        const auto& pose = score.poses[i];
        if (!detail::is_identifier(pose.name)) {
            throw Error(ErrorCode::BadHeader, "invalid pose name");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (score.poses[j].name == pose.name) {
                throw Error(ErrorCode::DuplicatePoseName, "duplicate pose " + pose.name);
            }
        }
        detail::check_symbols(pose.symbols, score.codebook, score.servo_count, "pose " + pose.name);
    }
    if (score.frames.empty()) {
        throw Error(ErrorCode::EmptyScore, "score has no frames");
    }
    for (std::size_t i = 0; i < score.frames.size(); ++i) {
        const auto& f = score.frames[i];
        std::string what = "frame " + std::to_string(i);
        detail::check_symbols(f.symbols, score.codebook, score.servo_count, what);
        if (f.flags.size() != score.servo_count) {
            throw Error(ErrorCode::LengthMismatch, what + " flag count differs from servo count");
        }
        if (f.duration.micros() <= 0) {
            throw Error(ErrorCode::NonPositiveDuration, what + " duration must be positive");
        }
        if (f.label && !detail::label_is_printable(*f.label)) {
            throw Error(ErrorCode::InvalidArgument, what + " label contains control characters");
        }
    }
}

namespace detail {

class ScoreParser {
public:
    explicit ScoreParser(std::string_view source) : lines_(tokenize(source)) {}

    Score run() {
        if (lines_.empty()) {
            throw ParseError(ErrorCode::BadHeader, 1, 1, "missing 'ropera <version>' line");
        }
        for (const auto& line : lines_) {
            directive(line);
        }
        if (!servos_seen_) {
            throw ParseError(ErrorCode::BadHeader, last_line(), 1, "missing 'servos' directive");
        }
        if (score_.frames.empty()) {
            throw ParseError(ErrorCode::EmptyScore, last_line(), 1, "score has no frames");
        }
        return std::move(score_);
    }

private:
    [[noreturn]] static void fail(ErrorCode code, const Line& line, const Token& token, const std::string& msg) {
        throw ParseError(code, line.number, token.column, msg);
    }

    std::size_t last_line() const { return lines_.back().number; }

    void directive(const Line& line) {
        const Token& head = line.tokens.front();
        const std::string& word = head.text;
        if (!version_seen_) {
            if (word != "ropera") {
                fail(ErrorCode::BadHeader, line, head, "expected 'ropera <version>' as first line");
            }
            version(line);
            return;
        }
        if (word == "frame") {
            need_servos(line);
            frame(line);
            return;
        }
        if (!score_.frames.empty()) {
            fail(ErrorCode::BadHeader, line, head, "directive '" + word + "' after the first frame");
        }
        if (word == "ropera") {
            fail(ErrorCode::BadHeader, line, head, "repeated 'ropera' line");
        } else if (word == "servos") {
            servos(line);
        } else if (word == "codebook") {
            codebook(line);
        } else if (word == "profile") {
            profile(line);
        } else if (word == "rate") {
            rate(line);
        } else if (word == "coupling") {
            need_servos(line);
            coupling(line);
        } else if (word == "home") {
            need_servos(line);
            home(line);
        } else if (word == "palette") {
            palette(line);
        } else if (word == "pose") {
            need_servos(line);
            pose(line);
        } else {
            fail(ErrorCode::BadHeader, line, head, "unknown directive '" + word + "'");
        }
    }

    void need_servos(const Line& line) {
        if (!servos_seen_) {
            fail(ErrorCode::BadHeader, line, line.tokens.front(), "'servos' must precede this directive");
        }
        body_started_ = true;
    }

    void once(bool& flag, const Line& line) {
        if (flag) {
            fail(ErrorCode::BadHeader, line, line.tokens.front(), "repeated '" + line.tokens.front().text + "'");
        }
        flag = true;
    }

    void arity(const Line& line, std::size_t n) {
        if (line.tokens.size() != n) {
            const Token& at = line.tokens.size() > n ? line.tokens[n] : line.tokens.front();
            fail(ErrorCode::BadHeader, line, at,
                 "'" + line.tokens.front().text + "' takes " + std::to_string(n - 1) + " argument(s)");
        }
    }

    double number(const Line& line, const Token& token, std::string_view text) {
        auto v = parse_number(text);
        if (!v) {
            fail(ErrorCode::Syntax, line, token, "expected a number, got '" + std::string(text) + "'");
        }
        return *v;
    }

    void version(const Line& line) {
        arity(line, 2);
        auto v = parse_integer(line.tokens[1].text);
        if (!v || *v != kNotationVersion) {
            fail(ErrorCode::BadHeader, line, line.tokens[1], "unsupported version '" + line.tokens[1].text + "'");
        }
        version_seen_ = true;
        score_.version = static_cast<int>(*v);
    }

    void servos(const Line& line) {
        once(servos_seen_, line);
        arity(line, 2);
        if (body_started_) {
            fail(ErrorCode::BadHeader, line, line.tokens[0], "'servos' must precede poses and frames");
        }
        auto v = parse_integer(line.tokens[1].text);
        if (!v || *v < 1 || *v > static_cast<std::int64_t>(kMaxServos)) {
            fail(ErrorCode::BadHeader, line, line.tokens[1],
                 "servo count must be an integer in 1.." + std::to_string(kMaxServos));
        }
        score_.servo_count = static_cast<std::size_t>(*v);
    }

    void codebook(const Line& line) {
        once(codebook_seen_, line);
        if (body_started_) {
            fail(ErrorCode::BadHeader, line, line.tokens[0], "'codebook' must precede home, poses and frames");
        }
        std::vector<double> angles;
        double clip = 175.0;
        bool clip_seen = false;
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
            const Token& t = line.tokens[i];
            auto kv = split_key_value(t.text);
            if (!kv) {
                fail(ErrorCode::Syntax, line, t, "expected <symbol>=<degrees>");
            }
            if (kv->first == "clip") {
                if (clip_seen) {
                    fail(ErrorCode::BadHeader, line, t, "repeated clip");
                }
                clip_seen = true;
                clip = number(line, t, kv->second);
                if (!(clip > 0.0)) {
                    fail(ErrorCode::BadHeader, line, t, "clip must be positive");
                }
                continue;
            }
            if (clip_seen) {
                fail(ErrorCode::BadHeader, line, t, "clip must come last");
            }
            char expected = static_cast<char>('A' + angles.size());
            if (kv->first.size() != 1 || kv->first[0] != expected || angles.size() >= 26) {
                fail(ErrorCode::BadHeader, line, t,
                     std::string("codebook symbols must be consecutive from A; expected ") + expected);
            }
            angles.push_back(number(line, t, kv->second));
        }
        if (angles.empty()) {
            fail(ErrorCode::BadHeader, line, line.tokens[0], "codebook needs at least one symbol");
        }
        score_.codebook = Codebook(std::move(angles), clip);
    }

    void profile(const Line& line) {
        once(profile_seen_, line);
        if (line.tokens.size() < 2) {
            fail(ErrorCode::BadHeader, line, line.tokens[0], "'profile' needs a kind");
        }
        auto kind = parse_profile_kind(line.tokens[1].text);
        if (!kind) {
            fail(ErrorCode::BadHeader, line, line.tokens[1], "unknown profile '" + line.tokens[1].text + "'");
        }
        ProfileConfig& cfg = score_.profile;
        cfg.kind = *kind;
        bool vmax = false, rho = false, step = false;
        for (std::size_t i = 2; i < line.tokens.size(); ++i) {
            const Token& t = line.tokens[i];
            auto kv = split_key_value(t.text);
            if (!kv) {
                fail(ErrorCode::Syntax, line, t, "expected key=value");
            }
            auto set = [&](bool& seen, double& field) {
                if (seen) {
                    fail(ErrorCode::BadHeader, line, t, "repeated key");
                }
                seen = true;
                field = number(line, t, kv->second);
            };
            if (kv->first == "vmax") {
                set(vmax, cfg.v_max);
                if (!(cfg.v_max > 0.0)) fail(ErrorCode::BadHeader, line, t, "vmax must be positive");
            } else if (kv->first == "rho") {
                set(rho, cfg.transition_fraction);
                if (!(cfg.transition_fraction > 0.0 && cfg.transition_fraction <= 1.0)) {
                    fail(ErrorCode::BadHeader, line, t, "rho must lie in (0, 1]");
                }
            } else if (kv->first == "step") {
                set(step, cfg.step_deg);
                if (!(cfg.step_deg > 0.0)) fail(ErrorCode::BadHeader, line, t, "step must be positive");
            } else {
                fail(ErrorCode::BadHeader, line, t, "unknown profile key '" + std::string(kv->first) + "'");
            }
        }
    }

    void rate(const Line& line) {
        once(rate_seen_, line);
        arity(line, 2);
        double r = number(line, line.tokens[1], line.tokens[1].text);
        if (!(r > 0.0)) {
            fail(ErrorCode::BadHeader, line, line.tokens[1], "rate must be positive");
        }
        score_.profile.sample_rate = r;
    }

    void coupling(const Line& line) {
        once(coupling_seen_, line);
        CouplingModel model;
        bool kappa = false, driver = false, driven = false;
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
            const Token& t = line.tokens[i];
            auto kv = split_key_value(t.text);
            if (!kv) {
                fail(ErrorCode::Syntax, line, t, "expected key=value");
            }
            auto index = [&](bool& seen, std::size_t& field) {
                if (seen) fail(ErrorCode::BadHeader, line, t, "repeated key");
                seen = true;
                auto v = parse_integer(kv->second);
                if (!v || *v < 1 || *v > static_cast<std::int64_t>(score_.servo_count)) {
                    fail(ErrorCode::BadHeader, line, t, "joint index must be in 1..servos");
                }
                field = static_cast<std::size_t>(*v - 1);
            };
            if (kv->first == "kappa") {
                if (kappa) fail(ErrorCode::BadHeader, line, t, "repeated key");
                kappa = true;
                model.kappa = number(line, t, kv->second);
            } else if (kv->first == "driver") {
                index(driver, model.driver_index);
            } else if (kv->first == "driven") {
                index(driven, model.driven_index);
            } else {
                fail(ErrorCode::BadHeader, line, t, "unknown coupling key '" + std::string(kv->first) + "'");
            }
        }
        if (!kappa) {
            fail(ErrorCode::BadHeader, line, line.tokens[0], "coupling needs kappa=");
        }
        if (model.driver_index == model.driven_index) {
            fail(ErrorCode::BadHeader, line, line.tokens[0], "coupling driver and driven must differ");
        }
        if (model.driver_index >= score_.servo_count || model.driven_index >= score_.servo_count) {
            fail(ErrorCode::BadHeader, line, line.tokens[0], "coupling joints exceed servo count");
        }
        score_.coupling = model;
    }

    void home(const Line& line) {
        once(home_seen_, line);
        if (line.tokens.size() - 1 != score_.servo_count) {
            fail(ErrorCode::LengthMismatch, line, line.tokens[0],
                 "home needs " + std::to_string(score_.servo_count) + " angles");
        }
        std::vector<double> angles;
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
            double a = number(line, line.tokens[i], line.tokens[i].text);
            if (std::abs(a) > score_.codebook.clip_limit()) {
                fail(ErrorCode::BadHeader, line, line.tokens[i], "home angle exceeds clip limit");
            }
            angles.push_back(a);
        }
        score_.home = std::move(angles);
    }

    void palette(const Line& line) {
        once(palette_seen_, line);
        if (line.tokens.size() < 2) {
            fail(ErrorCode::BadHeader, line, line.tokens[0], "palette needs at least one color");
        }
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
            const Token& t = line.tokens[i];
            auto kv = split_key_value(t.text);
            if (!kv || !is_identifier(kv->first)) {
                fail(ErrorCode::Syntax, line, t, "expected <name>=#RRGGBB");
            }
            auto rgb = Rgb::parse(kv->second);
            if (!rgb) {
                fail(ErrorCode::Syntax, line, t, "bad color '" + std::string(kv->second) + "'");
            }
            if (find_color(score_.palette, kv->first)) {
                fail(ErrorCode::BadHeader, line, t, "duplicate palette name '" + std::string(kv->first) + "'");
            }
            score_.palette.push_back({std::string(kv->first), *rgb});
        }
    }

    std::vector<char> symbols(const Line& line, const Token& token, std::string_view text) {
        if (text.size() != score_.servo_count) {
            fail(ErrorCode::LengthMismatch, line, token,
                 "expected " + std::to_string(score_.servo_count) + " symbols, got " + std::to_string(text.size()));
        }
        std::vector<char> out;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (!score_.codebook.contains(text[i])) {
                throw ParseError(ErrorCode::UnknownSymbol, line.number, token.column,
                                 std::string("unknown symbol '") + text[i] + "' for servo " + std::to_string(i + 1));
            }
            out.push_back(text[i]);
        }
        return out;
    }

    void pose(const Line& line) {
        arity(line, 2);
        const Token& t = line.tokens[1];
        auto kv = split_key_value(t.text);
        if (!kv || !is_identifier(kv->first)) {
            fail(ErrorCode::Syntax, line, t, "expected <name>=<symbols>");
        }
        if (score_.find_pose(kv->first)) {
            fail(ErrorCode::DuplicatePoseName, line, t, "pose '" + std::string(kv->first) + "' already defined");
        }
        score_.poses.push_back({std::string(kv->first), symbols(line, t, kv->second)});
    }

    void frame(const Line& line) {
        Frame f;
        const Token* s_token = nullptr;
        const Token* m_token = nullptr;
        const Token* t_token = nullptr;
        bool label_seen = false;
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
            const Token& t = line.tokens[i];
            auto kv = split_key_value(t.text);
            if (!kv) {
                fail(ErrorCode::Syntax, line, t, "expected key=value");
            }
            auto [key, value] = *kv;
            auto dup = [&](bool seen) {
                if (seen) fail(ErrorCode::Syntax, line, t, "repeated key '" + std::string(key) + "'");
            };
            if (key == "S") {
                dup(s_token != nullptr);
                s_token = &t;
                if (!value.empty() && value.front() == '@') {
                    const NamedPose* p = score_.find_pose(value.substr(1));
                    if (!p) {
                        fail(ErrorCode::UnknownSymbol, line, t, "unknown pose '" + std::string(value.substr(1)) + "'");
                    }
                    f.symbols = p->symbols;
                } else {
                    f.symbols = symbols(line, t, value);
                }
            } else if (key == "M") {
                dup(m_token != nullptr);
                m_token = &t;
                if (value.size() != score_.servo_count) {
                    fail(ErrorCode::LengthMismatch, line, t,
                         "expected " + std::to_string(score_.servo_count) + " flags, got " +
                             std::to_string(value.size()));
                }
                for (char c : value) {
                    auto flag = parse_motion_flag(std::string_view(&c, 1));
                    if (!flag) {
                        fail(ErrorCode::Syntax, line, t, "motion flags are D or H");
                    }
                    f.flags.push_back(*flag);
                }
            } else if (key == "T") {
                dup(t_token != nullptr);
                t_token = &t;
                auto d = Duration::parse(value);
                if (!d) {
                    fail(ErrorCode::Syntax, line, t, "duration must be decimal seconds with at most 6 decimals");
                }
                if (d->micros() <= 0) {
                    fail(ErrorCode::NonPositiveDuration, line, t, "duration must be positive");
                }
                f.duration = *d;
            } else if (key == "label") {
                dup(label_seen);
                label_seen = true;
                f.label = std::string(value);
            } else {
                fail(ErrorCode::Syntax, line, t, "unknown frame key '" + std::string(key) + "'");
            }
        }
        if (!s_token || !m_token || !t_token) {
            fail(ErrorCode::Syntax, line, line.tokens[0], "frame needs S=, M= and T=");
        }
        score_.frames.push_back(std::move(f));
    }

    std::vector<Line> lines_;
    Score score_;
    bool version_seen_ = false;
    bool servos_seen_ = false;
    bool codebook_seen_ = false;
    bool profile_seen_ = false;
    bool rate_seen_ = false;
    bool coupling_seen_ = false;
    bool home_seen_ = false;
    bool palette_seen_ = false;
    bool body_started_ = false;
};

} // namespace detail

// Parses a complete score document. Throws ParseError with a 1-based position.
inline Score parse_score(std::string_view text) { return detail::ScoreParser(text).run(); }

// Canonical, byte-deterministic text. Header lines equal to their defaults are
// omitted. Refuses invalid scores.
inline std::string serialize_score(const Score& score) {
    validate(score);
    using detail::format_number;
    std::string out;
    out += "ropera " + std::to_string(score.version) + "\n";
    out += "servos " + std::to_string(score.servo_count) + "\n";
    if (score.codebook != Codebook{}) {
        out += "codebook";
        for (std::size_t i = 0; i < score.codebook.size(); ++i) {
            out += ' ';
            out += score.codebook.symbol(i);
            out += '=' + format_number(score.codebook.angles()[i]);
        }
        out += " clip=" + format_number(score.codebook.clip_limit()) + "\n";
    }
    const ProfileConfig defaults;
    const ProfileConfig& p = score.profile;
    if (p.kind != defaults.kind || p.v_max != defaults.v_max || p.transition_fraction != defaults.transition_fraction ||
        p.step_deg != defaults.step_deg) {
        out += "profile " + std::string(to_string(p.kind)) + " vmax=" + format_number(p.v_max) +
               " rho=" + format_number(p.transition_fraction) + " step=" + format_number(p.step_deg) + "\n";
    }
    if (p.sample_rate != defaults.sample_rate) {
        out += "rate " + format_number(p.sample_rate) + "\n";
    }
    if (score.coupling) {
        out += "coupling kappa=" + format_number(score.coupling->kappa) +
               " driver=" + std::to_string(score.coupling->driver_index + 1) +
               " driven=" + std::to_string(score.coupling->driven_index + 1) + "\n";
    }
    if (score.home) {
        out += "home";
        for (double a : *score.home) {
            out += ' ' + format_number(a);
        }
        out += "\n";
    }
    if (!score.palette.empty()) {
        out += "palette";
        for (const auto& c : score.palette) {
            out += ' ' + c.name + '=' + c.color.hex();
        }
        out += "\n";
    }
    for (const auto& pose : score.poses) {
        out += "pose " + pose.name + '=' + std::string(pose.symbols.begin(), pose.symbols.end()) + "\n";
    }
    for (const auto& f : score.frames) {
        out += "frame S=" + std::string(f.symbols.begin(), f.symbols.end()) + " M=";
        for (auto flag : f.flags) {
            out += to_char(flag);
        }
        out += " T=" + f.duration.to_string();
        if (f.label) {
            out += " label=" + detail::quote(*f.label);
        }
        out += "\n";
    }
    return out;
}

} // namespace ropera
