#pragma once

// Posture vocabulary (named symbolic poses) and cross-morphology remapping.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ropera/detail/text.hpp"
#include "ropera/error.hpp"
#include "ropera/notation.hpp"

namespace ropera {

enum class PostureCategory { UpperLimb, FullBody };

inline std::string_view to_string(PostureCategory c) {
    return c == PostureCategory::UpperLimb ? "upper_limb" : "full_body";
}

struct PosturePrimitive {
    std::string name;
    PostureCategory category = PostureCategory::UpperLimb;
    std::vector<char> symbols;
    std::string provenance;

    bool operator==(const PosturePrimitive&) const = default;
};

// Reads a vocabulary document: "ropera 1", "servos N", then one line per
// primitive:
//   pose <name>=<symbols> category=upper_limb|full_body [note="..."]
inline std::vector<PosturePrimitive> parse_vocabulary(std::string_view text,
                                                      const Codebook& codebook = default_codebook()) {
    using namespace detail;
    auto lines = tokenize(text);
    if (lines.empty()) {
        throw ParseError(ErrorCode::BadHeader, 1, 1, "empty vocabulary");
    }
    auto fail = [](ErrorCode code, const Line& line, const Token& t, const std::string& msg) {
        throw ParseError(code, line.number, t.column, msg);
    };
    const Line& head = lines[0];
    if (head.tokens.size() != 2 || head.tokens[0].text != "ropera" || head.tokens[1].text != "1") {
        fail(ErrorCode::BadHeader, head, head.tokens[0], "expected 'ropera 1'");
    }
    if (lines.size() < 2 || lines[1].tokens.size() != 2 || lines[1].tokens[0].text != "servos") {
        const Line& at = lines.size() < 2 ? head : lines[1];
        fail(ErrorCode::BadHeader, at, at.tokens[0], "expected 'servos <N>'");
    }
    auto n = parse_integer(lines[1].tokens[1].text);
    if (!n || *n < 1 || *n > static_cast<std::int64_t>(kMaxServos)) {
        fail(ErrorCode::BadHeader, lines[1], lines[1].tokens[1], "bad servo count");
    }

    std::vector<PosturePrimitive> out;
    for (std::size_t li = 2; li < lines.size(); ++li) {
        const Line& line = lines[li];
        if (line.tokens[0].text != "pose" || line.tokens.size() < 3) {
            fail(ErrorCode::Syntax, line, line.tokens[0], "expected 'pose <name>=<symbols> category=...'");
        }
        auto kv = split_key_value(line.tokens[1].text);
        if (!kv || !is_identifier(kv->first)) {
            fail(ErrorCode::Syntax, line, line.tokens[1], "expected <name>=<symbols>");
        }
        PosturePrimitive p;
        p.name = std::string(kv->first);
        for (const auto& existing : out) {
            if (existing.name == p.name) {
                fail(ErrorCode::DuplicatePoseName, line, line.tokens[1], "duplicate primitive '" + p.name + "'");
            }
        }
        if (kv->second.size() != static_cast<std::size_t>(*n)) {
            fail(ErrorCode::LengthMismatch, line, line.tokens[1], "symbol count differs from servo count");
        }
        for (char c : kv->second) {
            if (!codebook.contains(c)) {
                fail(ErrorCode::UnknownSymbol, line, line.tokens[1], std::string("unknown symbol '") + c + "'");
            }
            p.symbols.push_back(c);
        }
        bool category_seen = false;
        for (std::size_t ti = 2; ti < line.tokens.size(); ++ti) {
            const Token& t = line.tokens[ti];
            auto attr = split_key_value(t.text);
            if (!attr) {
                fail(ErrorCode::Syntax, line, t, "expected key=value");
            }
            if (attr->first == "category") {
                if (attr->second == "upper_limb") {
                    p.category = PostureCategory::UpperLimb;
                } else if (attr->second == "full_body") {
                    p.category = PostureCategory::FullBody;
                } else {
                    fail(ErrorCode::Syntax, line, t, "category is upper_limb or full_body");
                }
                category_seen = true;
            } else if (attr->first == "note") {
                p.provenance = std::string(attr->second);
            } else {
                fail(ErrorCode::Syntax, line, t, "unknown attribute '" + std::string(attr->first) + "'");
            }
        }
        if (!category_seen) {
            fail(ErrorCode::Syntax, line, line.tokens[0], "missing category=");
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Locates an asset file: $ROPERA_HOME/assets/<name>, then the install-time
// asset directory.
inline std::filesystem::path find_asset(std::string_view name) {
    std::vector<std::filesystem::path> candidates;
    if (const char* home = std::getenv("ROPERA_HOME"); home && *home) {
        candidates.emplace_back(std::filesystem::path(home) / "assets" / name);
    }
#ifdef ROPERA_ASSET_DIR
    candidates.emplace_back(std::filesystem::path(ROPERA_ASSET_DIR) / name);
#endif
    for (const auto& c : candidates) {
        std::error_code ec;
        if (std::filesystem::is_regular_file(c, ec)) {
            return c;
        }
    }
    throw Error(ErrorCode::AssetMissing, "asset '" + std::string(name) + "' not found (set ROPERA_HOME)");
}

inline std::string read_asset_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::AssetMissing, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::vector<PosturePrimitive> load_vocabulary(const std::filesystem::path& path) {
    return parse_vocabulary(read_asset_text(path));
}

// The shipped fifteen-primitive vocabulary (assets/vocabulary.ropera).
inline std::vector<PosturePrimitive> builtin_vocabulary() { return load_vocabulary(find_asset("vocabulary.ropera")); }

// Remapping between servo layouts. Source indices are 0-based.
struct CopyFrom {
    std::size_t source = 0;
    bool operator==(const CopyFrom&) const = default;
};

struct Constant {
    char symbol = 'A';
    bool operator==(const Constant&) const = default;
};

using RemapRule = std::variant<CopyFrom, Constant>;

struct RemapSpec {
    std::vector<RemapRule> rules; // one per target servo

    std::size_t target_servo_count() const { return rules.size(); }
    bool operator==(const RemapSpec&) const = default;
};

inline RemapSpec identity_remap(std::size_t n) {
    RemapSpec spec;
    for (std::size_t i = 0; i < n; ++i) {
        spec.rules.emplace_back(CopyFrom{i});
    }
    return spec;
}

// Spec equivalent to applying `first` and then `second`.
inline RemapSpec compose(const RemapSpec& first, const RemapSpec& second) {
    RemapSpec out;
    for (const auto& rule : second.rules) {
        if (const auto* copy = std::get_if<CopyFrom>(&rule)) {
            if (copy->source >= first.rules.size()) {
                throw Error(ErrorCode::IndexOutOfRange, "composed remap references a missing channel");
            }
            out.rules.push_back(first.rules[copy->source]);
        } else {
            out.rules.push_back(rule);
        }
    }
    return out;
}

// Comma separated target rules: a 1-based source servo or "=<symbol>".
// "1,2,4,6" keeps servos 1, 2, 4 and 6; "1,2,3,4,5,6,=A" appends a constant channel.
inline RemapSpec parse_remap_spec(std::string_view text) {
    RemapSpec spec;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        if (item.size() == 2 && item[0] == '=' && item[1] >= 'A' && item[1] <= 'Z') {
            spec.rules.emplace_back(Constant{item[1]});
        } else {
            auto v = detail::parse_integer(item);
            if (!v || *v < 1) {
                throw Error(ErrorCode::InvalidArgument, "bad remap rule '" + std::string(item) + "'");
            }
            spec.rules.emplace_back(CopyFrom{static_cast<std::size_t>(*v - 1)});
        }
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return spec;
}

// Rebuilds every pose and frame for a new servo layout. Constant channels are
// Dynamic on the first frame and Hold afterwards. Durations, labels and the
// remaining header carry over; the coupling directive is dropped because its
// joint indices belong to the source morphology.
inline Score remap_score(const Score& score, const RemapSpec& spec) {
    if (spec.rules.empty() || spec.rules.size() > kMaxServos) {
        throw Error(ErrorCode::IndexOutOfRange, "target servo count out of range");
    }
    for (const auto& rule : spec.rules) {
        if (const auto* copy = std::get_if<CopyFrom>(&rule)) {
            if (copy->source >= score.servo_count) {
                throw Error(ErrorCode::IndexOutOfRange, "remap source index " + std::to_string(copy->source + 1) +
                                                            " exceeds servo count " +
                                                            std::to_string(score.servo_count));
            }
        } else if (!score.codebook.contains(std::get<Constant>(rule).symbol)) {
            throw Error(ErrorCode::UnknownSymbol, "remap constant symbol not in codebook");
        }
    }

    auto project = [&](const std::vector<char>& symbols) {
        std::vector<char> out;
        for (const auto& rule : spec.rules) {
            if (const auto* copy = std::get_if<CopyFrom>(&rule)) {
                out.push_back(symbols[copy->source]);
            } else {
                out.push_back(std::get<Constant>(rule).symbol);
            }
        }
        return out;
    };

    Score out = score;
    out.servo_count = spec.rules.size();
    out.coupling.reset();
    if (score.home) {
        std::vector<double> home;
        for (const auto& rule : spec.rules) {
            const auto* copy = std::get_if<CopyFrom>(&rule);
            home.push_back(copy ? (*score.home)[copy->source] : 0.0);
        }
        out.home = std::move(home);
    }
    for (auto& pose : out.poses) {
        pose.symbols = project(pose.symbols);
    }
    for (std::size_t fi = 0; fi < out.frames.size(); ++fi) {
        const Frame& src = score.frames[fi];
        Frame& dst = out.frames[fi];
        dst.symbols = project(src.symbols);
        dst.flags.clear();
        for (const auto& rule : spec.rules) {
            if (const auto* copy = std::get_if<CopyFrom>(&rule)) {
                dst.flags.push_back(src.flags[copy->source]);
            } else {
                dst.flags.push_back(fi == 0 ? MotionFlag::Dynamic : MotionFlag::Hold);
            }
        }
    }
    return out;
}

} // namespace ropera
