#pragma once

// Value types shared by the score header and the pipeline stages.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ropera/detail/text.hpp"
#include "ropera/error.hpp"

namespace ropera {

// Frame duration held as whole microseconds so that sums are exact and the
// decimal text round-trips byte for byte.
class Duration {
public:
    constexpr Duration() = default;

    static constexpr Duration from_micros(std::int64_t micros) { return Duration(micros); }

    // Accepts "<digits>[.<digits>]" with an optional leading '-', at most six
    // fractional digits.
    static std::optional<Duration> parse(std::string_view text) {
        bool negative = false;
        if (!text.empty() && text.front() == '-') {
            negative = true;
            text.remove_prefix(1);
        }
        auto dot = text.find('.');
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
        if (whole.empty() || whole.size() > 9 || frac.size() > 6) {
            return std::nullopt;
        }
        if (dot != std::string_view::npos && frac.empty()) {
            return std::nullopt;
        }
        std::int64_t micros = 0;
        for (char c : whole) {
            if (c < '0' || c > '9') {
                return std::nullopt;
            }
            micros = micros * 10 + (c - '0');
        }
        std::int64_t scale = 100000;
        std::int64_t frac_micros = 0;
        for (char c : frac) {
            if (c < '0' || c > '9') {
                return std::nullopt;
            }
            frac_micros += (c - '0') * scale;
            scale /= 10;
        }
        micros = micros * 1000000 + frac_micros;
        return Duration(negative ? -micros : micros);
    }

    constexpr std::int64_t micros() const { return micros_; }
    constexpr double seconds() const { return static_cast<double>(micros_) / 1e6; }

    // Canonical text: no trailing fractional zeros, no trailing dot.
    std::string to_string() const {
        std::int64_t magnitude = micros_ < 0 ? -micros_ : micros_;
        std::string out = micros_ < 0 ? "-" : "";
        out += std::to_string(magnitude / 1000000);
        std::int64_t frac = magnitude % 1000000;
        if (frac != 0) {
            std::string digits = std::to_string(frac);
            digits.insert(0, 6 - digits.size(), '0');
            while (digits.back() == '0') {
                digits.pop_back();
            }
            out += "." + digits;
        }
        return out;
    }

    constexpr Duration operator+(Duration other) const { return Duration(micros_ + other.micros_); }
    constexpr Duration& operator+=(Duration other) {
        micros_ += other.micros_;
        return *this;
    }
    constexpr auto operator<=>(const Duration&) const = default;

private:
    constexpr explicit Duration(std::int64_t micros) : micros_(micros) {}
    std::int64_t micros_ = 0;
};

enum class ProfileKind { VendorDefault, LinearSmoothed, MinJerk, SCurve };

inline std::string_view to_string(ProfileKind kind) {
    switch (kind) {
    case ProfileKind::VendorDefault: return "vendor_default";
    case ProfileKind::LinearSmoothed: return "linear_smoothed";
    case ProfileKind::MinJerk: return "min_jerk";
    case ProfileKind::SCurve: return "s_curve";
    }
    return "vendor_default";
}

inline std::optional<ProfileKind> parse_profile_kind(std::string_view text) {
    for (auto kind : {ProfileKind::VendorDefault, ProfileKind::LinearSmoothed, ProfileKind::MinJerk,
                      ProfileKind::SCurve}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

struct ProfileConfig {
    ProfileKind kind = ProfileKind::VendorDefault;
    double v_max = 90.0;               // deg/s
    double transition_fraction = 0.7; // share of T spent moving (min_jerk, s_curve, linear_smoothed)
    double step_deg = 2.0;             // linear_smoothed staircase step
    double sample_rate = 100.0;        // Hz

    bool operator==(const ProfileConfig&) const = default;
};

inline void validate(const ProfileConfig& config) {
    if (!(config.transition_fraction > 0.0 && config.transition_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "transition fraction must lie in (0, 1]");
    }
    if (!(config.v_max > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "v_max must be positive");
    }
    if (!(config.step_deg > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "step_deg must be positive");
    }
    if (!(config.sample_rate > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
    }
}

// Linear static coupling between two joints (0-based indices). The driven
// joint is commanded as desired - kappa * commanded[driver].
struct CouplingModel {
    double kappa = 0.0;
    std::size_t driver_index = 4;
    std::size_t driven_index = 5;

    bool operator==(const CouplingModel&) const = default;
};

inline void validate(const CouplingModel& coupling, std::size_t servo_count) {
    if (coupling.kappa == 0.0) {
        return;
    }
    if (coupling.driver_index == coupling.driven_index) {
        throw Error(ErrorCode::InvalidArgument, "coupling driver and driven joints must differ");
    }
    if (coupling.driver_index >= servo_count || coupling.driven_index >= servo_count) {
        throw Error(ErrorCode::IndexOutOfRange, "coupling joint index exceeds servo count");
    }
}

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;

    std::string hex() const {
        static constexpr char digits[] = "0123456789ABCDEF";
        std::string out = "#";
        for (std::uint8_t v : {r, g, b}) {
            out.push_back(digits[v >> 4]);
            out.push_back(digits[v & 0xF]);
        }
        return out;
    }

    static std::optional<Rgb> parse(std::string_view text) {
        if (text.size() != 7 || text.front() != '#') {
            return std::nullopt;
        }
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            return -1;
        };
        std::uint8_t channels[3];
        for (int i = 0; i < 3; ++i) {
            int hi = nibble(text[1 + 2 * i]);
            int lo = nibble(text[2 + 2 * i]);
            if (hi < 0 || lo < 0) {
                return std::nullopt;
            }
            channels[i] = static_cast<std::uint8_t>(hi * 16 + lo);
        }
        return Rgb{channels[0], channels[1], channels[2]};
    }
};

struct NamedColor {
    std::string name;
    Rgb color;

    bool operator==(const NamedColor&) const = default;
};

// Ordered so that marker color assignment is stable.
using Palette = std::vector<NamedColor>;

inline Palette default_palette() {
    return {
        {"peony_pink", {0xE8, 0x85, 0x9B}},
        {"celadon_green", {0x9F, 0xD3, 0xC7}},
        {"ivory_white", {0xF8, 0xF4, 0xE3}},
        {"ink_blue", {0x2B, 0x45, 0x70}},
    };
}

inline const Rgb* find_color(const Palette& palette, std::string_view name) {
    for (const auto& entry : palette) {
        if (entry.name == name) {
            return &entry.color;
        }
    }
    return nullptr;
}

} // namespace ropera
