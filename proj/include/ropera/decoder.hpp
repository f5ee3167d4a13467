#pragma once

// Frame decoding: symbol lookup, hold resolution, clipping and coupling
// compensation.

#include <cstddef>
#include <optional>
#include <vector>

#include "ropera/error.hpp"
#include "ropera/notation.hpp"
#include "ropera/types.hpp"

namespace ropera {

struct JointTargets {
    std::vector<double> angles; // commanded, degrees
    std::size_t frame_index = 0;
    Duration duration;

    bool operator==(const JointTargets&) const = default;
};

// Angles the arm actually assumes once the mechanical coupling acts on the
// commanded values.
inline std::vector<double> effective_angles(const std::vector<double>& commanded, const CouplingModel& coupling) {
    std::vector<double> out = commanded;
    if (coupling.kappa != 0.0) {
        out[coupling.driven_index] += coupling.kappa * commanded[coupling.driver_index];
    }
    return out;
}

// Hold joints keep prev (or home); Dynamic joints take the clipped codebook
// angle. A Dynamic driven joint is then commanded as
// desired - kappa * commanded[driver] and clipped again.
inline JointTargets decode_frame(const Frame& frame, const JointTargets* prev, const Codebook& codebook,
                                 const CouplingModel& coupling, const std::vector<double>& home,
                                 std::size_t frame_index = 0) {
    const std::size_t n = frame.symbols.size();
    if (frame.flags.size() != n || home.size() != n || (prev && prev->angles.size() != n)) {
        throw Error(ErrorCode::LengthMismatch, "frame, flags, home and previous targets must agree in length");
    }
    validate(coupling, n);

    JointTargets out;
    out.frame_index = frame_index;
    out.duration = frame.duration;
    out.angles.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (frame.flags[j] == MotionFlag::Hold) {
            out.angles[j] = prev ? prev->angles[j] : codebook.clip(home[j]);
        } else {
            out.angles[j] = codebook.lookup(frame.symbols[j]);
        }
    }
    if (coupling.kappa != 0.0 && frame.flags[coupling.driven_index] == MotionFlag::Dynamic) {
        double desired = out.angles[coupling.driven_index];
        out.angles[coupling.driven_index] = codebook.clip(desired - coupling.kappa * out.angles[coupling.driver_index]);
    }
    return out;
}

inline std::vector<JointTargets> decode_score(const Score& score, const CouplingModel& coupling,
                                              const std::vector<double>& home) {
    validate(score);
    std::vector<JointTargets> out;
    out.reserve(score.frames.size());
    for (std::size_t i = 0; i < score.frames.size(); ++i) {
        const JointTargets* prev = out.empty() ? nullptr : &out.back();
        out.push_back(decode_frame(score.frames[i], prev, score.codebook, coupling, home, i));
    }
    return out;
}

// Uses the score's own coupling and home directives.
inline std::vector<JointTargets> decode_score(const Score& score) {
    return decode_score(score, score.coupling_or_default(), score.home_or_zero());
}

} // namespace ropera
