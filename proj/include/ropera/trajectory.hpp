#pragma once

// Transition profiles, frame scheduling under T, and motion metrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ropera/decoder.hpp"
#include "ropera/error.hpp"
#include "ropera/types.hpp"

namespace ropera {

// Planning failure tied to one frame.
class FrameError : public Error {
public:
    FrameError(ErrorCode code, std::size_t frame_index, const std::string& message)
        : Error(code, "frame " + std::to_string(frame_index) + ": " + message), frame_index_(frame_index) {}

    std::size_t frame_index() const noexcept { return frame_index_; }

private:
    std::size_t frame_index_;
};

namespace profile {

// Normalized minimum-jerk position, tau in [0, 1].
inline double min_jerk(double tau) {
    double t3 = tau * tau * tau;
    return t3 * (10.0 - 15.0 * tau + 6.0 * tau * tau);
}

inline double min_jerk_velocity(double tau) {
    double t2 = tau * tau;
    return 30.0 * t2 * (1.0 - 2.0 * tau + t2);
}

// Symmetric seven-segment jerk-limited shape normalized to unit travel over
// unit time. Phase durations are jerk, constant-acceleration and cruise
// fractions with 4*jerk + 2*accel + cruise == 1; zero-length phases collapse.
class SCurve {
public:
    explicit SCurve(double jerk_fraction = 1.0 / 7.0, double accel_fraction = 1.0 / 7.0) {
        double cruise = 1.0 - 4.0 * jerk_fraction - 2.0 * accel_fraction;
        if (!(jerk_fraction > 0.0) || accel_fraction < 0.0 || cruise < -1e-12) {
            throw Error(ErrorCode::InvalidArgument, "s-curve phase fractions must fit in unit time");
        }
        cruise = std::max(cruise, 0.0);
        durations_ = {jerk_fraction, accel_fraction, jerk_fraction, cruise,
                      jerk_fraction, accel_fraction, jerk_fraction};
        State s;
        for (std::size_t i = 0; i < kSegments; ++i) {
            starts_[i] = s;
            s = advance(s, kJerk[i], durations_[i]);
        }
        travel_ = s.p;
    }

    double position(double tau) const {
        if (tau <= 0.0) return 0.0;
        if (tau >= 1.0) return 1.0;
        double t0 = 0.0;
        for (std::size_t i = 0; i < kSegments; ++i) {
            if (tau <= t0 + durations_[i] || i + 1 == kSegments) {
                return advance(starts_[i], kJerk[i], tau - t0).p / travel_;
            }
            t0 += durations_[i];
        }
        return 1.0;
    }

private:
    struct State {
        double p = 0.0, v = 0.0, a = 0.0;
    };
    static constexpr std::size_t kSegments = 7;
    static constexpr std::array<double, kSegments> kJerk = {1.0, 0.0, -1.0, 0.0, -1.0, 0.0, 1.0};

    static State advance(State s, double jerk, double dt) {
        State out;
        out.p = s.p + s.v * dt + s.a * dt * dt / 2.0 + jerk * dt * dt * dt / 6.0;
        out.v = s.v + s.a * dt + jerk * dt * dt / 2.0;
        out.a = s.a + jerk * dt;
        return out;
    }

    std::array<double, kSegments> durations_{};
    std::array<State, kSegments> starts_{};
    double travel_ = 1.0;
};

} // namespace profile

struct SampledTrajectory {
    std::vector<double> timestamps;             // seconds
    std::vector<std::vector<double>> angles;    // [sample][joint], degrees
    std::vector<std::size_t> frame_boundaries;  // sample index where each frame's schedule ends
    std::vector<double> boundary_times;         // time each frame's schedule ends
    double sample_rate = 100.0;

    std::size_t sample_count() const { return timestamps.size(); }
    std::size_t joint_count() const { return angles.empty() ? 0 : angles.front().size(); }
};

namespace detail {

inline constexpr double kTimeEps = 1e-9;
inline constexpr double kGridTolerance = 1e-7; // in samples

struct FrameMotion {
    std::vector<double> from;
    std::vector<double> to;
    double start = 0.0;    // seconds
    double motion = 0.0;   // seconds of motion before dwell
};

inline double vendor_motion_time(const std::vector<double>& from, const std::vector<double>& to, double v_max) {
    double max_delta = 0.0;
    for (std::size_t j = 0; j < from.size(); ++j) {
        max_delta = std::max(max_delta, std::abs(to[j] - from[j]));
    }
    return max_delta / v_max;
}

inline double staircase(double from, double to, double tau, double step) {
    double delta = to - from;
    double magnitude = std::abs(delta);
    if (magnitude == 0.0) {
        return from;
    }
    double steps = std::ceil(magnitude / step);
    double travelled = std::min(magnitude, step * std::floor(tau * steps));
    return from + std::copysign(travelled, delta);
}

} // namespace detail

// Expands targets into a uniformly sampled trajectory. Each frame i moves for
// t_m then dwells at its target for the rest of T_i; the motion is clamped to
// end on the last sample at or before the frame boundary so every boundary
// sample holds the exact target. Motion before frame 0 starts at `start`
// (defaults to the first target, i.e. frame 0 is a pure dwell).
inline SampledTrajectory plan(const std::vector<JointTargets>& targets, const ProfileConfig& config,
                              std::optional<std::vector<double>> start = std::nullopt) {
    validate(config);
    if (targets.empty()) {
        throw Error(ErrorCode::InvalidArgument, "nothing to plan");
    }
    const std::size_t n = targets.front().angles.size();
    for (const auto& t : targets) {
        if (t.angles.size() != n) {
            throw Error(ErrorCode::LengthMismatch, "targets disagree in joint count");
        }
        if (t.duration.micros() <= 0) {
            throw Error(ErrorCode::NonPositiveDuration, "target duration must be positive");
        }
    }
    if (start && start->size() != n) {
        throw Error(ErrorCode::LengthMismatch, "start pose joint count differs from targets");
    }

    const double rate = config.sample_rate;
    const std::size_t frames = targets.size();

    std::vector<std::int64_t> end_us(frames);
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < frames; ++i) {
        acc += targets[i].duration.micros();
        end_us[i] = acc;
    }
    const double total = static_cast<double>(acc) / 1e6;

    SampledTrajectory traj;
    traj.sample_rate = rate;
    const double grid = total * rate;
    const auto whole = static_cast<std::int64_t>(std::floor(grid + detail::kGridTolerance));
    for (std::int64_t k = 0; k <= whole; ++k) {
        traj.timestamps.push_back(static_cast<double>(k) / rate);
    }
    if (whole > 0 && std::abs(grid - static_cast<double>(whole)) <= detail::kGridTolerance) {
        traj.timestamps.back() = total;
    } else {
        traj.timestamps.push_back(total);
    }
    const std::size_t last_sample = traj.timestamps.size() - 1;

    std::vector<detail::FrameMotion> motions(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        const double frame_start = i == 0 ? 0.0 : static_cast<double>(end_us[i - 1]) / 1e6;
        const double frame_end = static_cast<double>(end_us[i]) / 1e6;
        const double duration = targets[i].duration.seconds();

        std::size_t boundary = last_sample;
        if (i + 1 < frames) {
            boundary = static_cast<std::size_t>(std::floor(frame_end * rate + detail::kGridTolerance));
        }
        const double boundary_time = traj.timestamps[boundary];
        if (boundary_time <= frame_start + detail::kTimeEps && i + 1 < frames) {
            throw FrameError(ErrorCode::DurationTooShort, i, "frame is shorter than one sample period");
        }
        traj.frame_boundaries.push_back(boundary);
        traj.boundary_times.push_back(frame_end);

        auto& m = motions[i];
        m.from = i == 0 ? start.value_or(targets[0].angles) : targets[i - 1].angles;
        m.to = targets[i].angles;
        m.start = frame_start;
        double motion = 0.0;
        if (config.kind == ProfileKind::VendorDefault) {
            motion = detail::vendor_motion_time(m.from, m.to, config.v_max);
            if (motion > duration + detail::kTimeEps) {
                throw FrameError(ErrorCode::DurationTooShort, i,
                                 "needs " + detail::format_number(motion) + " s at v_max but T is " +
                                     targets[i].duration.to_string() + " s");
            }
        } else {
            motion = config.transition_fraction * duration;
        }
        m.motion = std::max(0.0, std::min(motion, boundary_time - frame_start));
    }

    const profile::SCurve s_curve;
    traj.angles.reserve(traj.timestamps.size());
    std::size_t frame = 0;
    for (std::size_t k = 0; k <= last_sample; ++k) {
        while (frame + 1 < frames && k > traj.frame_boundaries[frame]) {
            ++frame;
        }
        const auto& m = motions[frame];
        const double u = std::max(0.0, traj.timestamps[k] - m.start);
        std::vector<double> q(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double from = m.from[j];
            const double to = m.to[j];
            if (from == to) {
                q[j] = to;
                continue;
            }
            if (m.motion <= 0.0 || u >= m.motion) {
                q[j] = to;
                continue;
            }
            const double tau = u / m.motion;
            switch (config.kind) {
            case ProfileKind::VendorDefault: q[j] = from + (to - from) * tau; break;
            case ProfileKind::MinJerk: q[j] = from + (to - from) * profile::min_jerk(tau); break;
            case ProfileKind::SCurve: q[j] = from + (to - from) * s_curve.position(tau); break;
            case ProfileKind::LinearSmoothed: q[j] = detail::staircase(from, to, tau, config.step_deg); break;
            }
        }
        traj.angles.push_back(std::move(q));
    }

    if (config.kind == ProfileKind::LinearSmoothed && traj.angles.size() > 2) {
        std::vector<bool> pinned(traj.angles.size(), false);
        pinned.front() = pinned.back() = true;
        for (auto b : traj.frame_boundaries) {
            pinned[b] = true;
        }
        const auto raw = traj.angles;
        for (std::size_t k = 1; k + 1 < raw.size(); ++k) {
            if (pinned[k]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                double a = raw[k - 1][j], b = raw[k][j], c = raw[k + 1][j];
                if (a != b || b != c) {
                    traj.angles[k][j] = (a + b + c) / 3.0;
                }
            }
        }
    }
    return traj;
}

struct MotionMetrics {
    double timing_deviation = 0.0; // seconds
    double smoothness = 0.0;       // mean squared jerk, (deg/s^3)^2
    double jitter = 0.0;           // degrees RMS
};

namespace detail {

// Number of leading samples on the uniform grid (a shorter final interval is
// excluded from finite differences).
inline std::size_t uniform_prefix(const SampledTrajectory& traj) {
    std::size_t n = traj.timestamps.size();
    if (n >= 2) {
        double dt = traj.timestamps[n - 1] - traj.timestamps[n - 2];
        if (std::abs(dt - 1.0 / traj.sample_rate) > 1e-9) {
            --n;
        }
    }
    return n;
}

} // namespace detail

inline MotionMetrics metrics(const SampledTrajectory& traj, const std::vector<JointTargets>& scheduled) {
    if (traj.angles.size() != traj.timestamps.size()) {
        throw Error(ErrorCode::LengthMismatch, "trajectory angle and timestamp counts differ");
    }
    if (traj.boundary_times.size() != scheduled.size()) {
        throw Error(ErrorCode::LengthMismatch, "trajectory and schedule disagree in frame count");
    }
    const std::size_t joints = traj.joint_count();
    for (const auto& t : scheduled) {
        if (t.angles.size() != joints) {
            throw Error(ErrorCode::LengthMismatch, "trajectory and schedule disagree in joint count");
        }
    }
    for (const auto& q : traj.angles) {
        if (q.size() != joints) {
            throw Error(ErrorCode::LengthMismatch, "ragged trajectory");
        }
    }

    MotionMetrics m;
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < scheduled.size(); ++i) {
        acc += scheduled[i].duration.micros();
        double expected = static_cast<double>(acc) / 1e6;
        m.timing_deviation = std::max(m.timing_deviation, std::abs(traj.boundary_times[i] - expected));
    }

    const std::size_t n = detail::uniform_prefix(traj);
    if (n < 5 || joints == 0) {
        return m;
    }
    const double dt = 1.0 / traj.sample_rate;
    const double dt3 = dt * dt * dt;
    double jerk_sum = 0.0;
    double residual_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 2; k + 2 < n; ++k) {
        const auto& qm2 = traj.angles[k - 2];
        const auto& qm1 = traj.angles[k - 1];
        const auto& q0 = traj.angles[k];
        const auto& qp1 = traj.angles[k + 1];
        const auto& qp2 = traj.angles[k + 2];
        for (std::size_t j = 0; j < joints; ++j) {
            double jerk = (qp2[j] - 2.0 * qp1[j] + 2.0 * qm1[j] - qm2[j]) / (2.0 * dt3);
            jerk_sum += jerk * jerk;
            double residual = -((qm2[j] - q0[j]) + (qm1[j] - q0[j]) + (qp1[j] - q0[j]) + (qp2[j] - q0[j])) / 5.0;
            residual_sum += residual * residual;
            ++count;
        }
    }
    m.smoothness = jerk_sum / static_cast<double>(count);
    m.jitter = std::sqrt(residual_sum / static_cast<double>(count));
    return m;
}

} // namespace ropera
