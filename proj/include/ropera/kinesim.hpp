#pragma once

// Forward kinematics of a serial arm over sampled joint trajectories.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Geometry>

#include "ropera/detail/text.hpp"
#include "ropera/error.hpp"
#include "ropera/trajectory.hpp"

namespace ropera {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Standard Denavit-Hartenberg row: Rz(theta + offset) Tz(d) Tx(a) Rx(alpha).
struct DhJoint {
    double a = 0.0;             // mm
    double alpha = 0.0;         // rad
    double d = 0.0;             // mm
    double theta_offset = 0.0;  // rad
};

// A point rigidly attached to frame `frame` (0 = base, k = after joint k).
struct Marker {
    std::string name;
    std::size_t frame = 0;
    Eigen::Vector3d offset = Eigen::Vector3d::Zero(); // mm, in that frame
};

struct KinematicChain {
    std::vector<DhJoint> joints;
    std::vector<Marker> markers;

    std::size_t joint_count() const { return joints.size(); }
};

inline void validate(const KinematicChain& chain) {
    if (chain.joints.empty()) {
        throw Error(ErrorCode::InvalidArgument, "chain has no joints");
    }
    for (const auto& j : chain.joints) {
        if (!std::isfinite(j.a) || !std::isfinite(j.alpha) || !std::isfinite(j.d) || !std::isfinite(j.theta_offset)) {
            throw Error(ErrorCode::InvalidArgument, "non-finite DH parameter");
        }
    }
    for (const auto& m : chain.markers) {
        if (m.frame > chain.joints.size()) {
            throw Error(ErrorCode::IndexOutOfRange, "marker '" + m.name + "' references a missing frame");
        }
        if (!m.offset.allFinite()) {
            throw Error(ErrorCode::InvalidArgument, "non-finite marker offset");
        }
    }
}

// Six-joint desktop-cobot geometry (about 280 mm reach). Illustrative values,
// not measured from any particular unit. Markers sit on joints 4-6 and the
// tool flange.
inline KinematicChain default_chain() {
    KinematicChain chain;
    chain.joints = {
        {0.0, deg_to_rad(90.0), 131.22, 0.0},
        {-110.4, 0.0, 0.0, deg_to_rad(-90.0)},
        {-96.0, 0.0, 0.0, 0.0},
        {0.0, deg_to_rad(90.0), 63.4, deg_to_rad(-90.0)},
        {0.0, deg_to_rad(-90.0), 75.05, deg_to_rad(90.0)},
        {0.0, 0.0, 45.6, 0.0},
    };
    chain.markers = {
        {"joint4", 3, Eigen::Vector3d::Zero()},
        {"joint5", 4, Eigen::Vector3d::Zero()},
        {"joint6", 5, Eigen::Vector3d::Zero()},
        {"end_effector", 6, Eigen::Vector3d::Zero()},
    };
    return chain;
}

inline Eigen::Isometry3d dh_transform(const DhJoint& j, double theta) {
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    t.rotate(Eigen::AngleAxisd(theta + j.theta_offset, Eigen::Vector3d::UnitZ()));
    t.translate(Eigen::Vector3d(j.a, 0.0, j.d));
    t.rotate(Eigen::AngleAxisd(j.alpha, Eigen::Vector3d::UnitX()));
    return t;
}

// Cumulative frame poses: element k is the base-to-frame-k transform.
inline std::vector<Eigen::Isometry3d> frame_poses(const KinematicChain& chain, const std::vector<double>& angles_deg) {
    if (angles_deg.size() != chain.joints.size()) {
        throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(chain.joints.size()) + " joint angles");
    }
    std::vector<Eigen::Isometry3d> poses;
    poses.reserve(chain.joints.size() + 1);
    poses.push_back(Eigen::Isometry3d::Identity());
    for (std::size_t k = 0; k < chain.joints.size(); ++k) {
        poses.push_back(poses.back() * dh_transform(chain.joints[k], deg_to_rad(angles_deg[k])));
    }
    return poses;
}

// Marker positions (mm, base frame) in chain.markers order.
inline std::vector<Eigen::Vector3d> fk(const KinematicChain& chain, const std::vector<double>& angles_deg) {
    auto poses = frame_poses(chain, angles_deg);
    std::vector<Eigen::Vector3d> out;
    out.reserve(chain.markers.size());
    for (const auto& m : chain.markers) {
        if (m.frame >= poses.size()) {
            throw Error(ErrorCode::IndexOutOfRange, "marker '" + m.name + "' references a missing frame");
        }
        out.push_back(poses[m.frame] * m.offset);
    }
    return out;
}

struct CartesianTrace {
    std::vector<double> timestamps;
    std::vector<std::string> marker_names;
    std::vector<std::vector<Eigen::Vector3d>> positions; // [sample][marker], mm

    std::size_t sample_count() const { return timestamps.size(); }
};

inline CartesianTrace trace(const KinematicChain& chain, const SampledTrajectory& traj) {
    validate(chain);
    if (traj.joint_count() != chain.joint_count()) {
        throw Error(ErrorCode::LengthMismatch, "trajectory has " + std::to_string(traj.joint_count()) +
                                                   " joints, chain has " + std::to_string(chain.joint_count()));
    }
    CartesianTrace out;
    out.timestamps = traj.timestamps;
    for (const auto& m : chain.markers) {
        out.marker_names.push_back(m.name);
    }
    out.positions.reserve(traj.angles.size());
    for (const auto& q : traj.angles) {
        out.positions.push_back(fk(chain, q));
    }
    return out;
}

// Chain description file, one directive per line ('#' comments):
//   joint a=<mm> alpha=<deg> d=<mm> [offset=<deg>]
//   marker name=<id> frame=<0..N> [x=<mm>] [y=<mm>] [z=<mm>]
// Joints are listed base to tip. With no marker lines the chain gets a single
// marker on the last frame.
inline KinematicChain parse_chain(std::string_view text) {
    using namespace detail;
    KinematicChain chain;
    auto lines = tokenize(text);
    for (const auto& line : lines) {
        const std::string& word = line.tokens[0].text;
        auto fail = [&](const Token& t, const std::string& msg) {
            throw ParseError(ErrorCode::Syntax, line.number, t.column, msg);
        };
        if (word != "joint" && word != "marker") {
            fail(line.tokens[0], "expected 'joint' or 'marker'");
        }
        bool is_joint = word == "joint";
        if (is_joint && !chain.markers.empty()) {
            fail(line.tokens[0], "joints must precede markers");
        }
        DhJoint joint;
        Marker marker;
        std::vector<std::string> seen;
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
            const Token& t = line.tokens[i];
            auto kv = split_key_value(t.text);
            if (!kv) {
                fail(t, "expected key=value");
            }
            std::string key(kv->first);
            for (const auto& s : seen) {
                if (s == key) fail(t, "repeated key '" + key + "'");
            }
            seen.push_back(key);
            if (!is_joint && key == "name") {
                if (!is_identifier(kv->second)) fail(t, "marker name must be an identifier");
                marker.name = std::string(kv->second);
                continue;
            }
            if (!is_joint && key == "frame") {
                auto v = parse_integer(kv->second);
                if (!v || *v < 0 || *v > static_cast<std::int64_t>(chain.joints.size())) {
                    fail(t, "frame must be in 0.." + std::to_string(chain.joints.size()));
                }
                marker.frame = static_cast<std::size_t>(*v);
                continue;
            }
            auto v = parse_number(kv->second);
            if (!v) fail(t, "expected a number");
            if (is_joint && key == "a") joint.a = *v;
            else if (is_joint && key == "alpha") joint.alpha = deg_to_rad(*v);
            else if (is_joint && key == "d") joint.d = *v;
            else if (is_joint && key == "offset") joint.theta_offset = deg_to_rad(*v);
            else if (!is_joint && key == "x") marker.offset.x() = *v;
            else if (!is_joint && key == "y") marker.offset.y() = *v;
            else if (!is_joint && key == "z") marker.offset.z() = *v;
            else fail(t, "unknown key '" + key + "'");
        }
        auto has = [&](std::string_view key) {
            for (const auto& s : seen) {
                if (s == key) return true;
            }
            return false;
        };
        if (is_joint) {
            if (!has("a") || !has("alpha") || !has("d")) fail(line.tokens[0], "joint needs a=, alpha= and d=");
            chain.joints.push_back(joint);
        } else {
            if (!has("name") || !has("frame")) fail(line.tokens[0], "marker needs name= and frame=");
            chain.markers.push_back(std::move(marker));
        }
    }
    if (chain.joints.empty()) {
        throw ParseError(ErrorCode::Syntax, lines.empty() ? 1 : lines.back().number, 1, "chain has no joints");
    }
    if (chain.markers.empty()) {
        chain.markers.push_back({"end_effector", chain.joints.size(), Eigen::Vector3d::Zero()});
    }
    return chain;
}

} // namespace ropera
