#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ropera/notation.hpp"

namespace ropera::test {

class ScoreGen {
public:
    explicit ScoreGen(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    std::mt19937_64& rng() { return rng_; }

    std::vector<char> symbols(const Codebook& cb, std::size_t n) {
        std::vector<char> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(cb.symbol(static_cast<std::size_t>(uniform(0, static_cast<int>(cb.size()) - 1))));
        return out;
    }

    std::string identifier() {
        static const std::string first = "abcdefghijklmnopqrstuvwxyz_ABCXYZ";
        static const std::string rest = "abcdefghijklmnopqrstuvwxyz_0123456789";
        std::string s(1, first[static_cast<std::size_t>(uniform(0, static_cast<int>(first.size()) - 1))]);
        int len = uniform(0, 10);
        for (int i = 0; i < len; ++i) s.push_back(rest[static_cast<std::size_t>(uniform(0, static_cast<int>(rest.size()) - 1))]);
        return s;
    }

    std::string label() {
        static const std::string chars = "abc XYZ 019 =#\"\\-_.,:;!?()[]{}<>&'\t\n";
        std::string s;
        int len = uniform(0, 16);
        for (int i = 0; i < len; ++i) s.push_back(chars[static_cast<std::size_t>(uniform(0, static_cast<int>(chars.size()) - 1))]);
        return s;
    }

    // Fully random but valid score. Durations stay at or above min_duration_us.
    Score score(std::size_t max_servos = 8, int max_frames = 12, std::int64_t min_duration_us = 1) {
        Score s;
        s.servo_count = static_cast<std::size_t>(uniform(1, static_cast<int>(max_servos)));
        if (coin(0.3)) {
            std::vector<double> angles;
            int n = uniform(1, 12);
            for (int i = 0; i < n; ++i) angles.push_back(coin() ? 45.0 * uniform(-4, 4) : real(-200.0, 200.0));
            s.codebook = Codebook(angles, coin() ? 175.0 : real(10.0, 200.0));
        }
        if (coin(0.4)) {
            s.profile.kind = static_cast<ProfileKind>(uniform(0, 3));
            s.profile.v_max = real(10.0, 400.0);
            s.profile.transition_fraction = coin() ? 1.0 : real(0.05, 1.0);
            s.profile.step_deg = real(0.5, 10.0);
        }
        if (coin(0.3)) s.profile.sample_rate = coin() ? 1000.0 : real(5.0, 500.0);
        if (coin(0.3) && s.servo_count >= 2) {
            CouplingModel c;
            c.kappa = real(-1.0, 1.0);
            c.driver_index = static_cast<std::size_t>(uniform(0, static_cast<int>(s.servo_count) - 1));
            do {
                c.driven_index = static_cast<std::size_t>(uniform(0, static_cast<int>(s.servo_count) - 1));
            } while (c.driven_index == c.driver_index);
            s.coupling = c;
        }
        if (coin(0.3)) {
            std::vector<double> home;
            for (std::size_t j = 0; j < s.servo_count; ++j) home.push_back(real(-s.codebook.clip_limit(), s.codebook.clip_limit()));
            s.home = home;
        }
        if (coin(0.3)) {
            int n = uniform(1, 4);
            for (int i = 0; i < n; ++i) {
                std::string name = identifier() + "_" + std::to_string(i);
                s.palette.push_back({name, {static_cast<std::uint8_t>(uniform(0, 255)), static_cast<std::uint8_t>(uniform(0, 255)),
                                            static_cast<std::uint8_t>(uniform(0, 255))}});
            }
        }
        int poses = uniform(0, 3);
        for (int i = 0; i < poses; ++i) {
            s.poses.push_back({identifier() + "_p" + std::to_string(i), symbols(s.codebook, s.servo_count)});
        }
        int frames = uniform(1, max_frames);
        for (int i = 0; i < frames; ++i) {
            Frame f;
            f.symbols = symbols(s.codebook, s.servo_count);
            for (std::size_t j = 0; j < s.servo_count; ++j) f.flags.push_back(coin(0.7) ? MotionFlag::Dynamic : MotionFlag::Hold);
            f.duration = Duration::from_micros(std::uniform_int_distribution<std::int64_t>(min_duration_us, 5'000'000)(rng_));
            if (coin(0.4)) f.label = label();
            s.frames.push_back(std::move(f));
        }
        return s;
    }

private:
    std::mt19937_64 rng_;
};

} // namespace ropera::test
