#include <gtest/gtest.h>

#include <random>
#include <string>

#include "ropera/notation.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ropera;

namespace {

ErrorCode parse_error_code(const std::string& text, std::size_t* line = nullptr) {
    try {
        parse_score(text);
    } catch (const ParseError& e) {
        if (line) *line = e.line();
        return e.code();
    }
    ADD_FAILURE() << "expected a parse error for:\n" << text;
    return ErrorCode::Io;
}

} // namespace

TEST(Codebook, DefaultTableMatchesNormalizationOracle) {
    const Codebook cb = default_codebook();
    ASSERT_EQ(cb.size(), 9u);
    for (int k = 0; k < 9; ++k) {
        char s = static_cast<char>('A' + k);
        EXPECT_DOUBLE_EQ(cb.raw(s), test::normalize_by_turns(45.0 * k)) << s;
        EXPECT_DOUBLE_EQ(cb.lookup(s), test::codebook_oracle(k)) << s;
    }
}

TEST(Codebook, FrozenValues) {
    const Codebook cb;
    EXPECT_EQ(cb.lookup('A'), 0.0);
    EXPECT_EQ(cb.raw('E'), 180.0);
    EXPECT_EQ(cb.lookup('E'), 175.0);
    EXPECT_EQ(cb.lookup('H'), -45.0);
    EXPECT_EQ(cb.lookup('I'), 0.0);
    EXPECT_EQ(cb.lookup('F'), -135.0);
}

TEST(Codebook, UnknownSymbolThrows) {
    const Codebook cb;
    EXPECT_FALSE(cb.contains('J'));
    EXPECT_FALSE(cb.contains('a'));
    EXPECT_THROW(cb.lookup('J'), Error);
}

TEST(Codebook, LookupNeverExceedsClip) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-1000.0, 1000.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> angles;
        for (int i = 0; i < 26; ++i) angles.push_back(angle(rng));
        Codebook cb(angles, 175.0);
        for (std::size_t i = 0; i < cb.size(); ++i) EXPECT_LE(std::abs(cb.lookup(cb.symbol(i))), 175.0);
    }
}

TEST(Normalize, HalfOpenInterval) {
    EXPECT_EQ(normalize_degrees(180.0), 180.0);
    EXPECT_EQ(normalize_degrees(-180.0), 180.0);
    EXPECT_EQ(normalize_degrees(315.0), -45.0);
    EXPECT_EQ(normalize_degrees(360.0), 0.0);
    for (double a = -1000.0; a < 1000.0; a += 7.5) EXPECT_DOUBLE_EQ(normalize_degrees(a), test::normalize_by_turns(a)) << a;
}

TEST(MotionFlag, TextForms) {
    EXPECT_EQ(parse_motion_flag("D"), MotionFlag::Dynamic);
    EXPECT_EQ(parse_motion_flag("Default"), MotionFlag::Dynamic);
    EXPECT_EQ(parse_motion_flag("H"), MotionFlag::Hold);
    EXPECT_EQ(parse_motion_flag("Hold"), MotionFlag::Hold);
    EXPECT_FALSE(parse_motion_flag("X"));
    for (auto f : {MotionFlag::Dynamic, MotionFlag::Hold}) EXPECT_EQ(parse_motion_flag(std::string(1, to_char(f))), f);
}

TEST(Duration, ParsesAndFormatsCanonically) {
    EXPECT_EQ(Duration::parse("2.0")->micros(), 2'000'000);
    EXPECT_EQ(Duration::parse("2.0")->to_string(), "2");
    EXPECT_EQ(Duration::parse("1.50")->to_string(), "1.5");
    EXPECT_EQ(Duration::parse("0.000001")->micros(), 1);
    EXPECT_EQ(Duration::parse("-1")->micros(), -1'000'000);
    EXPECT_FALSE(Duration::parse("1.0000001"));
    EXPECT_FALSE(Duration::parse("1."));
    EXPECT_FALSE(Duration::parse(".5"));
    EXPECT_FALSE(Duration::parse("1e3"));
    EXPECT_FALSE(Duration::parse(""));
}

TEST(ParseScore, SingleFrame) {
    Score s = parse_score("ropera 1\nservos 6\nframe S=ABHHAD M=DDDDDD T=2.0");
    ASSERT_EQ(s.frames.size(), 1u);
    const Frame& f = s.frames[0];
    EXPECT_EQ(std::string(f.symbols.begin(), f.symbols.end()), "ABHHAD");
    for (auto flag : f.flags) EXPECT_EQ(flag, MotionFlag::Dynamic);
    EXPECT_EQ(f.duration.micros(), 2'000'000);
    EXPECT_FALSE(f.label);
    EXPECT_EQ(s.servo_count, 6u);
}

TEST(ParseScore, MinimalDocument) {
    Score s = parse_score("ropera 1\nservos 1\nframe S=A M=D T=1.0");
    EXPECT_EQ(s.servo_count, 1u);
    EXPECT_EQ(s.frames.size(), 1u);
    EXPECT_EQ(s.total_duration().micros(), 1'000'000);
}

TEST(ParseScore, LengthMismatchReportsLine) {
    std::size_t line = 0;
    EXPECT_EQ(parse_error_code("ropera 1\nservos 6\nframe S=ABZ M=DDD T=1.0", &line), ErrorCode::LengthMismatch);
    EXPECT_EQ(line, 3u);
}

TEST(ParseScore, ErrorKinds) {
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\nframe S=AZ M=DD T=1"), ErrorCode::UnknownSymbol);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\nframe S=AB M=DD T=0"), ErrorCode::NonPositiveDuration);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\nframe S=AB M=DD T=-1.5"), ErrorCode::NonPositiveDuration);
    EXPECT_EQ(parse_error_code("ropera 2\nservos 2\nframe S=AB M=DD T=1"), ErrorCode::BadHeader);
    EXPECT_EQ(parse_error_code("servos 2\nframe S=AB M=DD T=1"), ErrorCode::BadHeader);
    EXPECT_EQ(parse_error_code("ropera 1\nframe S=AB M=DD T=1"), ErrorCode::BadHeader);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 0\nframe S= M= T=1"), ErrorCode::BadHeader);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\npose a=AB\npose a=BA\nframe S=AB M=DD T=1"),
              ErrorCode::DuplicatePoseName);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2"), ErrorCode::EmptyScore);
    EXPECT_EQ(parse_error_code(""), ErrorCode::BadHeader);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\nframe S=AB M=DX T=1"), ErrorCode::Syntax);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\nframe S=AB T=1"), ErrorCode::Syntax);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\nframe S=AB M=DD T=1\nservos 3"), ErrorCode::BadHeader);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\nframe S=AB M=DD T=1 label=\"open"), ErrorCode::Syntax);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\ncodebook A=0 C=90\nframe S=AA M=DD T=1"), ErrorCode::BadHeader);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\nframe S=@nope M=DD T=1"), ErrorCode::UnknownSymbol);
    EXPECT_EQ(parse_error_code("ropera 1\nservos 2\ncoupling kappa=0.5 driver=1 driven=1\nframe S=AB M=DD T=1"),
              ErrorCode::BadHeader);
}

TEST(ParseScore, ErrorColumnPointsAtToken) {
    try {
        parse_score("ropera 1\nservos 2\nframe S=AB M=DD   T=0");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 19u);
    }
}

TEST(ParseScore, HeaderDirectives) {
    const char* text = R"(# demo
ropera 1
servos 3
codebook A=0 B=30 C=-30 clip=90
profile min_jerk vmax=120 rho=0.5 step=1.5
rate 250
coupling kappa=0.25 driver=2 driven=3
home 0 10 -10
palette peony_pink=#E8859B ink=#2b4570
pose open=ABC   # trailing comment
frame S=@open M=DHD T=0.25 label="first \"quoted\" # not a comment"
frame S=CBA M=HHH T=1
)";
    Score s = parse_score(text);
    EXPECT_EQ(s.codebook.size(), 3u);
    EXPECT_EQ(s.codebook.clip_limit(), 90.0);
    EXPECT_EQ(s.codebook.lookup('C'), -30.0);
    EXPECT_EQ(s.profile.kind, ProfileKind::MinJerk);
    EXPECT_EQ(s.profile.v_max, 120.0);
    EXPECT_EQ(s.profile.transition_fraction, 0.5);
    EXPECT_EQ(s.profile.step_deg, 1.5);
    EXPECT_EQ(s.profile.sample_rate, 250.0);
    ASSERT_TRUE(s.coupling);
    EXPECT_EQ(s.coupling->driver_index, 1u);
    EXPECT_EQ(s.coupling->driven_index, 2u);
    ASSERT_TRUE(s.home);
    EXPECT_EQ((*s.home)[2], -10.0);
    ASSERT_EQ(s.palette.size(), 2u);
    EXPECT_EQ(s.palette[1].color.hex(), "#2B4570");
    ASSERT_EQ(s.frames.size(), 2u);
    EXPECT_EQ(std::string(s.frames[0].symbols.begin(), s.frames[0].symbols.end()), "ABC");
    EXPECT_EQ(*s.frames[0].label, "first \"quoted\" # not a comment");
    EXPECT_EQ(s.total_duration().micros(), 1'250'000);
}

TEST(ParseScore, CrLfAndBlankLines) {
    Score s = parse_score("\r\n  ropera 1\r\n\r\nservos 1\r\n\tframe S=A M=H T=3\r\n");
    EXPECT_EQ(s.frames[0].flags[0], MotionFlag::Hold);
}

TEST(SerializeScore, CanonicalSingleFrameLine) {
    Score s = parse_score("ropera 1\nservos 6\nframe S=ABHHAD M=DDDDDD T=2.0");
    EXPECT_EQ(serialize_score(s), "ropera 1\nservos 6\nframe S=ABHHAD M=DDDDDD T=2\n");
}

TEST(SerializeScore, PosesPrecedeFrames) {
    Score s = parse_score("ropera 1\nservos 2\npose lift=BA\nframe S=@lift M=DD T=1.5");
    std::string text = serialize_score(s);
    EXPECT_EQ(text, "ropera 1\nservos 2\npose lift=BA\nframe S=BA M=DD T=1.5\n");
    EXPECT_LT(text.find("pose lift="), text.find("frame "));
}

TEST(SerializeScore, RefusesEmptyScore) {
    Score s = parse_score("ropera 1\nservos 1\nframe S=A M=D T=1");
    s.frames.clear();
    try {
        serialize_score(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyScore);
    }
}

TEST(SerializeScore, Deterministic) {
    test::ScoreGen gen(3);
    for (int i = 0; i < 50; ++i) {
        Score s = gen.score();
        EXPECT_EQ(serialize_score(s), serialize_score(s));
    }
}

TEST(Property, RoundTripOnGeneratedScores) {
    test::ScoreGen gen(20240601);
    for (int i = 0; i < 500; ++i) {
        Score s = gen.score();
        std::string text = serialize_score(s);
        Score back = parse_score(text);
        ASSERT_EQ(back, s) << text;
        ASSERT_EQ(serialize_score(back), text);
        ASSERT_EQ(back.total_duration(), s.total_duration());
    }
}

TEST(Property, ParserIsTotalOnRandomBytes) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> len(0, 200);
    for (int i = 0; i < 5000; ++i) {
        std::string text;
        int n = len(rng);
        for (int k = 0; k < n; ++k) text.push_back(static_cast<char>(byte(rng)));
        try {
            parse_score(text);
        } catch (const ParseError& e) {
            EXPECT_GE(e.line(), 1u);
            EXPECT_GE(e.column(), 1u);
        }
    }
}

TEST(Property, ParserIsTotalOnMutatedScores) {
    test::ScoreGen gen(5);
    std::mt19937_64 rng(6);
    const std::string alphabet = "ropera servos frame S=M=T=ABCDHI0123456789.-#\"\\\n =@label";
    for (int i = 0; i < 2000; ++i) {
        std::string text = serialize_score(gen.score(4, 3));
        int edits = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int e = 0; e < edits && !text.empty(); ++e) {
            std::size_t at = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
            char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
            case 0: text[at] = c; break;
            case 1: text.insert(at, 1, c); break;
            default: text.erase(at, 1); break;
            }
        }
        try {
            Score s = parse_score(text);
            EXPECT_NO_THROW(validate(s));
        } catch (const ParseError&) {
        }
    }
}
