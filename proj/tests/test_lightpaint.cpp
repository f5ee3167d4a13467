#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ropera/lightpaint.hpp"
#include "ropera/vocabulary.hpp"

using namespace ropera;

namespace {

CartesianTrace demo_trace() {
    Score s = parse_score(read_asset_text(find_asset("peony_pavilion.ropera")));
    return trace(default_chain(), plan(decode_score(s), s.profile, s.home_or_zero()));
}

std::string render_demo() {
    Score s = parse_score(read_asset_text(find_asset("peony_pavilion.ropera")));
    RenderConfig config;
    config.title = "peony_pavilion";
    return render(demo_trace(), s.palette, config);
}

std::vector<std::string> polylines(const std::string& svg) {
    std::vector<std::string> out;
    const std::string key = "points=\"";
    for (auto pos = svg.find("<polyline "); pos != std::string::npos; pos = svg.find("<polyline ", pos + 1)) {
        auto begin = svg.find(key, pos) + key.size();
        out.push_back(svg.substr(begin, svg.find('"', begin) - begin));
    }
    return out;
}

std::vector<std::pair<double, double>> parse_points(const std::string& points) {
    std::vector<std::pair<double, double>> out;
    std::istringstream in(points);
    std::string pair;
    while (in >> pair) {
        auto comma = pair.find(',');
        out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    return out;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

CartesianTrace synthetic(const std::vector<std::vector<Eigen::Vector3d>>& samples) {
    CartesianTrace t;
    for (std::size_t k = 0; k < samples.size(); ++k) t.timestamps.push_back(0.01 * static_cast<double>(k));
    for (std::size_t m = 0; m < samples.front().size(); ++m) t.marker_names.push_back("m" + std::to_string(m));
    t.positions = samples;
    return t;
}

} // namespace

TEST(Render, FixedFormatting) {
    EXPECT_EQ(detail::fixed(0.0, 2), "0.00");
    EXPECT_EQ(detail::fixed(-0.001, 2), "0.00");
    EXPECT_EQ(detail::fixed(12.345, 2), "12.35");
    EXPECT_EQ(detail::fixed(-3.5, 2), "-3.50");
    EXPECT_EQ(detail::fixed(0.12, 4), "0.1200");
    EXPECT_EQ(detail::fixed(799.999, 2), "800.00");
}

TEST(Render, EmptyTrace) {
    CartesianTrace t;
    try {
        render(t, {}, RenderConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyTrace);
    }
}

TEST(Render, StationaryMarkerIsOneDwellPoint) {
    std::vector<std::vector<Eigen::Vector3d>> samples(50, {Eigen::Vector3d(1, 2, 3)});
    RenderConfig config;
    std::string svg = render(synthetic(samples), {}, config);
    EXPECT_EQ(count(svg, "h0\""), 1u);
    auto lines = polylines(svg);
    ASSERT_EQ(lines.size(), config.passes.size());
    for (const auto& [x, y] : parse_points(lines[0])) {
        EXPECT_EQ(x, 400.0);
        EXPECT_EQ(y, 300.0);
    }
    // 1 - 0.98^50
    EXPECT_NE(svg.find("stroke-opacity=\"0.6358\""), std::string::npos);
}

TEST(Render, ArcVerticesFollowTheProjection) {
    std::vector<std::vector<Eigen::Vector3d>> samples;
    for (int k = 0; k <= 90; ++k) {
        double a = k * 3.14159265358979323846 / 180.0;
        samples.push_back({Eigen::Vector3d(100 * std::cos(a), 7.0, 100 * std::sin(a))});
    }
    RenderConfig config;
    std::string svg = render(synthetic(samples), {}, config);
    auto pts = parse_points(polylines(svg).at(0));
    ASSERT_EQ(pts.size(), samples.size());
    // Quarter circle fit into 752x552: scale 5.52, centre (50, 50) mm.
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double ex = 400.0 + (samples[k][0].x() - 50.0) * 5.52;
        double ey = 300.0 - (samples[k][0].z() - 50.0) * 5.52;
        EXPECT_NEAR(pts[k].first, ex, 0.005 + 1e-9);
        EXPECT_NEAR(pts[k].second, ey, 0.005 + 1e-9);
    }
}

TEST(Render, PlaneSelection) {
    std::vector<std::vector<Eigen::Vector3d>> samples = {{Eigen::Vector3d(0, 0, 0)}, {Eigen::Vector3d(0, 10, 0)}};
    RenderConfig config;
    config.plane = Plane::XZ;
    auto xz = project_trace(synthetic(samples), config);
    EXPECT_EQ(xz[0][0], xz[0][1]); // y is out of the XZ plane
    config.plane = Plane::YZ;
    auto yz = project_trace(synthetic(samples), config);
    EXPECT_NE(yz[0][0], yz[0][1]);
}

TEST(Render, DemoVerticesStayOnCanvas) {
    auto tr = demo_trace();
    RenderConfig config;
    std::string svg = render(tr, {}, config);
    auto lines = polylines(svg);
    ASSERT_EQ(lines.size(), tr.marker_names.size() * config.passes.size());
    for (const auto& line : lines) {
        auto pts = parse_points(line);
        EXPECT_EQ(pts.size(), tr.sample_count());
        for (const auto& [x, y] : pts) {
            EXPECT_GE(x, config.margin - 0.01);
            EXPECT_LE(x, config.width - config.margin + 0.01);
            EXPECT_GE(y, config.margin - 0.01);
            EXPECT_LE(y, config.height - config.margin + 0.01);
        }
    }
    EXPECT_NE(svg.find("samples: 2301"), std::string::npos);
}

TEST(Render, MarkerColorsAndEscaping) {
    std::vector<std::vector<Eigen::Vector3d>> samples = {{Eigen::Vector3d(0, 0, 0)}, {Eigen::Vector3d(1, 0, 1)}};
    auto t = synthetic(samples);
    t.marker_names = {"a<b"};
    RenderConfig config;
    config.marker_colors = {"ink_blue"};
    config.title = "x--y";
    std::string svg = render(t, default_palette(), config);
    EXPECT_NE(svg.find("id=\"marker-a&lt;b\""), std::string::npos);
    EXPECT_NE(svg.find("stroke=\"#2B4570\""), std::string::npos);
    EXPECT_EQ(svg.find("x--y"), std::string::npos);
    config.marker_colors = {"no_such_color"};
    EXPECT_THROW(render(t, default_palette(), config), Error);
}

TEST(Render, DeterministicAndMatchesGolden) {
    std::string a = render_demo();
    std::string b = render_demo();
    EXPECT_EQ(a, b);
    std::ifstream in(std::string(ROPERA_TEST_DIR) + "/golden/demo.svg", std::ios::binary);
    ASSERT_TRUE(in) << "missing golden file";
    std::ostringstream golden;
    golden << in.rdbuf();
    EXPECT_EQ(a, golden.str());
}
