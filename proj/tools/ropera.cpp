// ropera: validate, compile, simulate, render, play and remap scores.
//
// Exit status: 0 success, 1 invalid input (parse, validation, planning,
// bridge refusal), 2 I/O (missing file, unwritable output, network).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ropera/ropera.hpp"

namespace fs = std::filesystem;
using namespace ropera;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bare name that does not exist relative to the working directory is looked
// up among the assets (ROPERA_HOME first), so `ropera validate peony_pavilion.ropera`
// works from anywhere.
fs::path resolve_input(const std::string& path) {
    fs::path p(path);
    if (fs::exists(p)) return p;
    if (!p.has_parent_path()) {
        try {
            return find_asset(path);
        } catch (const Error&) {
        }
    }
    throw IoError("cannot open '" + path + "'");
}

std::string read_file(const std::string& path) {
    fs::path p = resolve_input(path);
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read '" + path + "'");
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    out.close();
    if (!out) throw IoError("cannot write '" + path + "'");
}

Score load_score(const std::string& path) { return parse_score(read_file(path)); }

struct ProfileFlags {
    std::string kind;
    double rate = 0.0;
    double v_max = 0.0;

    void add_to(CLI::App* cmd, bool with_rate) {
        cmd->add_option("--profile", kind, "vendor_default | linear_smoothed | min_jerk | s_curve");
        cmd->add_option("--vmax", v_max, "vendor_default joint speed limit, deg/s");
        if (with_rate) cmd->add_option("--rate", rate, "sample rate, Hz");
    }

    ProfileConfig apply(ProfileConfig config) const {
        if (!kind.empty()) {
            auto k = parse_profile_kind(kind);
            if (!k) throw Error(ErrorCode::InvalidArgument, "unknown profile '" + kind + "'");
            config.kind = *k;
        }
        if (rate != 0.0) config.sample_rate = rate;
        if (v_max != 0.0) config.v_max = v_max;
        validate(config);
        return config;
    }
};

SampledTrajectory plan_score(const Score& score, const ProfileConfig& config) {
    return plan(decode_score(score), config, score.home_or_zero());
}

int cmd_validate(const std::string& path) {
    Score score = load_score(path);
    std::cout << "OK, " << score.frames.size() << (score.frames.size() == 1 ? " frame" : " frames") << ", "
              << score.servo_count << " servos, " << score.total_duration().to_string() << " s\n";
    return kExitOk;
}

int cmd_compile(const std::string& path, const ProfileFlags& flags, const std::string& out) {
    Score score = load_score(path);
    write_output(out, stream_to_text(compile_stream(score, flags.apply(score.profile))));
    return kExitOk;
}

int cmd_simulate(const std::string& path, const ProfileFlags& flags, const std::string& out,
                 const std::string& metrics_out) {
    Score score = load_score(path);
    auto targets = decode_score(score);
    auto traj = plan(targets, flags.apply(score.profile), score.home_or_zero());

    std::string csv = "t";
    for (std::size_t j = 0; j < traj.joint_count(); ++j) csv += ",q" + std::to_string(j + 1);
    csv += '\n';
    for (std::size_t k = 0; k < traj.timestamps.size(); ++k) {
        csv += detail::format_number(traj.timestamps[k]);
        for (double q : traj.angles[k]) csv += "," + detail::format_number(q);
        csv += '\n';
    }

    auto m = metrics(traj, targets);
    nlohmann::ordered_json j;
    j["samples"] = traj.timestamps.size();
    j["end_time"] = traj.timestamps.back();
    j["timing_deviation"] = m.timing_deviation;
    j["smoothness"] = m.smoothness;
    j["jitter"] = m.jitter;
    const std::string metrics_text = j.dump(2) + "\n";

    if (!out.empty()) {
        write_output(out, csv);
    } else if (metrics_out.empty()) {
        std::cout << csv;
    }
    if (!metrics_out.empty()) {
        write_output(metrics_out, metrics_text);
    } else if (!out.empty()) {
        std::cout << metrics_text;
    }
    return kExitOk;
}

int cmd_render(const std::string& path, const ProfileFlags& flags, const std::string& out,
               const std::string& chain_path, const std::string& plane, int width, int height) {
    Score score = load_score(path);
    KinematicChain chain = chain_path.empty() ? default_chain() : parse_chain(read_file(chain_path));
    auto traj = plan_score(score, flags.apply(score.profile));

    RenderConfig config;
    if (plane == "XY") config.plane = Plane::XY;
    else if (plane == "XZ") config.plane = Plane::XZ;
    else if (plane == "YZ") config.plane = Plane::YZ;
    else throw Error(ErrorCode::InvalidArgument, "plane must be XY, XZ or YZ");
    config.width = width;
    config.height = height;
    config.title = fs::path(path).stem().string();
    write_output(out, render(trace(chain, traj), score.palette, config));
    return kExitOk;
}

int cmd_play(const std::string& path, const ProfileFlags& flags, const std::string& connect, bool dry) {
    Score score = load_score(path);
    auto stream = compile_stream(score, flags.apply(score.profile));
    if (dry) {
        std::cout << dry_run(stream);
        return kExitOk;
    }
    auto colon = connect.rfind(':');
    auto port = colon == std::string::npos ? std::nullopt : detail::parse_integer(connect.substr(colon + 1));
    if (!port || *port <= 0 || *port > 65535) {
        throw Error(ErrorCode::InvalidArgument, "--connect expects host:port");
    }
    PlayOptions options;
    options.host = connect.substr(0, colon);
    options.port = static_cast<std::uint16_t>(*port);
    options.warn = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
    auto report = play(stream, options);
    std::cout << "sent " << report.sent << ", acked " << report.acked.size();
    if (report.overruns) std::cout << ", " << report.overruns << " late";
    std::cout << "\n";
    return kExitOk;
}

int cmd_remap(const std::string& path, const std::string& map, const std::string& out) {
    Score score = load_score(path);
    write_output(out, serialize_score(remap_score(score, parse_remap_spec(map))));
    return kExitOk;
}

int cmd_vocab() {
    for (const auto& p : builtin_vocabulary()) {
        std::cout << p.name << ' ' << std::string(p.symbols.begin(), p.symbols.end()) << ' ' << to_string(p.category)
                  << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ropera: symbolic choreography scores for six-servo arms"};
    app.require_subcommand(1);

    std::string path, out, metrics_out, chain, plane = "XZ", connect, map;
    int width = 800, height = 600;
    bool dry = false;
    ProfileFlags flags;

    auto* validate_cmd = app.add_subcommand("validate", "parse and check a score");
    validate_cmd->add_option("score", path, "score file")->required();

    auto* compile_cmd = app.add_subcommand("compile", "write the command stream (one JSON record per frame)");
    compile_cmd->add_option("score", path)->required();
    compile_cmd->add_option("-o,--out", out, "output file (default stdout)");
    flags.add_to(compile_cmd, true);

    auto* simulate_cmd = app.add_subcommand("simulate", "sample the planned trajectory");
    simulate_cmd->add_option("score", path)->required();
    simulate_cmd->add_option("-o,--out", out, "trajectory CSV");
    simulate_cmd->add_option("--metrics-out", metrics_out, "motion metrics JSON");
    flags.add_to(simulate_cmd, true);

    auto* render_cmd = app.add_subcommand("render", "light-painting SVG of the marker traces");
    render_cmd->add_option("score", path)->required();
    render_cmd->add_option("-o,--out", out, "SVG file (default stdout)");
    render_cmd->add_option("--chain", chain, "chain description (default: built-in six-joint arm)");
    render_cmd->add_option("--plane", plane, "XY | XZ | YZ");
    render_cmd->add_option("--width", width);
    render_cmd->add_option("--height", height);
    flags.add_to(render_cmd, true);

    auto* play_cmd = app.add_subcommand("play", "stream the score to a bridge in real time");
    play_cmd->add_option("score", path)->required();
    play_cmd->add_option("--connect", connect, "bridge host:port");
    play_cmd->add_flag("--dry-run", dry, "print the timed stream; open no socket");
    flags.add_to(play_cmd, false);

    auto* remap_cmd = app.add_subcommand("remap", "rewrite a score for a different servo layout");
    remap_cmd->add_option("score", path)->required();
    remap_cmd->add_option("--map", map, "comma list of 1-based sources or =SYMBOL constants")->required();
    remap_cmd->add_option("-o,--out", out, "output file (default stdout)");

    auto* vocab_cmd = app.add_subcommand("vocab", "list the built-in posture vocabulary");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate_cmd) return cmd_validate(path);
        if (*compile_cmd) return cmd_compile(path, flags, out);
        if (*simulate_cmd) return cmd_simulate(path, flags, out, metrics_out);
        if (*render_cmd) return cmd_render(path, flags, out, chain, plane, width, height);
        if (*play_cmd) {
            if (!dry && connect.empty()) throw Error(ErrorCode::InvalidArgument, "play needs --connect or --dry-run");
            return cmd_play(path, flags, connect, dry);
        }
        if (*remap_cmd) return cmd_remap(path, map, out);
        if (*vocab_cmd) return cmd_vocab();
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << path << ":" << e.line() << ":" << e.column() << ": " << to_string(e.code()) << ": "
                  << e.detail() << "\n";
        return kExitInvalid;
    } catch (const FrameError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kExitInvalid;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        bool io = e.code() == ErrorCode::ConnectionRefused || e.code() == ErrorCode::Io ||
                  e.code() == ErrorCode::AssetMissing;
        return io ? kExitIo : kExitInvalid;
    }
    return kExitOk;
}
