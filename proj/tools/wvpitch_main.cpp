// wvpitch: PWVD-based pitch tracker command line.
//
// Subcommands: track, synth, eval, bench, dump-tf. Reports are JSON on
// stdout; tracks are CSV files; TF matrices are raw binary dumps.
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 processing error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wvpitch/dsp.hpp"
#include "wvpitch/evaluation.hpp"
#include "wvpitch/pwvd.hpp"
#include "wvpitch/signal_io.hpp"
#include "wvpitch/tracker.hpp"
#include "wvpitch/types.hpp"

namespace {

using nlohmann::json;
using namespace wvpitch;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

tracker::TrackerConfig make_config(const std::string& config_path, unsigned threads) {
    tracker::TrackerConfig cfg;
    if (!config_path.empty()) {
        try {
            cfg = tracker::load_config(config_path);
        } catch (const IoError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (threads > 0) cfg.threads = threads;
    return cfg;
}

json report_to_json(const eval::EvalReport& r) {
    return json{{"mae_hz", r.mae_hz},
                {"pve_hz", r.pve_hz},
                {"ffe_percent", r.ffe_percent},
                {"gpe_count", r.gpe_count},
                {"vde_count", r.vde_count},
                {"total_frames", r.total_frames},
                {"compared_frames", r.compared_frames}};
}

int run(int argc, char** argv) {
    CLI::App app{"PWVD pitch tracker"};
    app.require_subcommand(1);

    std::string in_path, out_path, config_path;
    unsigned threads = 0;
    if (const char* env = std::getenv("WVPITCH_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) threads = static_cast<unsigned>(v);
    }

    auto* track_cmd = app.add_subcommand("track", "Track pitch of a WAV file to CSV");
    track_cmd->add_option("input", in_path, "input WAV")->required();
    track_cmd->add_option("-o,--output", out_path, "output CSV")->required();
    track_cmd->add_option("--config", config_path, "key=value config file");
    track_cmd->add_option("--threads", threads, "worker thread cap");

    std::string synth_kind = "tone";
    double synth_f0 = 100.0, synth_k = 0.0, synth_dur = 1.0;
    int synth_fs = 16000;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a test signal WAV");
    synth_cmd->add_option("--kind", synth_kind, "chirp_pair|pulse_train|tone")->required();
    synth_cmd->add_option("--f0", synth_f0, "fundamental/offset frequency (Hz)");
    synth_cmd->add_option("--k", synth_k, "chirp rate (Hz/s)");
    synth_cmd->add_option("--dur", synth_dur, "duration (s)");
    synth_cmd->add_option("--fs", synth_fs, "sample rate (Hz)");
    synth_cmd->add_option("-o,--output", out_path, "output WAV")->required();

    std::string gt_path, est_path, egg_path;
    double egg_hop = 0.010;
    bool pretty = false;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a track against ground truth");
    eval_cmd->add_option("--gt", gt_path, "ground-truth track CSV");
    eval_cmd->add_option("--egg", egg_path, "EGG WAV to derive ground truth from");
    eval_cmd->add_option("--egg-hop", egg_hop, "ground-truth hop when using --egg (s)");
    eval_cmd->add_option("--est", est_path, "estimated track CSV")->required();
    eval_cmd->add_flag("--pretty", pretty, "indent the JSON report");

    std::string bench_dir;
    auto* bench_cmd = app.add_subcommand("bench", "Benchmark over a directory of WAV files");
    bench_cmd->add_option("dir", bench_dir, "directory of WAV files")->required();
    bench_cmd->add_option("--config", config_path, "key=value config file");
    bench_cmd->add_option("--threads", threads, "worker thread cap");
    bench_cmd->add_flag("--pretty", pretty, "indent the JSON report");

    double dump_window_ms = 0.0;
    auto* dump_cmd = app.add_subcommand("dump-tf", "Dump a WVD/PWVD matrix for plotting");
    dump_cmd->add_option("input", in_path, "input WAV")->required();
    dump_cmd->add_option("-o,--output", out_path, "output binary matrix")->required();
    dump_cmd->add_option("--window-ms", dump_window_ms,
                         "Hann lag window length in ms (0 = plain WVD)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (track_cmd->parsed()) {
        const tracker::TrackerConfig cfg = make_config(config_path, threads);
        std::string warning;
        const AudioBuffer x = io::read_wav(in_path, &warning);
        if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
        const PitchTrack track = tracker::track_pitch(x, cfg);
        io::write_track(track, out_path);
        return 0;
    }

    if (synth_cmd->parsed()) {
        io::SynthSpec spec;
        if (synth_kind == "chirp_pair") spec.kind = io::SynthKind::chirp_pair;
        else if (synth_kind == "pulse_train") spec.kind = io::SynthKind::pulse_train;
        else if (synth_kind == "tone") spec.kind = io::SynthKind::tone;
        else throw UsageError("unknown synth kind: " + synth_kind);
        spec.f0 = synth_f0;
        spec.chirp_rate = synth_k;
        spec.duration = synth_dur;
        spec.sample_rate = synth_fs;
        io::write_wav(io::synth(spec), out_path);
        return 0;
    }

    if (eval_cmd->parsed()) {
        if (gt_path.empty() == egg_path.empty())
            throw UsageError("eval: need exactly one of --gt or --egg");
        PitchTrack gt;
        if (!gt_path.empty()) {
            gt = io::read_track(gt_path);
        } else {
            std::string warning;
            const AudioBuffer egg = io::read_wav(egg_path, &warning);
            if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
            gt = io::extract_egg_ground_truth(egg, egg_hop);
        }
        const PitchTrack est = io::read_track(est_path);
        const eval::EvalReport report = eval::evaluate(gt, est);
        std::cout << report_to_json(report).dump(pretty ? 2 : -1) << "\n";
        return 0;
    }

    if (bench_cmd->parsed()) {
        const tracker::TrackerConfig cfg = make_config(config_path, threads);
        std::vector<AudioBuffer> corpus;
        std::error_code ec;
        for (const auto& entry : std::filesystem::directory_iterator(bench_dir, ec)) {
            if (entry.path().extension() == ".wav")
                corpus.push_back(io::read_wav(entry.path().string()));
        }
        if (ec) throw IoError("cannot read directory " + bench_dir);
        if (corpus.empty()) throw IoError("no .wav files in " + bench_dir);
        const tracker::BenchReport report = tracker::runtime_benchmark(corpus, cfg);
        json j{{"rt_factor", report.rt_factor},
               {"audio_seconds", report.audio_seconds},
               {"wall_seconds", report.wall_seconds},
               {"stages_thread_seconds", report.stages.as_map()}};
        std::cout << j.dump(pretty ? 2 : -1) << "\n";
        return 0;
    }

    if (dump_cmd->parsed()) {
        std::string warning;
        const AudioBuffer x = io::read_wav(in_path, &warning);
        if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
        const ComplexBuffer xa = dsp::analytic_signal(x);
        pwvd::TFDistribution tf;
        if (dump_window_ms > 0.0) {
            std::size_t len = static_cast<std::size_t>(
                std::llround(dump_window_ms * 1e-3 * x.sample_rate));
            if (len % 2 == 0) ++len;
            const dsp::Window window = dsp::hann_window(std::max<std::size_t>(3, len));
            tf = pwvd::pwvd(xa, &window);
        } else {
            // full-lag WVD: memory grows with len^2, keep it plot-sized
            if (x.samples.size() > 4096)
                throw ProcessingError("dump-tf: input longer than 4096 samples; "
                                      "use --window-ms or a shorter excerpt");
            tf = pwvd::pwvd(xa, nullptr);
        }
        pwvd::write_tf(tf, out_path);
        return 0;
    }

    throw UsageError("no subcommand");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
