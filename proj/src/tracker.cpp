#include "wvpitch/tracker.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wvpitch/dsp.hpp"
#include "wvpitch/prefilter.hpp"
#include "wvpitch/pwvd.hpp"
#include "wvpitch/segmenter.hpp"
#include "wvpitch/vuv.hpp"

namespace wvpitch::tracker {

namespace {

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("WVPITCH_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace

void validate(const TrackerConfig& cfg) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string("config: ") + name + " must be positive");
    };
    positive(cfg.band_lo_hz, "band_lo_hz");
    positive(cfg.band_hi_hz, "band_hi_hz");
    positive(static_cast<double>(cfg.downsample_hz), "downsample_hz");
    positive(cfg.vuv_frame_s, "vuv_frame_s");
    positive(cfg.vuv_threshold, "vuv_threshold");
    positive(cfg.vuv_subframe_s, "vuv_subframe_s");
    positive(static_cast<double>(cfg.seg_samples), "seg_samples");
    positive(cfg.pad_s, "pad_s");
    positive(cfg.cepstrum_lo_hz, "cepstrum_lo_hz");
    positive(cfg.cepstrum_hi_hz, "cepstrum_hi_hz");
    positive(cfg.window_s, "window_s");
    positive(cfg.hop_s, "hop_s");
    positive(cfg.ridge_prominence, "ridge_prominence");
    if (!(cfg.band_lo_hz < cfg.band_hi_hz && cfg.band_hi_hz <= 0.5 * cfg.downsample_hz))
        throw std::invalid_argument("config: need band_lo < band_hi <= downsample_hz/2");
    if (!(cfg.prefilter_lo_ratio < 1.0 && 1.0 < cfg.prefilter_hi_ratio))
        throw std::invalid_argument("config: prefilter ratios must straddle 1");
    if (!(cfg.cepstrum_lo_hz < cfg.cepstrum_hi_hz))
        throw std::invalid_argument("config: need cepstrum_lo_hz < cepstrum_hi_hz");
}

TrackerConfig parse_config(const std::string& text, const TrackerConfig& base) {
    TrackerConfig cfg = base;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "band_lo_hz") cfg.band_lo_hz = std::stod(value);
            else if (key == "band_hi_hz") cfg.band_hi_hz = std::stod(value);
            else if (key == "downsample_hz") cfg.downsample_hz = std::stoi(value);
            else if (key == "vuv_frame_s") cfg.vuv_frame_s = std::stod(value);
            else if (key == "vuv_threshold") cfg.vuv_threshold = std::stod(value);
            else if (key == "vuv_subframe_s") cfg.vuv_subframe_s = std::stod(value);
            else if (key == "seg_samples") cfg.seg_samples = static_cast<std::size_t>(std::stoul(value));
            else if (key == "pad_s") cfg.pad_s = std::stod(value);
            else if (key == "cepstrum_lo_hz") cfg.cepstrum_lo_hz = std::stod(value);
            else if (key == "cepstrum_hi_hz") cfg.cepstrum_hi_hz = std::stod(value);
            else if (key == "prefilter_lo_ratio") cfg.prefilter_lo_ratio = std::stod(value);
            else if (key == "prefilter_hi_ratio") cfg.prefilter_hi_ratio = std::stod(value);
            else if (key == "window_s") cfg.window_s = std::stod(value);
            else if (key == "hop_s") cfg.hop_s = std::stod(value);
            else if (key == "ridge_prominence") cfg.ridge_prominence = std::stod(value);
            else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
            else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key " + key);
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad value");
        }
    }
    validate(cfg);
    return cfg;
}

TrackerConfig load_config(const std::string& path, const TrackerConfig& base) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), base);
}

std::map<std::string, double> StageTimings::as_map() const {
    return {{"bandpass", bandpass}, {"resample", resample}, {"vuv", vuv},
            {"segment", segment},   {"prefilter", prefilter}, {"pwvd", pwvd},
            {"assemble", assemble}};
}

PitchTrack track_pitch(const AudioBuffer& x, const TrackerConfig& cfg, StageTimings* timings) {
    validate(cfg);
    validate(x);
    if (x.samples.empty()) throw std::invalid_argument("track_pitch: empty signal");
    if (x.sample_rate < 2 * cfg.band_hi_hz)
        throw std::invalid_argument("track_pitch: sample rate below 2 * band_hi");
    if (x.sample_rate < cfg.downsample_hz)
        throw std::invalid_argument("track_pitch: sample rate below downsample rate");

    StageTimings local;
    StageTimings& tm = timings ? *timings : local;

    auto t0 = clock::now();
    const AudioBuffer x_bp = dsp::bandpass(x, cfg.band_lo_hz, cfg.band_hi_hz);
    tm.bandpass += seconds_since(t0);

    t0 = clock::now();
    const AudioBuffer x_d =
        (x.sample_rate > cfg.downsample_hz) ? dsp::resample(x_bp, cfg.downsample_hz) : x_bp;
    tm.resample += seconds_since(t0);

    t0 = clock::now();
    const vuv::VoicingMask mask =
        vuv::classify_vuv(x_d, {cfg.vuv_frame_s, cfg.vuv_threshold, cfg.vuv_subframe_s});
    tm.vuv += seconds_since(t0);

    t0 = clock::now();
    std::vector<seg::VoicedSegment> segments =
        seg::segment_voiced(mask, x_d, x, {cfg.seg_samples, cfg.pad_s});
    tm.segment += seconds_since(t0);

    // lag window: odd length at the downsampled rate
    std::size_t win_len = static_cast<std::size_t>(std::llround(cfg.window_s * x_d.sample_rate));
    if (win_len % 2 == 0) ++win_len;
    const dsp::Window window = dsp::hann_window(std::max<std::size_t>(3, win_len));

    prefilter::PrefilterOptions pf;
    pf.cepstrum_lo = cfg.cepstrum_lo_hz;
    pf.cepstrum_hi = cfg.cepstrum_hi_hz;
    pf.ratio_lo = cfg.prefilter_lo_ratio;
    pf.ratio_hi = cfg.prefilter_hi_ratio;

    struct SegmentResult {
        bool ok = false;
        std::vector<std::optional<double>> core_f0;
    };
    std::vector<SegmentResult> results(segments.size());

    const unsigned threads = std::min<std::size_t>(resolve_threads(cfg.threads),
                                                   std::max<std::size_t>(segments.size(), 1));
    std::atomic<std::size_t> next{0};
    std::atomic<double> prefilter_s{0.0}, pwvd_s{0.0};

    auto worker = [&]() {
        double pf_time = 0.0, wv_time = 0.0;
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= segments.size()) break;
            seg::VoicedSegment& s = segments[idx];
            SegmentResult& res = results[idx];
            res.core_f0.assign(s.core_length(), std::nullopt);
            try {
                auto w0 = clock::now();
                const prefilter::AverageF0Estimate est =
                    prefilter::estimate_average_f0(s.hi_padded, x.sample_rate, pf);
                prefilter::apply_prefilter(s, est.average_f0, x_d.sample_rate, pf);
                pf_time += seconds_since(w0);

                w0 = clock::now();
                AudioBuffer seg_buf;
                seg_buf.sample_rate = x_d.sample_rate;
                seg_buf.samples = s.padded;
                const ComplexBuffer xa = dsp::analytic_signal(seg_buf);
                const pwvd::TFDistribution tf = pwvd::pwvd(xa, &window);
                const double band_lo = cfg.prefilter_lo_ratio * est.average_f0;
                const double band_hi = std::min(cfg.prefilter_hi_ratio * est.average_f0,
                                                pf.nyquist_margin * 0.5 * x_d.sample_rate);
                const auto ridge = pwvd::pick_f0_ridge(tf, band_lo, band_hi, cfg.ridge_prominence);
                for (std::size_t i = 0; i < s.core_length(); ++i)
                    res.core_f0[i] = ridge[s.pad_left + i].f0;
                res.ok = true;
                wv_time += seconds_since(w0);
            } catch (const ProcessingError&) {
                res.ok = false;  // segment emitted unvoiced; the track goes on
            }
        }
        prefilter_s.fetch_add(pf_time);
        pwvd_s.fetch_add(wv_time);
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    tm.prefilter += prefilter_s.load();
    tm.pwvd += pwvd_s.load();

    t0 = clock::now();
    std::vector<std::optional<double>> per_sample(x_d.samples.size());
    for (std::size_t si = 0; si < segments.size(); ++si) {
        if (!results[si].ok) continue;
        const auto& s = segments[si];
        for (std::size_t i = 0; i < s.core_length(); ++i)
            per_sample[s.core_start + i] = results[si].core_f0[i];
    }

    // hop aggregation: sample j belongs to the frame whose center time is
    // nearest, i.e. frame round(j / (f_d * hop))
    PitchTrack track;
    track.hop = cfg.hop_s;
    const double samples_per_hop = cfg.hop_s * x_d.sample_rate;
    const std::size_t num_frames = static_cast<std::size_t>(std::llround(
                                       static_cast<double>(x_d.samples.size() - 1) / samples_per_hop)) +
                                   1;
    std::vector<double> sums(num_frames, 0.0);
    std::vector<std::size_t> counts(num_frames, 0);
    for (std::size_t j = 0; j < per_sample.size(); ++j) {
        if (!per_sample[j]) continue;
        const std::size_t i = static_cast<std::size_t>(
            std::llround(static_cast<double>(j) / samples_per_hop));
        if (i >= num_frames) continue;
        sums[i] += *per_sample[j];
        counts[i] += 1;
    }
    track.frames.resize(num_frames);
    for (std::size_t i = 0; i < num_frames; ++i) {
        track.frames[i].time = static_cast<double>(i) * cfg.hop_s;
        if (counts[i] > 0) {
            track.frames[i].voiced = true;
            track.frames[i].f0 = sums[i] / static_cast<double>(counts[i]);
        }
    }
    tm.assemble += seconds_since(t0);
    return track;
}

BenchReport runtime_benchmark(const std::vector<AudioBuffer>& corpus, const TrackerConfig& cfg) {
    if (corpus.empty()) throw std::invalid_argument("runtime_benchmark: empty corpus");
    BenchReport report;
    const auto t0 = clock::now();
    for (const AudioBuffer& x : corpus) {
        report.audio_seconds += x.duration();
        track_pitch(x, cfg, &report.stages);
    }
    report.wall_seconds = seconds_since(t0);
    report.rt_factor = report.wall_seconds / report.audio_seconds;
    return report;
}

}  // namespace wvpitch::tracker
