#pragma once

#include <map>
#include <string>
#include <vector>

#include "wvpitch/types.hpp"

namespace wvpitch::tracker {

// Every pipeline parameter in one place. Defaults follow the pitch range and
// frame sizes the pipeline is designed around; all are overridable from a
// key=value config file.
struct TrackerConfig {
    double band_lo_hz = 60.0;        // speech pitch band
    double band_hi_hz = 400.0;
    int downsample_hz = 800;         // f_d
    double vuv_frame_s = 0.025;
    double vuv_threshold = 0.2;      // of average energy
    double vuv_subframe_s = 0.005;
    std::size_t seg_samples = 120;   // ~150 ms at f_d
    double pad_s = 0.020;            // segment context, half the lag window
    double cepstrum_lo_hz = 80.0;
    double cepstrum_hi_hz = 320.0;
    double prefilter_lo_ratio = 0.7;
    double prefilter_hi_ratio = 1.4;
    double window_s = 0.040;         // Hann lag window (length forced odd)
    double hop_s = 0.010;            // output frame hop
    double ridge_prominence = 0.5;   // of the column's in-band maximum
    unsigned threads = 0;            // 0 = WVPITCH_THREADS env var, else hardware
};

void validate(const TrackerConfig& cfg);

// key=value text, '#' comments; every key optional. Unknown keys are errors.
TrackerConfig parse_config(const std::string& text, const TrackerConfig& base = {});
TrackerConfig load_config(const std::string& path, const TrackerConfig& base = {});

// Wall-clock seconds spent per pipeline stage. With worker threads the
// per-segment stages accumulate thread-seconds, not wall time.
struct StageTimings {
    double bandpass = 0.0;
    double resample = 0.0;
    double vuv = 0.0;
    double segment = 0.0;
    double prefilter = 0.0;  // average-F0 estimation + band-pass
    double pwvd = 0.0;       // analytic signal + distribution + ridge
    double assemble = 0.0;

    std::map<std::string, double> as_map() const;
};

// Full pipeline: band-pass, downsample, V/UV, segmentation, per-segment
// pre-filtering and PWVD ridge extraction, then hop-rate aggregation.
// Per-sample ridge values are averaged within each hop window centered on
// the frame time; frames with no voiced-core samples are unvoiced. Segments
// whose average-F0 estimation fails are emitted unvoiced rather than
// aborting the track.
PitchTrack track_pitch(const AudioBuffer& x, const TrackerConfig& cfg = {},
                       StageTimings* timings = nullptr);

struct BenchReport {
    double rt_factor = 0.0;  // wall seconds per second of audio
    double audio_seconds = 0.0;
    double wall_seconds = 0.0;
    StageTimings stages;
};

// Runs the tracker over the corpus and reports total wall time over total
// audio time with the per-stage breakdown.
BenchReport runtime_benchmark(const std::vector<AudioBuffer>& corpus,
                              const TrackerConfig& cfg = {});

}  // namespace wvpitch::tracker
