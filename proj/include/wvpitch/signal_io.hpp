#pragma once

#include <string>

#include "wvpitch/types.hpp"

namespace wvpitch::io {

enum class SynthKind { chirp_pair, pulse_train, tone };

struct SynthSpec {
    SynthKind kind = SynthKind::tone;
    double f0 = 0.0;          // Hz
    double chirp_rate = 0.0;  // Hz/s
    double duration = 0.0;    // s
    int sample_rate = 0;      // Hz
};

// Reads a RIFF WAV file (PCM16 or float32). Stereo files keep channel 0 only;
// if `warning` is non-null a note about dropped channels is written there.
// PCM16 samples are scaled by 1/32768.
AudioBuffer read_wav(const std::string& path, std::string* warning = nullptr);

// Writes a mono float32 WAV file.
void write_wav(const AudioBuffer& x, const std::string& path);

// Test-signal generator.
//   chirp_pair:  cos(pi*k*t^2 + 2*pi*f0*t) + cos(pi*k*t^2)
//   pulse_train: unit impulses convolved with a short decaying kernel;
//                period round(fs/f0) when chirp_rate == 0, otherwise pulse
//                times follow the swept rate f0 + k*t
//   tone:        cos(2*pi*f0*t)
// Errors if any instantaneous frequency exceeds Nyquist within the duration.
AudioBuffer synth(const SynthSpec& spec);

struct EggOptions {
    // negative dEGG peaks below -prominence_ratio * median(|dEGG|) count as
    // glottal closure instants
    double prominence_ratio = 3.0;
    // a frame is voiced only if its surrounding GCI interval is at most this
    // many seconds (2.5 pitch periods at 60 Hz)
    double max_interval = 2.5 / 60.0;
    // intervals shorter than this are treated as spurious double detections
    double min_interval = 1.0 / 500.0;
};

// Derives an F0/voicing ground-truth track from an EGG recording:
// differentiate, pick prominent negative peaks as glottal closure instants,
// and report the reciprocal of the local inter-GCI interval per hop frame.
// Frame times are hop-window centers i*hop; a frame is unvoiced when no
// plausible GCI pair brackets it.
PitchTrack extract_egg_ground_truth(const AudioBuffer& egg, double hop,
                                    const EggOptions& opts = {});

// Track CSV: header "time_s,f0_hz,voiced"; one row per frame with six decimal
// places, f0_hz blank when unvoiced; LF line endings.
void write_track(const PitchTrack& track, const std::string& path);
PitchTrack read_track(const std::string& path);

std::string track_to_csv(const PitchTrack& track);
PitchTrack track_from_csv(const std::string& text);

}  // namespace wvpitch::io
