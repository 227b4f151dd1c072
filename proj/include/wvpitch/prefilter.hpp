#pragma once

#include <span>
#include <vector>

#include "wvpitch/segmenter.hpp"
#include "wvpitch/types.hpp"

namespace wvpitch::prefilter {

enum class Confidence {
    cepstrum_clear,  // a candidate passed the spectral prominence test
    fallback,        // none did; the raw cepstrum estimate was kept
};

struct AverageF0Estimate {
    double raw_f0 = 0.0;             // sample_rate / cepstral argmax quefrency
    std::vector<double> candidates;  // sorted, within [cepstrum_lo, cepstrum_hi]
    double average_f0 = 0.0;         // smallest candidate with a prominent spectrum peak
    Confidence confidence = Confidence::fallback;
};

struct PrefilterOptions {
    double cepstrum_lo = 80.0;    // Hz, quefrency search band
    double cepstrum_hi = 320.0;   // Hz
    double lpf_stop_edge = 1000.0;  // Hz, stopband edge of the pre-cepstrum low-pass
    // log-spectrum dynamic range for the cepstrum, dB below the spectrum
    // peak; bounds the band-edge cliff the low-pass would otherwise leave
    double cepstrum_floor_db = 50.0;
    // a candidate is accepted when the magnitude spectrum has a local maximum
    // within +-neighborhood of it whose height reaches prominence_ratio of
    // the spectrum maximum over [spectrum_lo, spectrum_hi]
    double neighborhood = 0.10;
    double prominence_ratio = 0.25;
    double spectrum_lo = 80.0;   // Hz
    double spectrum_hi = 400.0;  // Hz
    double ratio_lo = 0.7;       // pass band [ratio_lo, ratio_hi] * average_f0
    double ratio_hi = 1.4;
    double nyquist_margin = 0.98;  // upper band edge clipped to margin * Nyquist
};

// Integer multiples and integer divisors of raw_f0 clipped to
// [cepstrum_lo, cepstrum_hi], deduplicated and sorted ascending.
std::vector<double> make_candidates(double raw_f0, const PrefilterOptions& opts = {});

// Average-F0 estimation on a high-rate segment (context padding included):
// 1 kHz low-pass, cepstrum maximum over the [cepstrum_lo, cepstrum_hi]
// quefrency band, candidate expansion, and smallest-candidate-with-
// prominent-spectrum-peak selection. Throws ProcessingError when the segment
// is too short to resolve the lowest quefrency (< 2*fs/cepstrum_lo samples).
AverageF0Estimate estimate_average_f0(std::span<const double> segment_hi, int sample_rate,
                                      const PrefilterOptions& opts = {});

// Band-passes the segment's padded samples to [ratio_lo, ratio_hi] *
// average_f0 (upper edge clipped below Nyquist) and records average_f0 on
// the segment.
void apply_prefilter(seg::VoicedSegment& segment, double average_f0, int sample_rate,
                     const PrefilterOptions& opts = {});

}  // namespace wvpitch::prefilter
