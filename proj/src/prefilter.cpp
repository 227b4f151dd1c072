#include "wvpitch/prefilter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wvpitch/dsp.hpp"
#include "wvpitch/fft.hpp"

namespace wvpitch::prefilter {

namespace {

// Real cepstrum with the log magnitude floored at floor_db below the
// spectrum peak. The plain absolute-eps cepstrum sees a cliff of hundreds
// of dB where the low-pass mask zeroed the spectrum; that cliff's quefrency
// ripples (lobes spaced fs/f_edge) land inside the pitch search band and can
// outgrow the harmonic comb peak. Flooring relative to the peak bounds the
// edge depth and also makes the result amplitude-invariant.
std::vector<double> floored_cepstrum(std::span<const double> x, double floor_db) {
    const std::size_t n = fft::next_pow2(x.size());
    std::vector<cd> a = fft::forward_real(x, n);
    double peak = 0.0;
    for (const auto& v : a) peak = std::max(peak, std::abs(v));
    std::vector<double> out(x.size(), 0.0);
    if (peak == 0.0) return out;
    const double floor = peak * std::pow(10.0, -floor_db / 20.0);
    for (auto& v : a) v = cd(std::log(std::max(std::abs(v), floor)), 0.0);
    fft::inverse(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i].real();
    return out;
}

}  // namespace

std::vector<double> make_candidates(double raw_f0, const PrefilterOptions& opts) {
    std::vector<double> out;
    for (int i = 1;; ++i) {
        const double f = raw_f0 * i;
        if (f > opts.cepstrum_hi) break;
        if (f >= opts.cepstrum_lo) out.push_back(f);
    }
    for (int i = 1;; ++i) {
        const double f = raw_f0 / i;
        if (f < opts.cepstrum_lo) break;
        if (f <= opts.cepstrum_hi) out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              out.end());
    return out;
}

AverageF0Estimate estimate_average_f0(std::span<const double> segment_hi, int sample_rate,
                                      const PrefilterOptions& opts) {
    const double fs = sample_rate;
    const std::size_t min_len = static_cast<std::size_t>(std::ceil(2.0 * fs / opts.cepstrum_lo));
    if (segment_hi.size() < min_len)
        throw ProcessingError("estimate_average_f0: segment too short for cepstrum");

    AudioBuffer seg;
    seg.sample_rate = sample_rate;
    seg.samples.assign(segment_hi.begin(), segment_hi.end());

    // low-pass positioned so the stopband begins at lpf_stop_edge
    const double lpf_pass = opts.lpf_stop_edge * std::exp2(-dsp::mask_transition_octaves);
    const AudioBuffer filtered = dsp::bandpass(seg, 0.0, std::min(lpf_pass, 0.5 * fs));

    const std::vector<double> cep = floored_cepstrum(filtered.samples, opts.cepstrum_floor_db);
    // quefrency bounds rounded inward
    const std::size_t q_lo = static_cast<std::size_t>(std::ceil(fs / opts.cepstrum_hi));
    const std::size_t q_hi = std::min(cep.size() - 1,
                                      static_cast<std::size_t>(std::floor(fs / opts.cepstrum_lo)));
    if (q_lo >= q_hi) throw ProcessingError("estimate_average_f0: empty quefrency band");

    std::size_t tau = q_lo;
    for (std::size_t q = q_lo; q <= q_hi; ++q)
        if (cep[q] > cep[tau]) tau = q;

    AverageF0Estimate est;
    est.raw_f0 = fs / static_cast<double>(tau);
    est.candidates = make_candidates(est.raw_f0, opts);

    // magnitude spectrum of the filtered segment (same zero-pad convention as
    // the cepstrum)
    const std::size_t n_fft = fft::next_pow2(filtered.samples.size());
    const std::vector<cd> spec = fft::forward_real(filtered.samples, n_fft);
    const double bin_hz = fs / static_cast<double>(n_fft);
    auto bin_of = [&](double f) {
        return static_cast<std::size_t>(std::clamp(std::llround(f / bin_hz), 0LL,
                                                   static_cast<long long>(n_fft / 2)));
    };
    auto mag = [&](std::size_t k) { return std::abs(spec[k]); };

    double global_max = 0.0;
    for (std::size_t k = bin_of(opts.spectrum_lo); k <= bin_of(std::min(opts.spectrum_hi, 0.5 * fs));
         ++k)
        global_max = std::max(global_max, mag(k));

    est.average_f0 = est.raw_f0;
    est.confidence = Confidence::fallback;
    if (global_max > 0.0) {
        for (double cand : est.candidates) {
            const std::size_t k_lo = std::max<std::size_t>(1, bin_of(cand * (1.0 - opts.neighborhood)));
            const std::size_t k_hi = std::min(n_fft / 2 - 1, bin_of(cand * (1.0 + opts.neighborhood)));
            if (k_lo > k_hi) continue;
            std::size_t k_max = k_lo;
            for (std::size_t k = k_lo; k <= k_hi; ++k)
                if (mag(k) > mag(k_max)) k_max = k;
            const bool local_max = mag(k_max) >= mag(k_max - 1) && mag(k_max) >= mag(k_max + 1);
            if (local_max && mag(k_max) >= opts.prominence_ratio * global_max) {
                est.average_f0 = cand;
                est.confidence = Confidence::cepstrum_clear;
                break;
            }
        }
    }
    return est;
}

void apply_prefilter(seg::VoicedSegment& segment, double average_f0, int sample_rate,
                     const PrefilterOptions& opts) {
    const double nyq = 0.5 * sample_rate;
    const double lo = opts.ratio_lo * average_f0;
    const double hi = std::min(opts.ratio_hi * average_f0, opts.nyquist_margin * nyq);
    if (lo >= hi) throw std::invalid_argument("apply_prefilter: degenerate band");

    AudioBuffer buf;
    buf.sample_rate = sample_rate;
    buf.samples = segment.padded;
    segment.padded = dsp::bandpass(buf, lo, hi).samples;
    segment.average_f0 = average_f0;
}

}  // namespace wvpitch::prefilter
