#pragma once

#include <span>
#include <vector>

#include "wvpitch/types.hpp"

namespace wvpitch::dsp {

// Band-pass mask transition width in octaves: gain is exactly 1 inside
// [lo, hi] and exactly 0 beyond lo/2^t and hi*2^t.
inline constexpr double mask_transition_octaves = 0.5;

// Symmetric window for lag-domain use. Odd length for PWVD; coefficients in
// [0, 1] and bit-exact symmetric (second half mirrored from the first).
struct Window {
    std::vector<double> coefficients;

    std::size_t size() const { return coefficients.size(); }
};

Window hann_window(std::size_t length);

// Analytic signal via the frequency-domain construction: forward DFT, zero
// the negative-frequency bins, double the positive bins (DC and Nyquist kept
// at unit gain), inverse DFT. The input is zero-padded to a power of two and
// trimmed after the inverse, so Re(result) == input to rounding. Length >= 2.
ComplexBuffer analytic_signal(const AudioBuffer& x);

// Zero-phase band-pass by frequency-domain masking. The mask is exactly 1 on
// [lo, hi] and rolls off with a raised cosine over half an octave on each
// side, reaching exactly 0 beyond, which meets the 40 dB-at-one-octave
// contract with margin. lo == 0 degenerates to a pure low-pass.
// Requires 0 <= lo < hi <= sample_rate/2.
AudioBuffer bandpass(const AudioBuffer& x, double lo_hz, double hi_hz);

// Polyphase rational resampler with a Kaiser-windowed sinc (beta = 8)
// anti-alias kernel. Passband edge 0.9 and stopband edge 1.1 of the target
// Nyquist. Output length = round(len * target_fs / sample_rate).
// target_fs must be positive and < sample_rate.
AudioBuffer resample(const AudioBuffer& x, int target_fs);

// Real cepstrum: inverse DFT of log(|DFT(x)| + eps), eps = 1e-12. The DFT is
// zero-padded to a power of two and the result trimmed, so quefrency indices
// stay in input samples. All-zero input returns all zeros by convention
// (downstream consumers treat a flat cepstrum as unreliable).
std::vector<double> real_cepstrum(std::span<const double> x);

}  // namespace wvpitch::dsp
