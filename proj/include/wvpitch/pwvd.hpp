#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wvpitch/dsp.hpp"
#include "wvpitch/types.hpp"

namespace wvpitch::pwvd {

// Dense time-frequency distribution, one column per input sample.
// freq_step already accounts for the factor-2 frequency stretch of the
// analytic-lag formulation: bin k sits at k * fs / (2 * n_fft) for the FFT
// path, equivalently k * fs / n_bins for the direct oracle.
struct TFDistribution {
    std::size_t num_times = 0;
    std::size_t num_bins = 0;
    double time_step = 0.0;  // seconds per column
    double freq_step = 0.0;  // Hz per bin
    std::vector<double> values;  // row-major [time][bin]

    double at(std::size_t n, std::size_t k) const { return values[n * num_bins + k]; }
    double& at(std::size_t n, std::size_t k) { return values[n * num_bins + k]; }
    double time_at(std::size_t n) const { return static_cast<double>(n) * time_step; }
    double freq_at(std::size_t k) const { return static_cast<double>(k) * freq_step; }
};

struct DirectWvdOptions {
    // number of frequency bins; 0 means the input length
    std::size_t n_bins = 0;
    // evaluate the half-integer (odd) lags by linear interpolation; disabling
    // restricts the sum to even lags, which is the integer-lag convention the
    // FFT path computes (bin k then matches the FFT path with
    // n_bins == 2 * n_fft)
    bool half_integer_lags = true;
};

// Brute-force discrete WVD over all lags, O(N^2) per column. Reference
// implementation for testing the FFT path; inputs limited to 512 samples.
// The imaginary residue is checked against 1e-6 of the peak magnitude before
// the real part is kept.
TFDistribution wvd_direct(std::span<const cd> x, int sample_rate,
                          const DirectWvdOptions& opts = {});
TFDistribution wvd_direct(std::span<const double> x, int sample_rate,
                          const DirectWvdOptions& opts = {});

struct PwvdOptions {
    // FFT length = next power of two >= fft_factor * half window length
    std::size_t fft_factor = 4;
    // columns are independent; > 1 splits them across worker threads
    unsigned threads = 1;
};

// Interpolation-free WVD/PWVD of an analytic signal. Per column n the
// one-sided windowed lag product r[m] = w[m] * x[n+m] * conj(x[n-m]) is
// zero-padded and FFT'd, and the real distribution assembled as
// F[k] + conj(F[k]) - w[0] * |x[n]|^2. A null window means all-ones (plain
// WVD, lags to the signal edge). Window length must be odd.
TFDistribution pwvd(const ComplexBuffer& x, const dsp::Window* window = nullptr,
                    const PwvdOptions& opts = {});

struct RidgePoint {
    double time = 0.0;
    std::optional<double> f0;  // absent when the column has no usable peak
};

// Lowest-frequency in-band local maximum whose height reaches
// prominence_ratio of the column's in-band maximum, refined by 3-point
// parabolic interpolation. Columns with no positive in-band value yield an
// absent f0.
std::vector<RidgePoint> pick_f0_ridge(const TFDistribution& tf, double band_lo_hz,
                                      double band_hi_hz, double prominence_ratio = 0.5);

// Binary dump: int32 num_times, int32 num_bins, float64 time_step,
// float64 freq_step, then row-major float32 values (little-endian).
void write_tf(const TFDistribution& tf, const std::string& path);

}  // namespace wvpitch::pwvd
