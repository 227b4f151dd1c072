#include "wvpitch/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "wvpitch/fft.hpp"

namespace wvpitch::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

// Raised-cosine edge gain at frequency f for a transition that is 1 at
// `pass` and 0 at `stop` (in log-frequency). pass < stop for an upper edge,
// pass > stop for a lower edge.
double edge_gain(double f, double pass, double stop) {
    if (pass < stop) {
        if (f <= pass) return 1.0;
        if (f >= stop) return 0.0;
    } else {
        if (f >= pass) return 1.0;
        if (f <= stop) return 0.0;
    }
    const double u = std::log2(f / pass) / std::log2(stop / pass);  // 0 at pass, 1 at stop
    const double c = std::cos(0.5 * kPi * u);
    return c * c;
}

double modified_bessel_i0(double x) {
    // power series; converges in ~25 terms for |x| <= 20
    double sum = 1.0, term = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

}  // namespace

Window hann_window(std::size_t length) {
    if (length == 0) throw std::invalid_argument("hann_window: empty window");
    Window w;
    w.coefficients.assign(length, 1.0);
    if (length == 1) return w;
    for (std::size_t i = 0; i < length / 2; ++i) {
        const double v = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(length - 1));
        w.coefficients[i] = v;
        w.coefficients[length - 1 - i] = v;  // mirrored: symmetry holds bit-exactly
    }
    if (length % 2 == 1) w.coefficients[length / 2] = 1.0;
    return w;
}

ComplexBuffer analytic_signal(const AudioBuffer& x) {
    if (x.samples.size() < 2) throw std::invalid_argument("analytic_signal: need at least 2 samples");
    const std::size_t len = x.samples.size();
    const std::size_t n = fft::next_pow2(len);

    std::vector<cd> a = fft::forward_real(x.samples, n);
    // one-sided spectrum: keep DC and Nyquist at unit gain, double bins
    // 1..n/2-1, zero the rest
    for (std::size_t k = 1; k < n / 2; ++k) a[k] *= 2.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) a[k] = cd(0.0, 0.0);
    fft::inverse(a);

    ComplexBuffer out;
    out.sample_rate = x.sample_rate;
    out.samples.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len));
    return out;
}

AudioBuffer bandpass(const AudioBuffer& x, double lo_hz, double hi_hz) {
    const double nyq = 0.5 * x.sample_rate;
    if (!(lo_hz >= 0.0 && lo_hz < hi_hz && hi_hz <= nyq))
        throw std::invalid_argument("bandpass: need 0 <= lo < hi <= fs/2");
    if (x.samples.empty()) throw std::invalid_argument("bandpass: empty signal");

    const std::size_t len = x.samples.size();
    // headroom past the signal keeps the (smooth, fast-decaying) mask impulse
    // response from wrapping back into the data
    const std::size_t n = fft::next_pow2(len + static_cast<std::size_t>(x.sample_rate / 2) + 16);
    std::vector<cd> a = fft::forward_real(x.samples, n);

    const double r = std::exp2(mask_transition_octaves);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double f = static_cast<double>(k) * x.sample_rate / static_cast<double>(n);
        double g = edge_gain(f, hi_hz, hi_hz * r);
        if (lo_hz > 0.0) g *= (f <= 0.0) ? 0.0 : edge_gain(f, lo_hz, lo_hz / r);
        a[k] *= g;
        if (k != 0 && k != n / 2) a[n - k] *= g;  // keep the spectrum conjugate-symmetric
    }
    fft::inverse(a);

    AudioBuffer out;
    out.sample_rate = x.sample_rate;
    out.samples.resize(len);
    for (std::size_t i = 0; i < len; ++i) out.samples[i] = a[i].real();
    return out;
}

AudioBuffer resample(const AudioBuffer& x, int target_fs) {
    if (target_fs <= 0) throw std::invalid_argument("resample: target rate must be positive");
    if (target_fs >= x.sample_rate)
        throw std::invalid_argument("resample: upsampling not supported");
    if (x.samples.empty()) throw std::invalid_argument("resample: empty signal");

    const int fs = x.sample_rate;
    const double nyq_out = 0.5 * target_fs;
    const double f_pass = 0.9 * nyq_out;
    const double f_stop = 1.1 * nyq_out;
    const double fc = nyq_out;  // kernel cutoff centered in the transition band

    // Kaiser design for ~80 dB stopband (beta = 8)
    const double beta = 8.0;
    const double atten_db = 80.0;
    const double delta_w = 2.0 * kPi * (f_stop - f_pass) / fs;
    const int half = std::max(8, static_cast<int>(std::ceil((atten_db - 7.95) / (2.285 * delta_w) / 2.0)));
    const double i0_beta = modified_bessel_i0(beta);

    // polyphase: input time of output j is j*M/L input samples where
    // target/fs = L/M in lowest terms, so fractional offsets cycle over the
    // L residues r/L
    const int g = std::gcd(target_fs, fs);
    const int phases = target_fs / g;        // L
    const int step_den = phases;
    const long long step_num = fs / g;       // M

    // taps per phase, sampled at input rate around the output instant
    const int taps = 2 * half + 1;
    std::vector<std::vector<double>> kernel(static_cast<std::size_t>(phases));
    for (int p = 0; p < phases; ++p) {
        const double frac = static_cast<double>(p) / step_den;
        auto& h = kernel[static_cast<std::size_t>(p)];
        h.resize(static_cast<std::size_t>(taps));
        for (int t = -half; t <= half; ++t) {
            const double u = static_cast<double>(t) - frac;  // input samples from the output instant
            const double arg = 2.0 * fc * u / fs;
            const double sinc = (arg == 0.0) ? 1.0 : std::sin(kPi * arg) / (kPi * arg);
            const double z = u / half;
            const double kw = (std::abs(z) <= 1.0)
                                  ? modified_bessel_i0(beta * std::sqrt(1.0 - z * z)) / i0_beta
                                  : 0.0;
            h[static_cast<std::size_t>(t + half)] = (2.0 * fc / fs) * sinc * kw;
        }
    }

    const std::size_t out_len = static_cast<std::size_t>(
        std::llround(static_cast<double>(x.samples.size()) * target_fs / fs));
    AudioBuffer out;
    out.sample_rate = target_fs;
    out.samples.resize(out_len);

    const std::size_t len = x.samples.size();
    for (std::size_t j = 0; j < out_len; ++j) {
        const long long num = static_cast<long long>(j) * step_num;  // input time = num/step_den
        const long long base = num / step_den;
        const int phase = static_cast<int>(num % step_den);
        const auto& h = kernel[static_cast<std::size_t>(phase)];
        double acc = 0.0;
        for (int t = -half; t <= half; ++t) {
            const long long idx = base + t;
            if (idx < 0 || idx >= static_cast<long long>(len)) continue;
            acc += x.samples[static_cast<std::size_t>(idx)] * h[static_cast<std::size_t>(t + half)];
        }
        out.samples[j] = acc;
    }
    return out;
}

std::vector<double> real_cepstrum(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("real_cepstrum: need at least 2 samples");
    constexpr double kEps = 1e-12;
    const std::size_t n = fft::next_pow2(x.size());
    std::vector<cd> a = fft::forward_real(x, n);
    for (auto& v : a) v = cd(std::log(std::abs(v) + kEps), 0.0);
    fft::inverse(a);
    std::vector<double> c(x.size());
    bool all_zero = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = all_zero ? 0.0 : a[i].real();
    return c;
}

}  // namespace wvpitch::dsp
