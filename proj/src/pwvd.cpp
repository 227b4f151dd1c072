#include "wvpitch/pwvd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "wvpitch/fft.hpp"

namespace wvpitch::pwvd {

namespace {

constexpr std::size_t kOracleMaxLen = 512;

}  // namespace

TFDistribution wvd_direct(std::span<const cd> x, int sample_rate, const DirectWvdOptions& opts) {
    const std::size_t len = x.size();
    if (len == 0) throw std::invalid_argument("wvd_direct: empty input");
    if (len > kOracleMaxLen) throw std::invalid_argument("wvd_direct: input too long for oracle");
    const std::size_t n_bins = opts.n_bins ? opts.n_bins : len;

    // sample at integer or half-integer position, in half-sample units;
    // out-of-range samples are zero, odd positions linearly interpolated
    auto at_half = [&](std::ptrdiff_t p) -> cd {
        auto intsample = [&](std::ptrdiff_t i) -> cd {
            return (i >= 0 && i < static_cast<std::ptrdiff_t>(len)) ? x[static_cast<std::size_t>(i)]
                                                                    : cd(0.0, 0.0);
        };
        if (p % 2 == 0) return intsample(p / 2);
        const std::ptrdiff_t lo = (p - 1) / 2;
        return 0.5 * (intsample(lo) + intsample(lo + 1));
    };

    std::vector<cd> tw(n_bins);
    for (std::size_t j = 0; j < n_bins; ++j) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_bins);
        tw[j] = cd(std::cos(ang), std::sin(ang));
    }

    TFDistribution tf;
    tf.num_times = len;
    tf.num_bins = n_bins;
    tf.time_step = 1.0 / sample_rate;
    tf.freq_step = static_cast<double>(sample_rate) / static_cast<double>(n_bins);
    tf.values.assign(len * n_bins, 0.0);

    double max_mag = 0.0, max_imag = 0.0;
    const std::ptrdiff_t m_max = static_cast<std::ptrdiff_t>(len) - 1;
    std::vector<cd> prod(2 * len - 1);
    std::vector<std::ptrdiff_t> lags;
    lags.reserve(prod.size());

    for (std::size_t n = 0; n < len; ++n) {
        lags.clear();
        for (std::ptrdiff_t m = -m_max; m <= m_max; ++m) {
            if (!opts.half_integer_lags && (m % 2) != 0) continue;
            const cd a = at_half(2 * static_cast<std::ptrdiff_t>(n) + m);
            const cd b = at_half(2 * static_cast<std::ptrdiff_t>(n) - m);
            const cd p = a * std::conj(b);
            if (p != cd(0.0, 0.0)) {
                prod[static_cast<std::size_t>(m + m_max)] = p;
                lags.push_back(m);
            }
        }
        for (std::size_t k = 0; k < n_bins; ++k) {
            cd acc(0.0, 0.0);
            for (const std::ptrdiff_t m : lags) {
                const long long km = static_cast<long long>(k) * m;
                const std::size_t idx = static_cast<std::size_t>(
                    ((km % static_cast<long long>(n_bins)) + static_cast<long long>(n_bins)) %
                    static_cast<long long>(n_bins));
                acc += prod[static_cast<std::size_t>(m + m_max)] * tw[idx];
            }
            max_mag = std::max(max_mag, std::abs(acc));
            max_imag = std::max(max_imag, std::abs(acc.imag()));
            tf.at(n, k) = acc.real();
        }
    }
    if (max_imag > 1e-6 * max_mag)
        throw ProcessingError("wvd_direct: imaginary residue above tolerance");
    return tf;
}

TFDistribution wvd_direct(std::span<const double> x, int sample_rate,
                          const DirectWvdOptions& opts) {
    std::vector<cd> xc(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xc[i] = cd(x[i], 0.0);
    return wvd_direct(std::span<const cd>(xc), sample_rate, opts);
}

TFDistribution pwvd(const ComplexBuffer& x, const dsp::Window* window, const PwvdOptions& opts) {
    const std::size_t len = x.samples.size();
    if (len == 0) throw std::invalid_argument("pwvd: empty input");
    if (window) {
        if (window->size() % 2 == 0) throw std::invalid_argument("pwvd: window length must be odd");
        if (window->size() > 2 * len - 1)
            throw std::invalid_argument("pwvd: window longer than lag support");
    }

    const std::size_t half = window ? (window->size() - 1) / 2 : len - 1;
    const double w0 = window ? window->coefficients[half] : 1.0;
    const std::size_t n_fft =
        fft::next_pow2(std::max<std::size_t>(opts.fft_factor * std::max<std::size_t>(half, 1),
                                             half + 1));

    TFDistribution tf;
    tf.num_times = len;
    tf.num_bins = n_fft;
    tf.time_step = 1.0 / x.sample_rate;
    // the 4*pi lag kernel stretches frequencies by 2; bins are relabeled here
    tf.freq_step = static_cast<double>(x.sample_rate) / (2.0 * static_cast<double>(n_fft));
    tf.values.assign(len * n_fft, 0.0);

    auto run_columns = [&](std::size_t begin, std::size_t end, double* imag_max, double* real_max) {
        std::vector<cd> scratch(n_fft);
        for (std::size_t n = begin; n < end; ++n) {
            std::fill(scratch.begin(), scratch.end(), cd(0.0, 0.0));
            const std::size_t m_hi = std::min({half, n, len - 1 - n});
            for (std::size_t m = 0; m <= m_hi; ++m) {
                cd r = x.samples[n + m] * std::conj(x.samples[n - m]);
                if (window) r *= window->coefficients[half + m];
                scratch[m] = r;
            }
            fft::forward(scratch);
            const double correction = w0 * std::norm(x.samples[n]);
            double* col = tf.values.data() + n * n_fft;
            for (std::size_t k = 0; k < n_fft; ++k) {
                // F + conj(F) - w0*|x|^2; the conjugate pair cancels the
                // imaginary part identically
                const cd v = scratch[k] + std::conj(scratch[k]) - correction;
                *imag_max = std::max(*imag_max, std::abs(v.imag()));
                *real_max = std::max(*real_max, std::abs(v.real()));
                col[k] = v.real();
            }
        }
    };

    const unsigned threads = std::max(1u, opts.threads);
    double imag_max = 0.0, real_max = 0.0;
    if (threads == 1 || len < 2 * threads) {
        run_columns(0, len, &imag_max, &real_max);
    } else {
        std::vector<std::thread> pool;
        std::vector<double> im(threads, 0.0), re(threads, 0.0);
        const std::size_t chunk = (len + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(len, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_columns, begin, end, &im[t], &re[t]);
        }
        for (auto& th : pool) th.join();
        for (unsigned t = 0; t < threads; ++t) {
            imag_max = std::max(imag_max, im[t]);
            real_max = std::max(real_max, re[t]);
        }
    }
    if (imag_max > 1e-9 * real_max)
        throw ProcessingError("pwvd: imaginary residue above tolerance");
    return tf;
}

std::vector<RidgePoint> pick_f0_ridge(const TFDistribution& tf, double band_lo_hz,
                                      double band_hi_hz, double prominence_ratio) {
    if (tf.num_bins == 0 || tf.freq_step <= 0.0)
        throw std::invalid_argument("pick_f0_ridge: empty distribution");
    const std::size_t k_lo = static_cast<std::size_t>(
        std::clamp(std::ceil(band_lo_hz / tf.freq_step), 0.0,
                   static_cast<double>(tf.num_bins - 1)));
    const std::size_t k_hi = static_cast<std::size_t>(
        std::clamp(std::floor(band_hi_hz / tf.freq_step), 0.0,
                   static_cast<double>(tf.num_bins - 1)));
    if (k_lo > k_hi || band_lo_hz > band_hi_hz)
        throw std::invalid_argument("pick_f0_ridge: band empty after intersection with axis");

    std::vector<RidgePoint> out(tf.num_times);
    for (std::size_t n = 0; n < tf.num_times; ++n) {
        out[n].time = tf.time_at(n);
        const double* col = tf.values.data() + n * tf.num_bins;

        double col_max = 0.0;
        for (std::size_t k = k_lo; k <= k_hi; ++k) col_max = std::max(col_max, col[k]);
        if (col_max <= 0.0) continue;  // no usable peak in this column

        for (std::size_t k = k_lo; k <= k_hi; ++k) {
            const double left = (k > 0) ? col[k - 1] : -std::numeric_limits<double>::infinity();
            const double right =
                (k + 1 < tf.num_bins) ? col[k + 1] : -std::numeric_limits<double>::infinity();
            if (col[k] < left || col[k] < right) continue;
            if (col[k] < prominence_ratio * col_max) continue;

            double freq = tf.freq_at(k);
            if (k > 0 && k + 1 < tf.num_bins) {
                const double denom = col[k - 1] - 2.0 * col[k] + col[k + 1];
                if (denom < 0.0) {
                    const double delta =
                        std::clamp(0.5 * (col[k - 1] - col[k + 1]) / denom, -0.5, 0.5);
                    freq = (static_cast<double>(k) + delta) * tf.freq_step;
                }
            }
            out[n].f0 = freq;
            break;
        }
    }
    return out;
}

void write_tf(const TFDistribution& tf, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot create " + path);
    const std::int32_t dims[2] = {static_cast<std::int32_t>(tf.num_times),
                                  static_cast<std::int32_t>(tf.num_bins)};
    f.write(reinterpret_cast<const char*>(dims), sizeof dims);
    const double steps[2] = {tf.time_step, tf.freq_step};
    f.write(reinterpret_cast<const char*>(steps), sizeof steps);
    std::vector<float> row(tf.num_bins);
    for (std::size_t n = 0; n < tf.num_times; ++n) {
        for (std::size_t k = 0; k < tf.num_bins; ++k)
            row[k] = static_cast<float>(tf.at(n, k));
        f.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace wvpitch::pwvd
