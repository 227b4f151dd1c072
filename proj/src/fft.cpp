#include "wvpitch/fft.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wvpitch::fft {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative Cooley-Tukey with a per-call twiddle table. Each table entry is
// computed directly from its angle rather than by repeated multiplication, so
// rounding stays at the ulp level even for 2^20-point transforms.
void transform(std::vector<cd>& a, bool inv) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const double sign = inv ? 1.0 : -1.0;
    std::vector<cd> tw(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        tw[j] = cd(std::cos(ang), std::sin(ang));
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cd w = tw[j * stride];
                const cd u = a[i + j];
                const cd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }

    if (inv) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : a) v *= scale;
    }
}

}  // namespace

void forward(std::vector<cd>& a) { transform(a, false); }
void inverse(std::vector<cd>& a) { transform(a, true); }

std::vector<cd> forward_real(std::span<const double> x, std::size_t n_fft) {
    if (n_fft < x.size()) throw std::invalid_argument("fft: n_fft smaller than input");
    std::vector<cd> a(n_fft, cd(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = cd(x[i], 0.0);
    forward(a);
    return a;
}

}  // namespace wvpitch::fft
