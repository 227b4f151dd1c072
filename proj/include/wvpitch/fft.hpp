#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wvpitch/types.hpp"

// Shared DFT contract: forward kernel e^(-j2*pi*k*n/N), unnormalized forward,
// 1/N on the inverse. Power-of-two lengths only; callers zero-pad and trim.
// No cached plans or global state, so calls are thread-safe.

namespace wvpitch::fft {

std::size_t next_pow2(std::size_t n);

// In-place radix-2 transform. a.size() must be a power of two.
void forward(std::vector<cd>& a);
void inverse(std::vector<cd>& a);

// Forward transform of a real signal zero-padded to n_fft (power of two,
// >= x.size()).
std::vector<cd> forward_real(std::span<const double> x, std::size_t n_fft);

}  // namespace wvpitch::fft
