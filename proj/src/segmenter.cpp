#include "wvpitch/segmenter.hpp"

#include <cmath>
#include <stdexcept>

namespace wvpitch::seg {

namespace {

// copy [start - pad, end + pad) with zero fill outside [0, len)
std::vector<double> padded_slice(const std::vector<double>& x, std::size_t start,
                                 std::size_t end, std::size_t pad) {
    std::vector<double> out(end - start + 2 * pad, 0.0);
    const std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(start) - static_cast<std::ptrdiff_t>(pad);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::ptrdiff_t src = lo + static_cast<std::ptrdiff_t>(i);
        if (src >= 0 && src < static_cast<std::ptrdiff_t>(x.size()))
            out[i] = x[static_cast<std::size_t>(src)];
    }
    return out;
}

}  // namespace

std::vector<VoicedSegment> segment_voiced(const vuv::VoicingMask& mask, const AudioBuffer& x_d,
                                          const AudioBuffer& x_hi, const SegmenterOptions& opts) {
    if (mask.flags.size() != x_d.samples.size())
        throw std::invalid_argument("segment_voiced: mask/signal length mismatch");
    if (opts.seg_samples < 2) throw std::invalid_argument("segment_voiced: seg_samples too small");

    const std::size_t pad_d =
        static_cast<std::size_t>(std::llround(opts.pad * x_d.sample_rate));
    const std::size_t pad_hi =
        static_cast<std::size_t>(std::llround(opts.pad * x_hi.sample_rate));
    const double rate_ratio =
        static_cast<double>(x_hi.sample_rate) / static_cast<double>(x_d.sample_rate);

    std::vector<VoicedSegment> segments;
    const std::size_t n = mask.flags.size();
    std::size_t i = 0;
    while (i < n) {
        if (!mask.flags[i]) {
            ++i;
            continue;
        }
        std::size_t run_end = i;
        while (run_end < n && mask.flags[run_end]) ++run_end;
        const std::size_t run_len = run_end - i;

        // segment boundaries within [i, run_end)
        std::vector<std::size_t> bounds{i};
        const std::size_t full = run_len / opts.seg_samples;
        const std::size_t rem = run_len % opts.seg_samples;
        if (full == 0) {
            bounds.push_back(run_end);
        } else {
            for (std::size_t s = 1; s <= full; ++s) bounds.push_back(i + s * opts.seg_samples);
            if (rem == 0) {
                // nothing to add
            } else if (rem < opts.seg_samples / 2) {
                bounds.back() = run_end;  // merge short remainder into the last segment
            } else {
                bounds.push_back(run_end);
            }
        }

        for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
            VoicedSegment s;
            s.core_start = bounds[b];
            s.core_end = bounds[b + 1];
            s.pad_left = pad_d;
            s.pad_right = pad_d;
            s.padded = padded_slice(x_d.samples, s.core_start, s.core_end, pad_d);
            s.hi_start = static_cast<std::size_t>(std::llround(s.core_start * rate_ratio));
            s.hi_end = static_cast<std::size_t>(std::llround(s.core_end * rate_ratio));
            s.hi_pad = pad_hi;
            s.hi_padded = padded_slice(x_hi.samples, s.hi_start, s.hi_end, pad_hi);
            segments.push_back(std::move(s));
        }
        i = run_end;
    }
    return segments;
}

}  // namespace wvpitch::seg
