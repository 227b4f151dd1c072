#include "wvpitch/vuv.hpp"

#include <cmath>
#include <stdexcept>

namespace wvpitch::vuv {

VoicingMask classify_vuv(const AudioBuffer& x, const VuvOptions& opts) {
    if (x.samples.empty()) throw std::invalid_argument("classify_vuv: empty signal");
    const std::size_t frame_len =
        static_cast<std::size_t>(std::llround(opts.frame * x.sample_rate));
    if (frame_len < 2) throw std::invalid_argument("classify_vuv: frame shorter than 2 samples");
    const std::size_t sub_len = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(opts.subframe * x.sample_rate)));

    const std::size_t n = x.samples.size();
    double total = 0.0;
    for (double v : x.samples) total += v * v;
    const double threshold = opts.threshold_ratio * (total / static_cast<double>(n));

    auto mean_energy = [&](std::size_t begin, std::size_t end) {
        double e = 0.0;
        for (std::size_t i = begin; i < end; ++i) e += x.samples[i] * x.samples[i];
        return e / static_cast<double>(end - begin);
    };

    const std::size_t num_frames = (n + frame_len - 1) / frame_len;
    std::vector<bool> frame_voiced(num_frames);
    for (std::size_t f = 0; f < num_frames; ++f) {
        const std::size_t begin = f * frame_len;
        const std::size_t end = std::min(n, begin + frame_len);
        frame_voiced[f] = mean_energy(begin, end) > threshold;
    }

    VoicingMask mask;
    mask.sample_rate = x.sample_rate;
    mask.flags.assign(n, 0);

    for (std::size_t f = 0; f < num_frames; ++f) {
        if (!frame_voiced[f]) continue;
        const std::size_t begin = f * frame_len;
        const std::size_t end = std::min(n, begin + frame_len);
        const bool boundary = (f > 0 && !frame_voiced[f - 1]) ||
                              (f + 1 < num_frames && !frame_voiced[f + 1]);
        if (!boundary) {
            for (std::size_t i = begin; i < end; ++i) mask.flags[i] = 1;
            continue;
        }
        for (std::size_t s = begin; s < end; s += sub_len) {
            const std::size_t sub_end = std::min(end, s + sub_len);
            if (mean_energy(s, sub_end) > threshold)
                for (std::size_t i = s; i < sub_end; ++i) mask.flags[i] = 1;
        }
    }
    return mask;
}

}  // namespace wvpitch::vuv
