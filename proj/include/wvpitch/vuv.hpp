#pragma once

#include <cstdint>
#include <vector>

#include "wvpitch/types.hpp"

namespace wvpitch::vuv {

// Per-sample voicing flags for the downsampled signal.
struct VoicingMask {
    int sample_rate = 0;
    std::vector<std::uint8_t> flags;  // 1 = voiced, same length as the signal
};

struct VuvOptions {
    double frame = 0.025;          // s
    double threshold_ratio = 0.2;  // of the utterance average energy
    double subframe = 0.005;       // s, boundary refinement resolution
};

// Energy-threshold voiced/unvoiced classification. E is the mean squared
// sample over the whole utterance; frames with mean energy above
// threshold_ratio * E are provisionally voiced. A provisionally voiced frame
// adjacent to an unvoiced one is re-classified at subframe resolution so
// voicing boundaries land on subframe edges; interior frames keep their
// frame-level label. The trailing partial frame is classified at its actual
// length.
VoicingMask classify_vuv(const AudioBuffer& x, const VuvOptions& opts = {});

}  // namespace wvpitch::vuv
