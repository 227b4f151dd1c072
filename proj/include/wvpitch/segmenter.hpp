#pragma once

#include <optional>
#include <vector>

#include "wvpitch/types.hpp"
#include "wvpitch/vuv.hpp"

namespace wvpitch::seg {

// A contiguous voiced region of the downsampled signal plus context padding,
// with the matching index range in the pre-downsampling signal.
struct VoicedSegment {
    std::size_t core_start = 0;  // [core_start, core_end) into the downsampled signal
    std::size_t core_end = 0;
    std::vector<double> padded;  // pad_left + core + pad_right samples at f_d
    std::size_t pad_left = 0;
    std::size_t pad_right = 0;
    std::optional<double> average_f0;  // filled by the pre-filter stage

    std::size_t hi_start = 0;  // same time span in the original-rate signal
    std::size_t hi_end = 0;
    std::vector<double> hi_padded;  // high-rate slice including context
    std::size_t hi_pad = 0;         // context samples per side at the high rate

    std::size_t core_length() const { return core_end - core_start; }
};

struct SegmenterOptions {
    std::size_t seg_samples = 120;  // ~150 ms at 800 Hz
    double pad = 0.020;             // s of context on each side
};

// Chops each maximal voiced run into consecutive segments of seg_samples;
// a trailing remainder shorter than seg_samples/2 merges into the previous
// segment, otherwise it stands alone. Context padding is taken from the
// signal regardless of voicing and zero-filled past the utterance boundary.
std::vector<VoicedSegment> segment_voiced(const vuv::VoicingMask& mask,
                                          const AudioBuffer& x_d,
                                          const AudioBuffer& x_hi,
                                          const SegmenterOptions& opts = {});

}  // namespace wvpitch::seg
