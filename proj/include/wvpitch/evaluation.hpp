#pragma once

#include <optional>
#include <vector>

#include "wvpitch/types.hpp"

namespace wvpitch::eval {

// An estimate frame paired with its nearest-in-time ground-truth frame.
struct FramePair {
    double time = 0.0;  // ground-truth frame time
    std::optional<double> gt_f0;
    std::optional<double> est_f0;
    bool gt_voiced = false;
    bool est_voiced = false;
};

// Maps every estimate frame to the nearest ground-truth frame; pairs half a
// ground-truth hop or farther apart are dropped. Both tracks must be
// non-empty and uniform-hop.
std::vector<FramePair> align(const PitchTrack& gt, const PitchTrack& est);

struct MaePve {
    double mae = 0.0;  // Hz, mean |gt - est| over mutually voiced pairs
    double pve = 0.0;  // Hz, population standard deviation of |gt - est|
};

// Restricted to pairs voiced in both tracks. Throws ProcessingError when no
// mutually voiced pairs exist.
MaePve mae_pve(const std::vector<FramePair>& pairs);

struct FfeResult {
    double ffe_percent = 0.0;
    std::size_t gpe_count = 0;  // both voiced and |est - gt| > 0.2 * gt
    std::size_t vde_count = 0;  // voicing flags disagree
};

// Over all pairs. A deviation of exactly 20% is not a gross pitch error.
FfeResult ffe(const std::vector<FramePair>& pairs);

struct EvalReport {
    double mae_hz = 0.0;
    double pve_hz = 0.0;
    double ffe_percent = 0.0;
    std::size_t gpe_count = 0;
    std::size_t vde_count = 0;
    std::size_t total_frames = 0;     // aligned pairs
    std::size_t compared_frames = 0;  // mutually voiced pairs
};

EvalReport evaluate(const PitchTrack& gt, const PitchTrack& est);

}  // namespace wvpitch::eval
