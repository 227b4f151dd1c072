#include "wvpitch/types.hpp"

#include <cmath>

namespace wvpitch {

void validate(const AudioBuffer& x) {
    if (x.sample_rate <= 0) throw std::invalid_argument("AudioBuffer: sample_rate must be positive");
    for (double v : x.samples)
        if (!std::isfinite(v)) throw std::invalid_argument("AudioBuffer: non-finite sample");
}

void validate(const PitchTrack& t) {
    for (const auto& fr : t.frames) {
        if (fr.voiced != fr.f0.has_value())
            throw std::invalid_argument("PitchTrack: f0 must be present iff voiced");
        if (fr.f0 && (!std::isfinite(*fr.f0) || *fr.f0 <= 0.0))
            throw std::invalid_argument("PitchTrack: voiced f0 must be finite and positive");
    }
    for (std::size_t i = 1; i < t.frames.size(); ++i) {
        const double dt = t.frames[i].time - t.frames[i - 1].time;
        if (dt <= 0.0) throw std::invalid_argument("PitchTrack: times must be strictly increasing");
        if (t.hop > 0.0 && std::abs(dt - t.hop) > 1e-6 * std::max(1.0, t.hop))
            throw std::invalid_argument("PitchTrack: non-uniform hop");
    }
}

}  // namespace wvpitch
