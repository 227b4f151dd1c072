#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wvpitch {

using cd = std::complex<double>;

/// Raised on file and stream problems (missing file, bad header, short read).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an algorithm cannot proceed on otherwise well-formed input
/// (e.g. a segment too short for cepstrum analysis, no mutually voiced frames).
class ProcessingError : public std::runtime_error {
public:
    explicit ProcessingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Uniformly sampled real signal. Amplitudes are dimensionless, nominally in
// [-1, 1] when read from a WAV file.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 0;  // Hz, > 0

    double duration() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

// Complex (analytic) signal, same length and rate as the real signal it was
// derived from.
struct ComplexBuffer {
    std::vector<cd> samples;
    int sample_rate = 0;
};

struct PitchFrame {
    double time = 0.0;            // seconds
    std::optional<double> f0;     // Hz; present iff voiced
    bool voiced = false;
};

// Time-stamped F0 values on a uniform hop. f0 is present iff the frame is
// voiced.
struct PitchTrack {
    double hop = 0.0;             // seconds
    std::vector<PitchFrame> frames;
};

void validate(const AudioBuffer& x);
void validate(const PitchTrack& t);

}  // namespace wvpitch
