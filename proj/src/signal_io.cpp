#include "wvpitch/signal_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

namespace wvpitch::io {

namespace {

constexpr double kPi = std::numbers::pi;

uint32_t read_u32(std::istream& s) {
    unsigned char b[4];
    s.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& s) {
    unsigned char b[2];
    s.read(reinterpret_cast<char*>(b), 2);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& s, uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    s.write(b, 4);
}

void write_u16(std::ostream& s, uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    s.write(b, 2);
}

}  // namespace

AudioBuffer read_wav(const std::string& path, std::string* warning) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);

    char tag[4];
    f.read(tag, 4);
    if (!f || std::memcmp(tag, "RIFF", 4) != 0) throw IoError(path + ": not a RIFF file");
    read_u32(f);  // riff size
    f.read(tag, 4);
    if (!f || std::memcmp(tag, "WAVE", 4) != 0) throw IoError(path + ": not a WAVE file");

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    bool have_fmt = false;
    std::vector<char> data;

    while (f.read(tag, 4)) {
        uint32_t chunk_size = read_u32(f);
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            format = read_u16(f);
            channels = read_u16(f);
            rate = read_u32(f);
            read_u32(f);  // byte rate
            read_u16(f);  // block align
            bits = read_u16(f);
            if (chunk_size > 16) f.seekg(chunk_size - 16, std::ios::cur);
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            data.resize(chunk_size);
            f.read(data.data(), chunk_size);
            if (static_cast<uint32_t>(f.gcount()) != chunk_size)
                throw IoError(path + ": truncated data chunk");
            break;
        } else {
            f.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
        }
        if (!f) throw IoError(path + ": malformed chunk layout");
    }

    if (!have_fmt) throw IoError(path + ": missing fmt chunk");
    if (channels == 0 || rate == 0) throw IoError(path + ": bad fmt chunk");
    const bool pcm16 = (format == 1 && bits == 16);
    const bool float32 = (format == 3 && bits == 32);
    if (!pcm16 && !float32)
        throw IoError(path + ": unsupported encoding (need PCM16 or float32)");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    const std::size_t num_frames = data.size() / frame_bytes;
    if (num_frames == 0) throw IoError(path + ": zero-length audio");

    if (channels > 1 && warning)
        *warning = path + ": " + std::to_string(channels) + " channels, keeping channel 0";

    AudioBuffer out;
    out.sample_rate = static_cast<int>(rate);
    out.samples.resize(num_frames);
    for (std::size_t i = 0; i < num_frames; ++i) {
        const char* p = data.data() + i * frame_bytes;  // channel 0
        if (pcm16) {
            int16_t v;
            std::memcpy(&v, p, 2);
            out.samples[i] = static_cast<double>(v) / 32768.0;
        } else {
            float v;
            std::memcpy(&v, p, 4);
            out.samples[i] = static_cast<double>(v);
        }
    }
    return out;
}

void write_wav(const AudioBuffer& x, const std::string& path) {
    validate(x);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot create " + path);

    const uint32_t data_bytes = static_cast<uint32_t>(x.samples.size() * 4);
    f.write("RIFF", 4);
    write_u32(f, 4 + 8 + 16 + 8 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    write_u32(f, 16);
    write_u16(f, 3);  // IEEE float
    write_u16(f, 1);
    write_u32(f, static_cast<uint32_t>(x.sample_rate));
    write_u32(f, static_cast<uint32_t>(x.sample_rate) * 4);
    write_u16(f, 4);
    write_u16(f, 32);
    f.write("data", 4);
    write_u32(f, data_bytes);
    for (double s : x.samples) {
        float v = static_cast<float>(s);
        f.write(reinterpret_cast<const char*>(&v), 4);
    }
    if (!f) throw IoError("write failed: " + path);
}

AudioBuffer synth(const SynthSpec& spec) {
    if (spec.duration <= 0.0) throw std::invalid_argument("synth: duration must be positive");
    if (spec.sample_rate <= 0) throw std::invalid_argument("synth: sample rate must be positive");
    const double nyq = 0.5 * spec.sample_rate;
    const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration * spec.sample_rate));
    if (n == 0) throw std::invalid_argument("synth: zero-length signal");

    AudioBuffer out;
    out.sample_rate = spec.sample_rate;
    out.samples.resize(n);

    const double fs = spec.sample_rate;
    const double k = spec.chirp_rate;

    switch (spec.kind) {
        case SynthKind::chirp_pair: {
            // max instantaneous frequencies: k*T and k*T + f0
            const double f_max = std::max(k * spec.duration + spec.f0, k * spec.duration);
            const double f_min = std::min(spec.f0, 0.0);
            if (f_max > nyq || f_min < 0.0)
                throw std::invalid_argument("synth: chirp exceeds Nyquist within duration");
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs;
                out.samples[i] = std::cos(kPi * k * t * t + 2.0 * kPi * spec.f0 * t) +
                                 std::cos(kPi * k * t * t);
            }
            break;
        }
        case SynthKind::tone: {
            if (spec.f0 < 0.0 || spec.f0 > nyq)
                throw std::invalid_argument("synth: tone exceeds Nyquist");
            for (std::size_t i = 0; i < n; ++i)
                out.samples[i] = std::cos(2.0 * kPi * spec.f0 * static_cast<double>(i) / fs);
            break;
        }
        case SynthKind::pulse_train: {
            if (spec.f0 <= 0.0) throw std::invalid_argument("synth: pulse train needs f0 > 0");
            const double f_end = spec.f0 + k * spec.duration;
            if (spec.f0 > nyq || f_end > nyq || f_end <= 0.0)
                throw std::invalid_argument("synth: pulse rate exceeds Nyquist within duration");
            std::vector<double> impulses(n, 0.0);
            if (k == 0.0) {
                const std::size_t period = static_cast<std::size_t>(std::llround(fs / spec.f0));
                for (std::size_t i = 0; i < n; i += period) impulses[i] = 1.0;
            } else {
                // phase accumulator: pulse whenever integrated frequency
                // crosses an integer
                double phase = 1.0;  // pulse at t = 0
                for (std::size_t i = 0; i < n; ++i) {
                    if (phase >= 1.0) {
                        phase -= 1.0;
                        impulses[i] = 1.0;
                    }
                    const double t = static_cast<double>(i) / fs;
                    phase += (spec.f0 + k * t) / fs;
                }
            }
            // short decaying kernel gives the train a rich harmonic spectrum
            const std::size_t klen = std::max<std::size_t>(2, static_cast<std::size_t>(fs * 0.002));
            std::vector<double> kernel(klen);
            for (std::size_t i = 0; i < klen; ++i)
                kernel[i] = std::exp(-3.0 * static_cast<double>(i) / static_cast<double>(klen));
            for (std::size_t i = 0; i < n; ++i) {
                if (impulses[i] == 0.0) continue;
                for (std::size_t j = 0; j < klen && i + j < n; ++j)
                    out.samples[i + j] += kernel[j];
            }
            break;
        }
    }
    return out;
}

PitchTrack extract_egg_ground_truth(const AudioBuffer& egg, double hop, const EggOptions& opts) {
    if (egg.samples.empty()) throw std::invalid_argument("egg: empty signal");
    if (hop <= 0.0) throw std::invalid_argument("egg: hop must be positive");

    const std::size_t n = egg.samples.size();
    const double fs = egg.sample_rate;

    // first difference scaled by the sample rate
    std::vector<double> degg(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) degg[i] = (egg.samples[i] - egg.samples[i - 1]) * fs;

    std::vector<double> mag(degg.begin(), degg.end());
    for (auto& v : mag) v = std::abs(v);
    std::nth_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(n / 2), mag.end());
    const double threshold = opts.prominence_ratio * mag[n / 2];

    // prominent negative peaks of dEGG mark glottal closure instants
    std::vector<double> gci;  // seconds
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (degg[i] >= -threshold) continue;
        if (degg[i] <= degg[i - 1] && degg[i] <= degg[i + 1]) {
            const double t = static_cast<double>(i) / fs;
            if (!gci.empty() && t - gci.back() < opts.min_interval) {
                if (degg[i] < degg[static_cast<std::size_t>(std::llround(gci.back() * fs))])
                    gci.back() = t;  // keep the deeper of two near-coincident peaks
                continue;
            }
            gci.push_back(t);
        }
    }

    PitchTrack track;
    track.hop = hop;
    const double duration = static_cast<double>(n) / fs;
    const std::size_t num_frames = static_cast<std::size_t>(std::floor(duration / hop)) + 1;
    track.frames.resize(num_frames);

    std::size_t g = 0;
    for (std::size_t i = 0; i < num_frames; ++i) {
        const double t = static_cast<double>(i) * hop;
        PitchFrame& fr = track.frames[i];
        fr.time = t;
        while (g + 1 < gci.size() && gci[g + 1] < t) ++g;
        if (gci.size() >= 2 && g + 1 < gci.size() && gci[g] <= t && t <= gci[g + 1]) {
            const double interval = gci[g + 1] - gci[g];
            if (interval <= opts.max_interval && interval >= opts.min_interval) {
                fr.voiced = true;
                fr.f0 = 1.0 / interval;
            }
        }
    }
    return track;
}

std::string track_to_csv(const PitchTrack& track) {
    std::ostringstream os;
    os << "time_s,f0_hz,voiced\n";
    char line[96];
    for (const auto& fr : track.frames) {
        if (fr.voiced)
            std::snprintf(line, sizeof line, "%.6f,%.6f,1\n", fr.time, *fr.f0);
        else
            std::snprintf(line, sizeof line, "%.6f,,0\n", fr.time);
        os << line;
    }
    return os.str();
}

void write_track(const PitchTrack& track, const std::string& path) {
    validate(track);
    std::ofstream f(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!f) throw IoError("cannot create " + path);
    f << track_to_csv(track);
    if (!f) throw IoError("write failed: " + path);
}

PitchTrack track_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw IoError("track csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time_s,f0_hz,voiced") throw IoError("track csv: bad header: " + line);

    PitchTrack track;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw IoError("track csv: malformed line " + std::to_string(lineno));
        PitchFrame fr;
        try {
            fr.time = std::stod(line.substr(0, c1));
            const std::string f0s = line.substr(c1 + 1, c2 - c1 - 1);
            const std::string vs = line.substr(c2 + 1);
            fr.voiced = (vs == "1");
            if (!fr.voiced && vs != "0")
                throw IoError("track csv: bad voiced flag at line " + std::to_string(lineno));
            if (fr.voiced) {
                if (f0s.empty())
                    throw IoError("track csv: voiced frame without f0 at line " + std::to_string(lineno));
                fr.f0 = std::stod(f0s);
            } else if (!f0s.empty()) {
                throw IoError("track csv: unvoiced frame with f0 at line " + std::to_string(lineno));
            }
        } catch (const std::invalid_argument&) {
            throw IoError("track csv: malformed number at line " + std::to_string(lineno));
        }
        track.frames.push_back(fr);
    }
    if (track.frames.size() >= 2) track.hop = track.frames[1].time - track.frames[0].time;
    validate(track);
    return track;
}

PitchTrack read_track(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return track_from_csv(ss.str());
}

}  // namespace wvpitch::io
