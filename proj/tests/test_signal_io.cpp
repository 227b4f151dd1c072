#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "test_support.hpp"
#include "wvpitch/signal_io.hpp"

using namespace wvpitch;
using testsup::kPi;

namespace {

std::string temp_path(const std::string& name) {
    return "wvpitch_test_" + name;
}

// hand-built WAV with explicit bytes, independent of write_wav
void write_pcm16_wav(const std::string& path, const std::vector<int16_t>& interleaved,
                     uint16_t channels, uint32_t rate) {
    std::ofstream f(path, std::ios::binary);
    auto u32 = [&](uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
    auto u16 = [&](uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); };
    const uint32_t data_bytes = static_cast<uint32_t>(interleaved.size() * 2);
    f.write("RIFF", 4);
    u32(36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    u32(16);
    u16(1);  // PCM
    u16(channels);
    u32(rate);
    u32(rate * channels * 2);
    u16(static_cast<uint16_t>(channels * 2));
    u16(16);
    f.write("data", 4);
    u32(data_bytes);
    for (int16_t v : interleaved) f.write(reinterpret_cast<const char*>(&v), 2);
}

}  // namespace

TEST_CASE("one second of 16 kHz silence reads back as 16000 zeros") {
    const std::string path = temp_path("silence.wav");
    AudioBuffer x;
    x.sample_rate = 16000;
    x.samples.assign(16000, 0.0);
    io::write_wav(x, path);
    const AudioBuffer y = io::read_wav(path);
    REQUIRE(y.samples.size() == 16000);
    CHECK(y.sample_rate == 16000);
    for (double v : y.samples) CHECK(v == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("PCM16 full-scale sample maps to 32767/32768") {
    const std::string path = temp_path("pcm16.wav");
    write_pcm16_wav(path, {32767, -32768, 0, 16384}, 1, 8000);
    const AudioBuffer y = io::read_wav(path);
    REQUIRE(y.samples.size() == 4);
    CHECK(y.samples[0] == doctest::Approx(0.999969482421875).epsilon(1e-12));
    CHECK(y.samples[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(y.samples[2] == 0.0);
    CHECK(y.samples[3] == doctest::Approx(0.5).epsilon(1e-12));
    std::remove(path.c_str());
}

TEST_CASE("stereo file keeps channel 0 and warns") {
    const std::string path = temp_path("stereo.wav");
    write_pcm16_wav(path, {1000, -1000, 2000, -2000, 3000, -3000}, 2, 8000);
    std::string warning;
    const AudioBuffer y = io::read_wav(path, &warning);
    REQUIRE(y.samples.size() == 3);
    CHECK(y.samples[0] == doctest::Approx(1000.0 / 32768.0));
    CHECK(y.samples[1] == doctest::Approx(2000.0 / 32768.0));
    CHECK(y.samples[2] == doctest::Approx(3000.0 / 32768.0));
    CHECK(!warning.empty());
    std::remove(path.c_str());
}

TEST_CASE("read_wav error paths: missing file, bad encoding, zero length") {
    CHECK_THROWS_AS(io::read_wav("definitely_not_here.wav"), IoError);

    const std::string path = temp_path("badenc.wav");
    {
        // 8-bit PCM is unsupported
        std::ofstream f(path, std::ios::binary);
        auto u32 = [&](uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
        auto u16 = [&](uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); };
        f.write("RIFF", 4); u32(36); f.write("WAVE", 4);
        f.write("fmt ", 4); u32(16); u16(1); u16(1); u32(8000); u32(8000); u16(1); u16(8);
        f.write("data", 4); u32(0);
    }
    CHECK_THROWS_AS(io::read_wav(path), IoError);
    std::remove(path.c_str());

    const std::string path2 = temp_path("empty.wav");
    write_pcm16_wav(path2, {}, 1, 8000);
    CHECK_THROWS_AS(io::read_wav(path2), IoError);
    std::remove(path2.c_str());
}

TEST_CASE("float WAV round trip preserves samples to float precision") {
    const std::string path = temp_path("roundtrip.wav");
    AudioBuffer x;
    x.sample_rate = 800;
    x.samples = testsup::random_signal(321, 5);
    io::write_wav(x, path);
    const AudioBuffer y = io::read_wav(path);
    REQUIRE(y.samples.size() == x.samples.size());
    for (std::size_t i = 0; i < x.samples.size(); ++i)
        CHECK(y.samples[i] == doctest::Approx(x.samples[i]).epsilon(1e-7));
    std::remove(path.c_str());
}

TEST_CASE("chirp pair equals the sum of two independently synthesized chirps") {
    io::SynthSpec spec;
    spec.kind = io::SynthKind::chirp_pair;
    spec.sample_rate = 50;
    spec.chirp_rate = 5.0;
    spec.f0 = 3.0;
    spec.duration = 4.0;
    const AudioBuffer s = io::synth(spec);
    REQUIRE(s.samples.size() == 200);

    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        const double t = static_cast<double>(i) / 50.0;
        const double c1 = std::cos(kPi * 5.0 * t * t + 2.0 * kPi * 3.0 * t);
        const double c2 = std::cos(kPi * 5.0 * t * t);
        CHECK(s.samples[i] == c1 + c2);  // sample-exact
    }
}

TEST_CASE("chirp pair above Nyquist is rejected") {
    io::SynthSpec spec;
    spec.kind = io::SynthKind::chirp_pair;
    spec.sample_rate = 50;
    spec.chirp_rate = 7.0;  // 28 Hz + f0 at t=4 exceeds 25 Hz
    spec.f0 = 3.0;
    spec.duration = 4.0;
    CHECK_THROWS_AS(io::synth(spec), std::invalid_argument);
}

TEST_CASE("tone with f0=0 is a constant DC signal of amplitude 1") {
    io::SynthSpec spec;
    spec.kind = io::SynthKind::tone;
    spec.sample_rate = 1000;
    spec.f0 = 0.0;
    spec.duration = 0.25;
    const AudioBuffer s = io::synth(spec);
    REQUIRE(s.samples.size() == 250);
    for (double v : s.samples) CHECK(v == 1.0);
}

TEST_CASE("pulse train at 200 Hz has its cepstral peak at quefrency 80 (DFT oracle)") {
    io::SynthSpec spec;
    spec.kind = io::SynthKind::pulse_train;
    spec.sample_rate = 16000;
    spec.f0 = 200.0;
    spec.duration = 0.256;  // 4096 samples, keeps the naive DFT affordable
    const AudioBuffer s = io::synth(spec);
    REQUIRE(s.samples.size() == 4096);

    // test-local cepstrum built on the reference DFT
    auto spec_c = testsup::dft_real(s.samples);
    std::vector<testsup::cd> logmag(spec_c.size());
    for (std::size_t k = 0; k < spec_c.size(); ++k)
        logmag[k] = testsup::cd(std::log(std::abs(spec_c[k]) + 1e-12), 0.0);
    const auto cep = testsup::dft(logmag, true);

    std::size_t best = 50;
    for (std::size_t q = 50; q <= 200; ++q)
        if (cep[q].real() > cep[best].real()) best = q;
    CHECK(best == 80);
}

TEST_CASE("EGG sawtooth with 8 ms GCI spacing gives 125 Hz on all interior frames") {
    AudioBuffer egg;
    egg.sample_rate = 16000;
    egg.samples.resize(16000);
    const std::size_t period = 128;  // 8 ms
    for (std::size_t i = 0; i < egg.samples.size(); ++i)
        egg.samples[i] = static_cast<double>(i % period) / static_cast<double>(period);
    const PitchTrack track = io::extract_egg_ground_truth(egg, 0.010);

    std::size_t voiced = 0;
    for (const auto& fr : track.frames) {
        if (fr.time < 0.02 || fr.time > 0.97) continue;  // skip utterance edges
        REQUIRE(fr.voiced);
        CHECK(*fr.f0 == doctest::Approx(125.0).epsilon(0.004));  // +-0.5 Hz
        ++voiced;
    }
    CHECK(voiced > 90);
}

TEST_CASE("all-zero EGG yields an entirely unvoiced track") {
    AudioBuffer egg;
    egg.sample_rate = 16000;
    egg.samples.assign(8000, 0.0);
    const PitchTrack track = io::extract_egg_ground_truth(egg, 0.010);
    for (const auto& fr : track.frames) CHECK(!fr.voiced);
}

TEST_CASE("two GCIs 10 ms apart give 100 Hz between them and unvoiced elsewhere") {
    AudioBuffer egg;
    egg.sample_rate = 16000;
    egg.samples.assign(1600, 0.0);  // 100 ms
    // downward steps at 50 ms and 60 ms
    for (std::size_t i = 0; i < egg.samples.size(); ++i) {
        double v = 1.0;
        if (i >= 800) v = 0.5;
        if (i >= 960) v = 0.0;
        egg.samples[i] = v;
    }
    const PitchTrack track = io::extract_egg_ground_truth(egg, 0.010);
    for (const auto& fr : track.frames) {
        if (fr.time >= 0.050 && fr.time <= 0.060) {
            REQUIRE(fr.voiced);
            CHECK(*fr.f0 == doctest::Approx(100.0).epsilon(0.01));
        } else {
            CHECK(!fr.voiced);
        }
    }
}

TEST_CASE("EGG extraction is invariant to positive amplitude scaling") {
    AudioBuffer egg;
    egg.sample_rate = 16000;
    egg.samples.resize(12000);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    const std::size_t period = 160;
    for (std::size_t i = 0; i < egg.samples.size(); ++i)
        egg.samples[i] = static_cast<double>(i % period) / period + 0.02 * jitter(rng);

    AudioBuffer scaled = egg;
    for (auto& v : scaled.samples) v *= 7.5;

    const PitchTrack a = io::extract_egg_ground_truth(egg, 0.010);
    const PitchTrack b = io::extract_egg_ground_truth(scaled, 0.010);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        CHECK(a.frames[i].voiced == b.frames[i].voiced);
        if (a.frames[i].voiced) CHECK(*a.frames[i].f0 == *b.frames[i].f0);
    }
}

TEST_CASE("EGG extraction rejects bad arguments") {
    AudioBuffer empty;
    empty.sample_rate = 16000;
    CHECK_THROWS_AS(io::extract_egg_ground_truth(empty, 0.010), std::invalid_argument);
    AudioBuffer ok;
    ok.sample_rate = 16000;
    ok.samples.assign(100, 0.0);
    CHECK_THROWS_AS(io::extract_egg_ground_truth(ok, 0.0), std::invalid_argument);
}

TEST_CASE("track CSV format: voiced and unvoiced rows") {
    PitchTrack t;
    t.hop = 0.010;
    t.frames.push_back({0.0, std::nullopt, false});
    t.frames.push_back({0.010, 120.0, true});
    const std::string csv = io::track_to_csv(t);
    CHECK(csv == "time_s,f0_hz,voiced\n0.000000,,0\n0.010000,120.000000,1\n");
}

TEST_CASE("track CSV round trip of 1000 random frames") {
    PitchTrack t;
    t.hop = 0.010;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> f0(60.0, 400.0);
    std::bernoulli_distribution voiced(0.7);
    for (std::size_t i = 0; i < 1000; ++i) {
        PitchFrame fr;
        fr.time = static_cast<double>(i) * t.hop;
        fr.voiced = voiced(rng);
        if (fr.voiced) fr.f0 = f0(rng);
        t.frames.push_back(fr);
    }

    const std::string path = temp_path("track.csv");
    io::write_track(t, path);
    const PitchTrack u = io::read_track(path);
    REQUIRE(u.frames.size() == t.frames.size());
    CHECK(u.hop == doctest::Approx(t.hop).epsilon(1e-6));
    for (std::size_t i = 0; i < t.frames.size(); ++i) {
        CHECK(u.frames[i].voiced == t.frames[i].voiced);
        CHECK(u.frames[i].time == doctest::Approx(t.frames[i].time).epsilon(1e-6));
        if (t.frames[i].voiced)
            CHECK(*u.frames[i].f0 == doctest::Approx(*t.frames[i].f0).epsilon(1e-6));
    }
    std::remove(path.c_str());
}

TEST_CASE("track CSV rejects malformed input") {
    CHECK_THROWS_AS(io::track_from_csv(""), IoError);
    CHECK_THROWS_AS(io::track_from_csv("wrong,header,here\n"), IoError);
    CHECK_THROWS_AS(io::track_from_csv("time_s,f0_hz,voiced\n0.0,1\n"), IoError);
    CHECK_THROWS_AS(io::track_from_csv("time_s,f0_hz,voiced\n0.0,,1\n"), IoError);
    CHECK_THROWS_AS(io::track_from_csv("time_s,f0_hz,voiced\n0.0,100.0,0\n"), IoError);
    CHECK_THROWS_AS(io::track_from_csv("time_s,f0_hz,voiced\n0.0,abc,1\n"), IoError);
    CHECK_THROWS_AS(io::read_track("no_such_track.csv"), IoError);
}
