#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "wvpitch/vuv.hpp"

using namespace wvpitch;

namespace {

AudioBuffer half_silence_half_tone() {
    // 1 s at 800 Hz: first half zero, second half a unit-amplitude 100 Hz tone
    AudioBuffer x;
    x.sample_rate = 800;
    x.samples.assign(800, 0.0);
    const auto t = testsup::tone(100.0, 800, 0.5);
    for (std::size_t i = 0; i < 400; ++i) x.samples[400 + i] = t.samples[i];
    return x;
}

std::size_t count_voiced(const vuv::VoicingMask& m) {
    std::size_t n = 0;
    for (auto f : m.flags) n += f;
    return n;
}

}  // namespace

TEST_CASE("all-zero signal is entirely unvoiced") {
    AudioBuffer x;
    x.sample_rate = 800;
    x.samples.assign(800, 0.0);
    const auto mask = vuv::classify_vuv(x);
    REQUIRE(mask.flags.size() == x.samples.size());
    CHECK(count_voiced(mask) == 0);
}

TEST_CASE("half silence, half tone splits at the boundary") {
    // E = 0.25; silent frames 0 < 0.05 unvoiced, tone frames ~0.5 > 0.05 voiced
    const AudioBuffer x = half_silence_half_tone();
    const auto mask = vuv::classify_vuv(x);
    for (std::size_t i = 0; i < 400; ++i) CHECK(!mask.flags[i]);
    for (std::size_t i = 400; i < 800; ++i) CHECK(mask.flags[i]);
}

TEST_CASE("constant-amplitude tone is entirely voiced") {
    const auto x = testsup::tone(120.0, 800, 1.0);
    const auto mask = vuv::classify_vuv(x);
    CHECK(count_voiced(mask) == x.samples.size());
}

TEST_CASE("classification is invariant to positive scaling") {
    AudioBuffer x;
    x.sample_rate = 800;
    x.samples = testsup::random_signal(1600, 3);
    // silence a chunk so both classes appear
    for (std::size_t i = 500; i < 1100; ++i) x.samples[i] *= 0.01;

    AudioBuffer y = x;
    for (auto& v : y.samples) v *= 11.0;

    const auto a = vuv::classify_vuv(x);
    const auto b = vuv::classify_vuv(y);
    CHECK(a.flags == b.flags);
}

TEST_CASE("raising the threshold never grows the voiced set") {
    AudioBuffer x;
    x.sample_rate = 800;
    x.samples = testsup::random_signal(2400, 17);
    for (std::size_t i = 300; i < 900; ++i) x.samples[i] *= 0.05;
    for (std::size_t i = 1500; i < 1800; ++i) x.samples[i] *= 0.3;

    vuv::VuvOptions lo_opts, hi_opts;
    lo_opts.threshold_ratio = 0.15;
    hi_opts.threshold_ratio = 0.35;
    const auto lo = vuv::classify_vuv(x, lo_opts);
    const auto hi = vuv::classify_vuv(x, hi_opts);
    for (std::size_t i = 0; i < x.samples.size(); ++i)
        if (hi.flags[i]) CHECK(lo.flags[i]);
}

TEST_CASE("voicing boundaries land on the subframe grid") {
    // 800 Hz: frame 20 samples, subframe 4 samples. Energy switches on
    // mid-frame; the reported boundary must sit on a multiple of 4.
    AudioBuffer x;
    x.sample_rate = 800;
    x.samples.assign(800, 0.0);
    const auto t = testsup::tone(100.0, 800, 1.0);
    for (std::size_t i = 410; i < 800; ++i) x.samples[i] = t.samples[i];

    const auto mask = vuv::classify_vuv(x);
    std::size_t first_voiced = 800;
    for (std::size_t i = 0; i < 800; ++i)
        if (mask.flags[i]) { first_voiced = i; break; }
    REQUIRE(first_voiced < 800);
    CHECK(first_voiced % 4 == 0);
    CHECK(first_voiced >= 400);  // not before the energy exists
    CHECK(first_voiced <= 416);  // within a subframe of the true onset
}

TEST_CASE("trailing partial frame is classified at its actual length") {
    // 30 samples: one full 20-sample frame plus a 10-sample remainder with
    // all the energy
    AudioBuffer x;
    x.sample_rate = 800;
    x.samples.assign(30, 0.0);
    for (std::size_t i = 20; i < 30; ++i) x.samples[i] = 1.0;
    const auto mask = vuv::classify_vuv(x);
    for (std::size_t i = 0; i < 20; ++i) CHECK(!mask.flags[i]);
    for (std::size_t i = 20; i < 30; ++i) CHECK(mask.flags[i]);
}

TEST_CASE("errors: empty input and too-short frame") {
    AudioBuffer empty;
    empty.sample_rate = 800;
    CHECK_THROWS_AS(vuv::classify_vuv(empty), std::invalid_argument);

    AudioBuffer ok;
    ok.sample_rate = 800;
    ok.samples.assign(100, 1.0);
    vuv::VuvOptions opts;
    opts.frame = 0.001;  // under 2 samples at 800 Hz
    CHECK_THROWS_AS(vuv::classify_vuv(ok, opts), std::invalid_argument);
}
