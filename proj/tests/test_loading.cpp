#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mvi/loading.hpp"
#include "mvi/model.hpp"

using namespace mvi;

// ============================================================================
// Parsing
// ============================================================================

TEST_CASE("two-column whitespace table") {
    const auto rec = parse_record("0.0 0.0\n0.02 1.5\n");
    REQUIRE(rec.times.size() == 2);
    CHECK(rec.times[0] == 0.0);
    CHECK(rec.times[1] == 0.02);
    CHECK(rec.values[0] == 0.0);
    CHECK(rec.values[1] == 1.5);
    CHECK_FALSE(rec.is_sine());
}

TEST_CASE("commas, extra blanks and comments are accepted") {
    const auto rec = parse_record("# generated\n\n0,1\n  0.5 ,  2.5\n\n1.0\t3\n");
    REQUIRE(rec.times.size() == 3);
    CHECK(rec.times[1] == 0.5);
    CHECK(rec.values[1] == 2.5);
    CHECK(rec.values[2] == 3.0);
}

TEST_CASE("non-monotonic time reports the physical line number") {
    // Line 1 is the header, data starts at line 2; the repeated time on
    // physical line 3 is the offender.
    try {
        (void)parse_record("# header\n0 1\n0 2\n");
        FAIL("expected NonMonotonicTime");
    } catch (const NonMonotonicTime& e) {
        CHECK(e.line_no == 3);
    }
}

TEST_CASE("malformed lines report the physical line number") {
    try {
        (void)parse_record("0 1\nnot numbers\n");
        FAIL("expected MalformedLine");
    } catch (const MalformedLine& e) {
        CHECK(e.line_no == 2);
    }
}

TEST_CASE("wrong column counts are malformed") {
    CHECK_THROWS_AS((void)parse_record("0 1 2\n"), MalformedLine);
    CHECK_THROWS_AS((void)parse_record("0\n"), MalformedLine);
    CHECK_THROWS_AS((void)parse_record("0 1x\n"), MalformedLine);
}

TEST_CASE("empty input throws EmptyRecord") {
    CHECK_THROWS_AS((void)parse_record(""), EmptyRecord);
    CHECK_THROWS_AS((void)parse_record("# only a comment\n\n"), EmptyRecord);
}

TEST_CASE("stream overload parses the same content") {
    std::istringstream is("0 1\n1 2\n");
    const auto rec = parse_record(is);
    CHECK(rec.times.size() == 2);
}

// ============================================================================
// Evaluation: analytic sine
// ============================================================================

TEST_CASE("sine sample at the first node") {
    // amplitude 1, omega 15, duration 30, scaled by 0.2; t = 0.02.
    ForcingRecord rec = sine_forcing(1.0, 15.0, 30.0);
    rec.scale = 0.2;
    const double expected = 0.2 * std::sin(0.3);
    CHECK(forcing_value(rec, 0.02, 1.0) == expected);
}

TEST_CASE("sine is zero outside its duration, inclusive at the end") {
    const ForcingRecord rec = sine_forcing(0.2, 15.0, 30.0);
    CHECK(forcing_value(rec, 35.0, 1.0) == 0.0);
    CHECK(forcing_value(rec, -0.5, 1.0) == 0.0);
    CHECK(forcing_value(rec, 30.0, 1.0) == 0.2 * std::sin(15.0 * 30.0));
}

// ============================================================================
// Evaluation: sampled records
// ============================================================================

TEST_CASE("linear interpolation at the midpoint") {
    const auto rec = sampled_forcing({0.0, 1.0}, {0.0, 2.0});
    CHECK(forcing_value(rec, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(forcing_value(rec, 0.25, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sampled records hit their samples exactly and vanish outside") {
    const auto rec = sampled_forcing({0.0, 0.5, 2.0}, {3.0, -1.0, 7.0});
    CHECK(record_value(rec, 0.0) == 3.0);
    CHECK(record_value(rec, 0.5) == -1.0);
    CHECK(record_value(rec, 2.0) == 7.0);
    CHECK(record_value(rec, -0.1) == 0.0);
    CHECK(record_value(rec, 2.1) == 0.0);
}

TEST_CASE("scale multiplies, ground acceleration flips sign and uses mass") {
    ForcingRecord rec = sampled_forcing({0.0, 1.0}, {0.0, 2.0});
    rec.scale = 3.0;
    CHECK(forcing_value(rec, 1.0, 10.0) == 6.0);

    rec.interpretation = ForcingInterpretation::GroundAcceleration;
    CHECK(forcing_value(rec, 1.0, 10.0) == -60.0);
}

TEST_CASE("per-step sampling takes interval-end values only") {
    const auto rec = sampled_forcing({0.0, 1.0}, {0.0, 4.0});
    const TimeGrid g{0.25, 4};
    const auto f = sample_forcing(rec, g, 1.0);
    REQUIRE(f.size() == 4);
    CHECK(f[0] == doctest::Approx(1.0));   // t = 0.25
    CHECK(f[1] == doctest::Approx(2.0));   // t = 0.50
    CHECK(f[2] == doctest::Approx(3.0));   // t = 0.75
    CHECK(f[3] == doctest::Approx(4.0));   // t = 1.00
}

TEST_CASE("sampling is linear in the record values") {
    std::mt19937 rng(42);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> times, va, vb, vsum;
    for (int i = 0; i <= 50; ++i) {
        times.push_back(0.013 * i);
        va.push_back(dist(rng));
        vb.push_back(dist(rng));
        vsum.push_back(2.0 * va.back() + 3.0 * vb.back());
    }
    const TimeGrid g{0.02, 30};
    const auto fa = sample_forcing(sampled_forcing(times, va), g, 1.0);
    const auto fb = sample_forcing(sampled_forcing(times, vb), g, 1.0);
    const auto fs = sample_forcing(sampled_forcing(times, vsum), g, 1.0);
    for (std::size_t r = 0; r < fs.size(); ++r) {
        CHECK(fs[r] == doctest::Approx(2.0 * fa[r] + 3.0 * fb[r]).epsilon(1e-13));
    }
}

// ============================================================================
// Round trip
// ============================================================================

TEST_CASE("export then parse reproduces samples bit-identically") {
    std::mt19937 rng(7);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> times, values;
    for (int i = 0; i < 100; ++i) {
        times.push_back(i * 0.02 + 1e-3 * std::abs(dist(rng)));
        values.push_back(dist(rng) * std::pow(10.0, dist(rng)));
    }
    std::sort(times.begin(), times.end());
    const auto rec = sampled_forcing(times, values);
    const auto back = parse_record(export_record(rec));
    REQUIRE(back.times.size() == rec.times.size());
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        CHECK(back.times[i] == rec.times[i]);
        CHECK(back.values[i] == rec.values[i]);
    }
}

// ============================================================================
// Pre-initial impulse
// ============================================================================

TEST_CASE("records on t >= 0 and sines carry no pre-initial impulse") {
    CHECK(pre_initial_impulse(sine_forcing(0.2, 15.0, 30.0), 1.0) == 0.0);
    CHECK(pre_initial_impulse(sampled_forcing({0.0, 1.0}, {5.0, 5.0}), 1.0) == 0.0);
}

TEST_CASE("declared pre_impulse passes through") {
    ForcingRecord rec = sine_forcing(0.2, 15.0, 30.0);
    rec.pre_impulse = 3.5;
    CHECK(pre_initial_impulse(rec, 1.0) == 3.5);
}

TEST_CASE("trapezoidal impulse of the t < 0 portion") {
    // Constant value 1 on [-1, 0]: integral 1.
    const auto rec = sampled_forcing({-1.0, 0.0}, {1.0, 1.0});
    CHECK(pre_initial_impulse(rec, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    // Record crossing t = 0: only the negative-time part counts.
    // Value ramps 0 -> 2 on [-1, 1]; on [-1, 0] the integral is 0.5.
    const auto cross = sampled_forcing({-1.0, 1.0}, {0.0, 2.0});
    CHECK(pre_initial_impulse(cross, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("record ending before t = 0 is not zero-padded to t = 0") {
    // Constant 1 on [-2, -1]; the record is zero on (-1, 0], so the impulse
    // is exactly the trapezoid over the sampled span.
    const auto rec = sampled_forcing({-2.0, -1.0}, {1.0, 1.0});
    CHECK(pre_initial_impulse(rec, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pre-initial impulse respects scale and interpretation") {
    ForcingRecord rec = sampled_forcing({-1.0, 0.0}, {1.0, 1.0});
    rec.scale = 2.0;
    CHECK(pre_initial_impulse(rec, 5.0) == doctest::Approx(2.0).epsilon(1e-14));
    rec.interpretation = ForcingInterpretation::GroundAcceleration;
    CHECK(pre_initial_impulse(rec, 5.0) == doctest::Approx(-10.0).epsilon(1e-14));
}

// ============================================================================
// Construction errors
// ============================================================================

TEST_CASE("sampled_forcing validates its table") {
    CHECK_THROWS_AS((void)sampled_forcing({}, {}), InvalidParams);
    CHECK_THROWS_AS((void)sampled_forcing({0.0, 0.0}, {1.0, 2.0}), InvalidParams);
    CHECK_THROWS_AS((void)sampled_forcing({1.0, 0.0}, {1.0, 2.0}), InvalidParams);
    CHECK_THROWS_AS((void)sampled_forcing({0.0}, {1.0, 2.0}), InvalidParams);
}

TEST_CASE("sine_forcing rejects non-finite values and negative duration") {
    CHECK_THROWS_AS((void)sine_forcing(1.0, 15.0, -1.0), InvalidParams);
    CHECK_THROWS_AS((void)sine_forcing(std::numeric_limits<double>::quiet_NaN(), 15.0, 1.0),
                    InvalidParams);
}
