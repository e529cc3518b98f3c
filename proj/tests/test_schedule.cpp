#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "dd/schedule.hpp"

using namespace dd;

namespace {

std::vector<double> pulse_ends(const Schedule& s) {
    std::vector<double> out;
    for (const auto& e : s.events)
        if (e.pulse.kind == PulseKind::physical) out.push_back(e.t_start + e.duration);
    return out;
}

}  // namespace

TEST_CASE("uniform layout places zero-width pulses at the fraction marks") {
    auto s = render(build("cpmg"), 1.0, 0.0, 0.0, 'a', 1);
    REQUIRE(s.events.size() == 2);
    CHECK(s.events[0].t_start == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.events[1].t_start == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.events[0].duration == 0.0);
    CHECK(validate(s).empty());

    // the universal cycle is pulse-first: its leading fraction is zero
    auto x = render(build("xy4"), 2.0, 0.0, 0.0, 'a', 1);
    auto ends = pulse_ends(x);
    REQUIRE(ends.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(ends[k] == doctest::Approx(0.5 * k).epsilon(1e-14));
}

TEST_CASE("width eats free time symmetrically around the marks") {
    double delta = 0.01;
    auto s = render(build("uddx2"), 1.0, delta, 0.0, 'a', 1);
    // pulses still end at their target times
    auto ends = pulse_ends(s);
    REQUIRE(ends.size() == 2);
    CHECK(ends[0] == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(ends[1] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(validate(s).empty());
    // even x-only order tops off with an identity hold of one width
    const auto& last = s.events.back();
    CHECK(last.pulse.kind == PulseKind::identity_wait);
    CHECK(last.t_start == doctest::Approx(1.0 - delta).epsilon(1e-13));
    CHECK(last.t_start + last.duration == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("symmetric padding equals asymmetric at zero extra delay") {
    for (const char* nm : {"cpmg", "xy4", "edd"}) {
        auto a = render(build(nm), 1.0, 0.002, 0.0, 'a', 2);
        auto b = render(build(nm), 1.0, 0.002, 0.0, 's', 2);
        REQUIRE(a.events.size() == b.events.size());
        for (size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].t_start == doctest::Approx(b.events[i].t_start).epsilon(1e-14));
            CHECK(a.events[i].duration == b.events[i].duration);
        }
    }
    // nonzero d separates the two conventions: 's' centers the block
    double d = 0.1;
    auto a = render(build("hahn"), 1.0, 0.0, d, 'a', 1);
    auto s = render(build("hahn"), 1.0, 0.0, d, 's', 1);
    CHECK(s.events[0].t_start == doctest::Approx(a.events[0].t_start + d / 2).epsilon(1e-13));
}

TEST_CASE("block repetition tiles the base cycle") {
    auto s = render(build("cpmg"), 1.0, 0.0, 0.0, 'a', 4);
    auto ends = pulse_ends(s);
    REQUIRE(ends.size() == 8);
    for (int k = 0; k < 4; ++k) {
        CHECK(ends[2 * k] == doctest::Approx((k + 0.25) / 4).epsilon(1e-13));
        CHECK(ends[2 * k + 1] == doctest::Approx((k + 0.75) / 4).epsilon(1e-13));
    }
    CHECK(s.reps == 4);
    CHECK(validate(s).empty());
}

TEST_CASE("over-packing throws instead of emitting a broken schedule") {
    CHECK_THROWS_AS(render(build("xy4"), 0.001, 0.1, 0.0, 'a', 1), std::invalid_argument);
    CHECK_THROWS_AS(render(build("cpmg"), 1.0, 0.0, 0.6, 'a', 1), std::invalid_argument);
    CHECK_THROWS_AS(render(build("xy4"), 1.0, 0.01, 0.0, 'a', 10000), std::invalid_argument);
}

TEST_CASE("largest admissible delay") {
    CHECK(max_delay(build("cpmg"), 1.0, 0.005) == doctest::Approx(0.495).epsilon(1e-14));
    CHECK(max_delay(build("xy4"), 1.0, 0.005) == doctest::Approx(0.245).epsilon(1e-14));
    // the limit itself renders, a hair above does not
    double dm = max_delay(build("xy4"), 1.0, 0.005);
    CHECK_NOTHROW(render(build("xy4"), 1.0, 0.005, dm, 'a', 1));
    CHECK_THROWS_AS(render(build("xy4"), 1.0, 0.005, dm * (1 + 1e-6), 'a', 1),
                    std::invalid_argument);
}

TEST_CASE("timed layout ends pulses at the scheduled instants") {
    double delta = 0.004;
    auto seq = build("uddx3");
    auto s = render_udd_family(seq, 2.0, delta);
    auto ends = pulse_ends(s);
    auto want = uhrig_times(3, 2.0);
    REQUIRE(ends.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i)
        CHECK(ends[i] == doctest::Approx(want[i]).epsilon(1e-13));
    CHECK(validate(s).empty());

    // nested entries keep their frame steps instantaneous
    auto q = render_udd_family(build("qdd33"), 1.0, 0.002);
    int nz = 0;
    for (const auto& e : q.events)
        if (e.pulse.kind == PulseKind::virtual_z) {
            CHECK(e.duration == 0.0);
            ++nz;
        }
    CHECK(nz == 4);
    CHECK(validate(q).empty());
}

TEST_CASE("validation flags overlapping and out-of-window events") {
    Schedule s;
    s.T = 1.0;
    Event a;
    a.t_start = 0.2;
    a.duration = 0.2;
    Event b;
    b.t_start = 0.3;
    b.duration = 0.1;
    s.events = {a, b};
    CHECK_FALSE(validate(s).empty());

    Schedule o;
    o.T = 1.0;
    Event c;
    c.t_start = 0.95;
    c.duration = 0.2;
    o.events = {c};
    CHECK_FALSE(validate(o).empty());
}
