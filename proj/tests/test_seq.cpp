#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dd/dynamics.hpp"
#include "dd/seq.hpp"

using namespace dd;

namespace {

std::vector<double> phis(const SequenceIR& s) {
    std::vector<double> out;
    for (const auto& p : s.pulses) out.push_back(p.phi);
    return out;
}

// chronological product of the ideal zero-width pulses
Mat ideal_closure(const SequenceIR& s) {
    PulseErrorModel pe;
    Mat U = Mat::Identity(2, 2);
    for (const auto& p : s.pulses) U = ideal_pulse_unitary(p, pe) * U;
    return U;
}

constexpr double kPi2 = PI / 2;

}  // namespace

TEST_CASE("catalog lists the sixty surveyed sequences") {
    auto cat = catalog();
    CHECK(cat.size() == 60);
    std::set<std::string> names(cat.begin(), cat.end());
    CHECK(names.size() == 60);
    for (const char* nm :
         {"hahn", "super_hahn", "rga2y", "cpmg", "super_cpmg", "xy4", "cdd2", "cdd3", "cdd4",
          "cdd5", "edd", "super_euler", "kdd", "rga4", "rga4p", "rga8a", "rga16b", "rga32a",
          "rga32c", "rga64a", "rga64c", "rga256a", "ur6", "ur10", "ur20", "ur50", "ur100",
          "uddx1", "uddx5", "uddx9", "qdd11", "qdd36", "qdd46"})
        CHECK_MESSAGE(names.count(nm) == 1, nm);
    // no aliases in the listing, and every entry resolves to itself
    for (const char* alias : {"xy8", "rga8c", "cdd1", "ur2", "rga2x", "px", "py", "free"})
        CHECK(names.count(alias) == 0);
    for (const auto& nm : cat) CHECK(build(nm).name == nm);
}

TEST_CASE("aliases resolve to their canonical entries") {
    CHECK(build("rga2x").name == "super_hahn");
    CHECK(build("rga8c").name == "edd");
    CHECK(build("xy8").name == "edd");
    CHECK(build("cdd1").name == "xy4");
    CHECK(build("ur2").name == "cpmg");
}

TEST_CASE("name parsing ignores case and surrounding space") {
    CHECK(build("XY4").name == "xy4");
    CHECK(build(" xy4 ").name == "xy4");
    CHECK(build("Xy4").name == "xy4");
    CHECK(build("UR6").name == "ur6");
    CHECK(build("UddX3").name == "uddx3");
    CHECK(build("QDD33").name == "qdd33");
}

TEST_CASE("unknown names and out-of-range orders throw") {
    CHECK_THROWS_AS(build("nope"), std::invalid_argument);
    CHECK_THROWS_AS(build("ur3"), std::invalid_argument);
    CHECK_THROWS_AS(build("ur0"), std::invalid_argument);
    CHECK_THROWS_AS(build("uddx0"), std::invalid_argument);
    CHECK_THROWS_AS(build("uddx26"), std::invalid_argument);
    CHECK_THROWS_AS(build("qdd10"), std::invalid_argument);
    CHECK_THROWS_AS(build("qdd17"), std::invalid_argument);
    CHECK_THROWS_AS(build("cdd0"), std::invalid_argument);
    CHECK_THROWS_AS(build("cdd6"), std::invalid_argument);
}

TEST_CASE("basic echo pulse lists") {
    auto hahn = build("hahn");
    REQUIRE(hahn.pulses.size() == 1);
    CHECK(hahn.pulses[0].phi == 0.0);
    CHECK(hahn.pulses[0].theta == PI);
    CHECK(hahn.fractions == std::vector<double>{0.5, 0.5});

    auto cpmg = build("cpmg");
    REQUIRE(cpmg.pulses.size() == 2);
    CHECK(phis(cpmg) == std::vector<double>{0.0, 0.0});
    CHECK(cpmg.fractions == std::vector<double>{0.25, 0.5, 0.25});

    auto xy4 = build("xy4");
    CHECK(phis(xy4) == std::vector<double>{kPi2, 0.0, kPi2, 0.0});
    CHECK(xy4.universal);
    CHECK(xy4.fractions == std::vector<double>{0.0, 0.25, 0.25, 0.25, 0.25});

    auto edd = build("edd");
    CHECK(phis(edd) == std::vector<double>{0, kPi2, 0, kPi2, kPi2, 0, kPi2, 0});
}

TEST_CASE("barred-pulse families carry the sign flag") {
    auto sh = build("super_hahn");
    REQUIRE(sh.pulses.size() == 2);
    CHECK(sh.pulses[0].sign == +1);
    CHECK(sh.pulses[1].sign == -1);
    CHECK(phis(sh) == std::vector<double>{0.0, 0.0});

    auto r2y = build("rga2y");
    CHECK(phis(r2y) == std::vector<double>{kPi2, kPi2});
    CHECK(r2y.pulses[1].sign == -1);

    auto r4 = build("rga4");
    CHECK(phis(r4) == std::vector<double>{kPi2, 0, kPi2, 0});
    CHECK(r4.pulses[0].sign == -1);
    CHECK(r4.pulses[1].sign == +1);
    CHECK(r4.pulses[2].sign == -1);

    // the doubled euler cycle is the plain one followed by its barred copy
    auto se = build("super_euler");
    auto ed = build("edd");
    REQUIRE(se.pulses.size() == 16);
    for (int i = 0; i < 8; ++i) {
        CHECK(se.pulses[i].phi == ed.pulses[i].phi);
        CHECK(se.pulses[i].sign == +1);
        CHECK(se.pulses[i + 8].phi == ed.pulses[i].phi);
        CHECK(se.pulses[i + 8].sign == -1);
    }
}

TEST_CASE("composite block offsets") {
    for (double base : {0.0, 1.1}) {
        auto blk = kdd_block(base);
        REQUIRE(blk.size() == 5);
        const double off[5] = {PI / 6, 0, kPi2, 0, PI / 6};
        for (int i = 0; i < 5; ++i) CHECK(blk[i].phi == doctest::Approx(base + off[i]).epsilon(1e-15));
    }
    // the 20-pulse catalog entry is two (K_{pi/2}, K_0) rounds
    auto kdd = build("kdd");
    REQUIRE(kdd.pulses.size() == 20);
    auto ky = kdd_block(kPi2);
    auto kx = kdd_block(0.0);
    for (int r = 0; r < 2; ++r)
        for (int i = 0; i < 5; ++i) {
            CHECK(kdd.pulses[10 * r + i].phi == ky[i].phi);
            CHECK(kdd.pulses[10 * r + 5 + i].phi == kx[i].phi);
        }
}

TEST_CASE("universally robust phase schedule") {
    CHECK(ur_phases(2) == std::vector<double>{0.0, 0.0});
    CHECK(ur_phases(4) == std::vector<double>{0.0, kPi2, 0.0, kPi2});

    auto u6 = ur_phases(6);
    REQUIRE(u6.size() == 6);
    CHECK(u6[0] == 0.0);
    CHECK(u6[1] == doctest::Approx(kPi2).epsilon(1e-14));
    CHECK(u6[2] == doctest::Approx(5 * PI / 3).epsilon(1e-14));
    CHECK(u6[3] == doctest::Approx(3 * PI / 2).epsilon(1e-14));
    CHECK(u6[4] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(u6[5] == doctest::Approx(7 * PI / 6).epsilon(1e-14));

    // the schedule is a discrete parabola: constant second difference 2 pi m / n
    for (int n : {8, 10, 20, 50, 100}) {
        auto u = ur_phases(n);
        REQUIRE(int(u.size()) == n);
        CHECK(u[0] == 0.0);
        auto wrap = [](double x) {
            double s = std::fmod(x, 2 * PI);
            return s < 0 ? s + 2 * PI : s;
        };
        double d2 = wrap(u[2] - 2 * u[1] + u[0]);
        for (int k = 1; k + 1 < n; ++k)
            CHECK(wrap(u[k + 1] - 2 * u[k] + u[k - 1]) == doctest::Approx(d2).epsilon(1e-10));
        double m = d2 * n / (2 * PI);
        CHECK(m == doctest::Approx(std::round(m)).epsilon(1e-9));
        CHECK(std::round(m) >= 1);
    }
    CHECK_THROWS_AS(ur_phases(5), std::invalid_argument);
    CHECK_THROWS_AS(ur_phases(0), std::invalid_argument);

    // catalog entries carry exactly these phases
    for (int n : {6, 10, 20, 50, 100}) {
        auto s = build("ur" + std::to_string(n));
        CHECK(phis(s) == ur_phases(n));
        CHECK(s.uniform);
    }
}

TEST_CASE("non-uniform pulse times") {
    SUBCASE("odd orders end with a pulse at T") {
        auto t3 = uhrig_times(3, 1.0);
        REQUIRE(t3.size() == 4);
        CHECK(t3[0] == doctest::Approx(0.14644660940672624).epsilon(1e-15));
        CHECK(t3[1] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(t3[2] == doctest::Approx(0.85355339059327373).epsilon(1e-15));
        CHECK(t3[3] == 1.0);
    }
    SUBCASE("even orders do not") {
        auto t4 = uhrig_times(4, 2.0);
        REQUIRE(t4.size() == 4);
        for (int j = 1; j <= 4; ++j) {
            double want = 2.0 * std::pow(std::sin(j * PI / 10.0), 2);
            CHECK(t4[j - 1] == doctest::Approx(want).epsilon(1e-14));
        }
    }
    SUBCASE("sine-squared law holds through order 25") {
        for (int n = 1; n <= 25; ++n) {
            auto t = uhrig_times(n, 1.0);
            REQUIRE(int(t.size()) == (n % 2 ? n + 1 : n));
            for (size_t j = 1; j <= t.size(); ++j) {
                double want = std::pow(std::sin(j * PI / (2 * n + 2)), 2);
                CHECK(std::abs(t[j - 1] - want) < 1e-14);
            }
        }
    }
    SUBCASE("normalized intervals") {
        auto u2 = udd_normalized_intervals(2);
        REQUIRE(u2.size() == 3);
        CHECK(u2[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(u2[1] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(u2[2] == doctest::Approx(1.0).epsilon(1e-14));
        for (int n : {3, 7, 12}) {
            auto s = udd_normalized_intervals(n);
            REQUIRE(int(s.size()) == n + 1);
            double csc = 1.0 / std::sin(PI / (2 * n + 2));
            for (int j = 1; j <= n + 1; ++j)
                CHECK(s[j - 1] == doctest::Approx(std::sin((2 * j - 1) * PI / (2 * n + 2)) * csc)
                                      .epsilon(1e-13));
            // intervals are the consecutive gaps of the pulse-time law
            auto t = uhrig_times(n, 1.0);
            std::vector<double> gaps;
            double prev = 0;
            for (double v : t) {
                gaps.push_back(v - prev);
                prev = v;
            }
            if (n % 2 == 0) gaps.push_back(1.0 - prev);
            for (int j = 0; j <= n; ++j)
                CHECK(gaps[j] / gaps[0] == doctest::Approx(s[j] / s[0]).epsilon(1e-12));
        }
        CHECK_THROWS_AS(uhrig_times(0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("udd-family entries are timed, others are not") {
    auto u = build("uddx3");
    CHECK(u.timed());
    CHECK_FALSE(u.uniform);
    CHECK(phis(u) == std::vector<double>{0, 0, 0, 0});
    CHECK(u.times == uhrig_times(3, 1.0));
    for (const char* nm : {"xy4", "kdd", "ur6", "cdd3"}) CHECK_FALSE(build(nm).timed());
}

TEST_CASE("nested outer-Y inner-X construction") {
    SUBCASE("even inner order keeps every pulse physical") {
        auto q = build("qdd22");
        REQUIRE(q.pulses.size() == 8);
        // outer pulses sit at the order-2 times, inner fill every interval
        std::vector<double> outer = uhrig_times(2, 1.0);
        int y_seen = 0;
        for (size_t k = 0; k < q.pulses.size(); ++k) {
            CHECK(q.pulses[k].kind == PulseKind::physical);
            if (q.pulses[k].phi == kPi2) {
                ++y_seen;
                bool at_outer = false;
                for (double v : outer) at_outer |= std::abs(q.times[k] - v) < 1e-14;
                CHECK(at_outer);
            }
        }
        CHECK(y_seen == 2);
        // first interval scaled inner law
        CHECK(q.times[0] == doctest::Approx(0.25 * std::pow(std::sin(PI / 6), 2)).epsilon(1e-14));
        CHECK(q.times[1] == doctest::Approx(0.25 * std::pow(std::sin(2 * PI / 6), 2)).epsilon(1e-14));
    }
    SUBCASE("odd inner order merges the coincident pair into a frame step") {
        auto q = build("qdd33");
        REQUIRE(q.pulses.size() == 20);
        int nz = 0, nw = 0, ny = 0;
        for (size_t k = 0; k < q.pulses.size(); ++k) {
            if (q.pulses[k].kind == PulseKind::virtual_z) ++nz;
            if (q.pulses[k].kind == PulseKind::identity_wait) ++nw;
            if (q.pulses[k].kind == PulseKind::physical && q.pulses[k].phi != 0.0) ++ny;
        }
        CHECK(nz == 4);
        CHECK(nw == 4);
        CHECK(ny == 0);  // every outer pulse coincides and is absorbed
        // times never decrease
        for (size_t k = 1; k < q.times.size(); ++k) CHECK(q.times[k] >= q.times[k - 1] - 1e-15);
    }
    SUBCASE("qdd accessor matches the catalog") {
        auto a = qdd(4, 5, 1.0);
        auto b = build("qdd45");
        REQUIRE(a.pulses.size() == b.pulses.size());
        CHECK(a.times == b.times);
    }
}

TEST_CASE("concatenation multiplies the pulse budget") {
    auto xy4 = build("xy4");
    CHECK(build("cdd2").pulses.size() == 20);
    CHECK(build("cdd3").pulses.size() == 84);
    CHECK(build("cdd4").pulses.size() == 340);
    CHECK(build("cdd5").pulses.size() == 1364);
    auto c2 = concat(xy4, xy4);
    CHECK(c2.pulses.size() == build("cdd2").pulses.size());
    CHECK(phis(c2) == phis(build("cdd2")));
}

TEST_CASE("interval fractions always sum to one") {
    for (const char* nm : {"hahn", "cpmg", "xy4", "edd", "kdd", "ur10", "cdd3", "cdd5"}) {
        auto s = build(nm);
        REQUIRE(s.fractions.size() == s.pulses.size() + 1);
        double sum = 0;
        for (double f : s.fractions) sum += f;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ideal pulse algebra closes the advertised way") {
    // one cycle of a universal sequence is the identity up to phase
    for (const char* nm : {"xy4", "edd", "kdd", "cdd2", "super_euler"})
        CHECK_MESSAGE(phase_dist(ideal_closure(build(nm)), Mat(Mat::Identity(2, 2))) < 1e-12, nm);
    // a single echo is the pulse itself
    CHECK(phase_dist(ideal_closure(build("hahn")), Mat(pauli(1))) < 1e-12);
    // the 4m+2 phase schedule closes onto the z axis instead
    CHECK(phase_dist(ideal_closure(build("ur6")), Mat(pauli(3))) < 1e-12);
    CHECK(phase_dist(ideal_closure(build("ur10")), Mat(pauli(3))) < 1e-12);
    // and 4m orders close onto the identity
    CHECK(phase_dist(ideal_closure(build("ur8")), Mat(Mat::Identity(2, 2))) < 1e-12);
}
