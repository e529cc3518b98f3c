#include "dd/seq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dd {

namespace {

double wrap_2pi(double x) {
    double y = std::fmod(x, 2 * PI);
    if (y < 0) y += 2 * PI;
    // values within rounding of 2*pi collapse to 0
    if (std::abs(y - 2 * PI) < 1e-12) y = 0;
    return y;
}

// n pulses laid out pulse-first with equal trailing intervals: P f P f ... P f
SequenceIR uniform_seq(std::string name, std::vector<Pulse> ps, Family fam, bool universal) {
    SequenceIR s;
    s.name      = std::move(name);
    s.pulses    = std::move(ps);
    s.family    = fam;
    s.universal = universal;
    s.uniform   = true;
    s.fractions.assign(s.pulses.size() + 1, 1.0 / double(s.pulses.size()));
    s.fractions.front() = 0.0;
    return s;
}

std::vector<Pulse> barred(std::vector<Pulse> ps) {
    for (auto& p : ps) p.sign = -p.sign;
    return ps;
}

}  // namespace

std::vector<double> ur_phases(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("ur_phases: n must be even and >= 2");
    if (n == 2) return {0.0, 0.0};  // the two-pulse member degenerates to CPMG
    double Phi;
    if (n % 4 == 0)
        Phi = PI / double(n / 4);
    else  // n = 4m + 2
        Phi = 2.0 * double((n - 2) / 4) * PI / double(n / 2);
    std::vector<double> phases(n);
    for (int k = 1; k <= n; ++k)
        phases[k - 1] = wrap_2pi(0.5 * double(k - 1) * double(k - 2) * Phi + double(k - 1) * PI / 2);
    return phases;
}

std::vector<Pulse> kdd_block(double phi) {
    std::vector<Pulse> b(5);
    const double off[5] = {PI / 6, 0.0, PI / 2, 0.0, PI / 6};
    for (int i = 0; i < 5; ++i) b[i] = Pulse{wrap_2pi(off[i] + phi), PI, +1, PulseKind::physical};
    return b;
}

std::vector<double> uhrig_times(int n, double T) {
    if (T <= 0) throw std::invalid_argument("uhrig_times: T must be positive");
    if (n < 1) throw std::invalid_argument("uhrig_times: n must be >= 1");
    int jmax = (n % 2 == 0) ? n : n + 1;  // pad to an even pulse count
    std::vector<double> t(jmax);
    for (int j = 1; j <= jmax; ++j) {
        double s = std::sin(double(j) * PI / double(2 * n + 2));
        t[j - 1] = T * s * s;
    }
    return t;
}

std::vector<double> udd_normalized_intervals(int n) {
    if (n < 1) throw std::invalid_argument("udd_normalized_intervals: n must be >= 1");
    std::vector<double> s(n + 1);
    double csc = 1.0 / std::sin(PI / double(2 * n + 2));
    for (int j = 1; j <= n + 1; ++j) s[j - 1] = std::sin(double(2 * j - 1) * PI / double(2 * n + 2)) * csc;
    return s;
}

SequenceIR qdd(int n, int m, double T) {
    if (n < 1 || m < 1) throw std::invalid_argument("qdd: orders must be >= 1");
    if (T <= 0) throw std::invalid_argument("qdd: T must be positive");
    std::vector<double> outer = uhrig_times(n, T);
    SequenceIR s;
    s.name      = "qdd" + std::to_string(n) + std::to_string(m);
    s.family    = Family::QDD;
    s.universal = true;
    s.uniform   = false;
    const double tol = 1e-12 * T;
    double prev = 0.0;
    for (double ty : outer) {
        // inner X-type sub-sequence inside [prev, ty]
        for (double tx : uhrig_times(m, ty - prev)) {
            double t = prev + tx;
            if (std::abs(t - ty) < tol) {
                // coincident inner X and outer Y compose to a Z; keep timing
                // with an explicit wait slot of one pulse width
                s.pulses.push_back(Pulse{0.0, PI, +1, PulseKind::virtual_z});
                s.times.push_back(t);
                s.pulses.push_back(Pulse{0.0, PI, +1, PulseKind::identity_wait});
                s.times.push_back(t);
                goto next_interval;
            }
            s.pulses.push_back(px_pulse());
            s.times.push_back(t);
        }
        s.pulses.push_back(py_pulse());
        s.times.push_back(ty);
    next_interval:
        prev = ty;
    }
    // trailing inner block after the last outer pulse, if it ends before T
    if (prev < T - tol) {
        for (double tx : uhrig_times(m, T - prev)) {
            s.pulses.push_back(px_pulse());
            s.times.push_back(prev + tx);
        }
    }
    // fractions derived from the time layout (informational for timed IRs)
    s.fractions.clear();
    prev = 0.0;
    for (double t : s.times) {
        s.fractions.push_back((t - prev) / T);
        prev = t;
    }
    s.fractions.push_back((T - prev) / T);
    return s;
}

SequenceIR concat(const SequenceIR& outer, const SequenceIR& inner) {
    if (!outer.uniform || !inner.uniform)
        throw std::invalid_argument("concat: both sequences must have uniform intervals");
    if (inner.pulses.empty()) return outer;
    SequenceIR s;
    s.name      = outer.name + "[" + inner.name + "]";
    s.family    = outer.family;
    s.universal = outer.universal;
    s.uniform   = true;
    s.fractions.push_back(outer.fractions.front());
    const size_t n = outer.pulses.size();
    for (size_t k = 0; k < n; ++k) {
        s.pulses.push_back(outer.pulses[k]);
        double share = outer.fractions[k + 1];
        // the outer free period becomes a full inner copy
        s.fractions.push_back(share * inner.fractions.front());
        for (size_t j = 0; j < inner.pulses.size(); ++j) {
            s.pulses.push_back(inner.pulses[j]);
            s.fractions.push_back(share * inner.fractions[j + 1]);
        }
    }
    return s;
}

namespace {

SequenceIR concat_named(const std::string& name, const std::string& outer, const std::string& inner);

SequenceIR build_fixed(const std::string& id) {
    const Pulse X = px_pulse(), Y = py_pulse(), Xb = pxbar_pulse(), Yb = pybar_pulse();
    if (id == "free") {
        SequenceIR s;
        s.name      = "free";
        s.family    = Family::Free;
        s.fractions = {1.0};
        return s;
    }
    if (id == "hahn") {
        SequenceIR s = uniform_seq("hahn", {X}, Family::Hahn, false);
        s.fractions  = {0.5, 0.5};
        return s;
    }
    if (id == "px") return uniform_seq("px", {X, X}, Family::CPMG, false);
    if (id == "py") return uniform_seq("py", {Y, Y}, Family::CPMG, false);
    if (id == "super_hahn" || id == "rga2x")
        return uniform_seq("super_hahn", {X, Xb}, Family::RGA, false);
    if (id == "rga2y") return uniform_seq("rga2y", {Y, Yb}, Family::RGA, false);
    if (id == "cpmg") {
        SequenceIR s = uniform_seq("cpmg", {X, X}, Family::CPMG, false);
        s.fractions  = {0.25, 0.5, 0.25};
        return s;
    }
    if (id == "super_cpmg") return uniform_seq("super_cpmg", {X, X, Xb, Xb}, Family::CPMG, false);
    if (id == "xy4" || id == "cdd1") return uniform_seq("xy4", {Y, X, Y, X}, Family::XY4, true);
    if (id == "edd" || id == "rga8c" || id == "xy8")
        return uniform_seq("edd", {X, Y, X, Y, Y, X, Y, X}, Family::EDD, true);
    if (id == "super_euler") {
        std::vector<Pulse> first = {X, Y, X, Y, Y, X, Y, X};
        std::vector<Pulse> ps    = first;
        for (auto& p : barred(first)) ps.push_back(p);
        return uniform_seq("super_euler", ps, Family::EDD, true);
    }
    if (id == "kdd") {
        std::vector<Pulse> ps;
        for (double phi : {PI / 2, 0.0, PI / 2, 0.0})
            for (auto& p : kdd_block(phi)) ps.push_back(p);
        return uniform_seq("kdd", ps, Family::KDD, true);
    }
    if (id == "rga4") return uniform_seq("rga4", {Yb, X, Yb, X}, Family::RGA, true);
    if (id == "rga4p") return uniform_seq("rga4p", {Yb, Xb, Yb, Xb}, Family::RGA, true);
    if (id == "rga8a") return uniform_seq("rga8a", {X, Yb, X, Yb, Y, Xb, Y, Xb}, Family::RGA, true);
    if (id == "rga16b") return concat_named("rga16b", "rga4p", "rga4p");
    if (id == "rga32a") return concat_named("rga32a", "rga4", "rga8a");
    if (id == "rga32c") return concat_named("rga32c", "rga8c", "rga4");
    if (id == "rga64a") return concat_named("rga64a", "rga8a", "rga8a");
    if (id == "rga64c") return concat_named("rga64c", "rga8c", "rga8c");
    if (id == "rga256a") return concat_named("rga256a", "rga4", "rga64a");
    throw std::invalid_argument("unknown sequence: " + id);
}

SequenceIR concat_named(const std::string& name, const std::string& outer, const std::string& inner) {
    SequenceIR s = concat(build(outer), build(inner));
    s.name       = name;
    s.family     = Family::RGA;
    return s;
}

}  // namespace

SequenceIR build(const std::string& name, int n, int m) {
    std::string id = name;
    std::transform(id.begin(), id.end(), id.begin(), [](unsigned char c) { return std::tolower(c); });
    std::erase_if(id, [](char c) { return c == '-' || c == ' '; });

    // parameterized families, either as ("cdd", n) or a literal "cdd3"
    auto tail_int = [](const std::string& s, size_t at) { return std::stoi(s.substr(at)); };
    if (id == "cdd" || (id.rfind("cdd", 0) == 0 && id.size() > 3 && isdigit(id[3]))) {
        int order = (id == "cdd") ? n : tail_int(id, 3);
        if (order < 1 || order > 5) throw std::invalid_argument("cdd: order must be in [1,5]");
        SequenceIR s = build_fixed("xy4");
        for (int k = 2; k <= order; ++k) {
            SequenceIR inner = s;
            s                = concat(build_fixed("xy4"), inner);
        }
        s.name   = "cdd" + std::to_string(order);
        s.family = (order == 1) ? Family::XY4 : Family::CDD;
        if (order == 1) s.name = "xy4";
        return s;
    }
    if (id == "ur" || (id.rfind("ur", 0) == 0 && id.size() > 2 && isdigit(id[2]))) {
        int order = (id == "ur") ? n : tail_int(id, 2);
        if (order < 2 || order % 2 != 0)
            throw std::invalid_argument("ur: order must be even and >= 2");
        if (order == 2) {
            SequenceIR s = build_fixed("cpmg");
            return s;
        }
        std::vector<Pulse> ps;
        for (double phi : ur_phases(order)) ps.push_back(Pulse{phi, PI, +1, PulseKind::physical});
        // order 4 gives the XY4 cycle entered at X; kept under its ur name
        return uniform_seq("ur" + std::to_string(order), std::move(ps), Family::UR, order == 4);
    }
    if (id == "uddx" || (id.rfind("uddx", 0) == 0 && id.size() > 4 && isdigit(id[4]))) {
        int order = (id == "uddx") ? n : tail_int(id, 4);
        if (order < 1 || order > 25) throw std::invalid_argument("uddx: order must be in [1,25]");
        SequenceIR s;
        s.name    = "uddx" + std::to_string(order);
        s.family  = Family::UDDx;
        s.uniform = false;
        s.times   = uhrig_times(order, 1.0);
        s.pulses.assign(s.times.size(), px_pulse());
        double prev = 0.0;
        for (double t : s.times) {
            s.fractions.push_back(t - prev);
            prev = t;
        }
        s.fractions.push_back(1.0 - prev);
        return s;
    }
    if (id == "qdd" || (id.rfind("qdd", 0) == 0 && id.size() > 4 && isdigit(id[3]))) {
        int no = (id == "qdd") ? n : id[3] - '0';
        int mo = (id == "qdd") ? m : tail_int(id, 4);
        if (no < 1 || no > 6 || mo < 1 || mo > 6)
            throw std::invalid_argument("qdd: orders must be in [1,6]");
        return qdd(no, mo, 1.0);
    }
    return build_fixed(id);
}

std::vector<std::string> catalog() {
    std::vector<std::string> v = {
        "hahn", "super_hahn", "rga2y", "cpmg", "super_cpmg",
        "xy4", "cdd2", "cdd3", "cdd4", "cdd5", "edd", "super_euler", "kdd",
        "rga4", "rga4p", "rga8a", "rga16b", "rga32a", "rga32c", "rga64a", "rga64c", "rga256a",
        "ur6", "ur10", "ur20", "ur50", "ur100"};
    for (int k = 1; k <= 9; ++k) v.push_back("uddx" + std::to_string(k));
    for (int k = 1; k <= 4; ++k) v.push_back("qdd" + std::to_string(k) + std::to_string(k));
    for (int no = 1; no <= 4; ++no)
        for (int mo = 1; mo <= 6; ++mo)
            if (no != mo) v.push_back("qdd" + std::to_string(no) + std::to_string(mo));
    return v;
}

Mat ideal_product(const SequenceIR& seq) {
    Mat U = Mat::Identity(2, 2);
    for (const auto& p : seq.pulses) {
        if (p.kind == PulseKind::identity_wait) continue;
        Mat H;
        if (p.kind == PulseKind::virtual_z)
            H = pauli(3);
        else
            H = std::cos(p.phi) * pauli(1) + std::sin(p.phi) * pauli(2);
        U = expm_hermitian(H, double(p.sign) * p.theta / 2) * U;
    }
    return U;
}

}  // namespace dd
