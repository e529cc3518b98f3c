#include "dd/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dd {

namespace {

double pulse_width(const Pulse& p, double delta) {
    switch (p.kind) {
        case PulseKind::virtual_z: return 0.0;
        default: return delta;  // physical and identity_wait occupy one width
    }
}

}  // namespace

Schedule render(const SequenceIR& seq, double T, double delta, double d, char zeta, int reps) {
    if (seq.timed()) {
        if (d != 0 || reps != 1)
            throw std::invalid_argument("render: timed sequences take no delay/repetition");
        return render_udd_family(seq, T, delta);
    }
    if (T <= 0) throw std::invalid_argument("render: T must be positive");
    if (delta < 0 || d < 0) throw std::invalid_argument("render: negative width or delay");
    if (reps < 1) throw std::invalid_argument("render: reps must be >= 1");
    if (zeta != 'a' && zeta != 's') throw std::invalid_argument("render: symmetry must be 'a' or 's'");

    Schedule sch;
    sch.T        = T;
    sch.delta    = delta;
    sch.d        = d;
    sch.symmetry = zeta;
    sch.reps     = reps;

    const size_t n = seq.pulses.size();
    const double Tb = T / double(reps);
    double widths = 0;
    for (const auto& p : seq.pulses) widths += pulse_width(p, delta);
    // free time budget per block after widths and the n uniform extra delays
    const double u = Tb - widths - double(n) * d;
    if (u < -1e-12 * T)
        throw std::invalid_argument("render: sequence does not fit in T (over-packed)");
    const double uc = std::max(u, 0.0);

    for (int r = 0; r < reps; ++r) {
        double t = double(r) * Tb;
        if (n == 0) continue;  // free evolution: no events
        t += seq.fractions.front() * uc;
        if (zeta == 's') t += d / 2;
        for (size_t k = 0; k < n; ++k) {
            double w = pulse_width(seq.pulses[k], delta);
            sch.events.push_back({t, w, seq.pulses[k]});
            t += w + seq.fractions[k + 1] * uc;
            if (zeta == 's')
                t += (k + 1 == n) ? d / 2 : d;
            else
                t += d;
        }
    }
    return sch;
}

Schedule render_udd_family(const SequenceIR& seq, double T, double delta) {
    if (!seq.timed()) throw std::invalid_argument("render_udd_family: sequence has no target times");
    if (T <= 0) throw std::invalid_argument("render_udd_family: T must be positive");

    Schedule sch;
    sch.T        = T;
    sch.delta    = delta;
    sch.symmetry = 'a';
    sch.reps     = 1;

    // pulses occupy [t_j - delta, t_j] so they end at their target times
    double min_gap = T;
    double prev    = 0;
    for (size_t j = 0; j < seq.times.size(); ++j) {
        double tj = seq.times[j] * T;
        if (tj - prev > 1e-15 * T) min_gap = std::min(min_gap, tj - prev);
        prev = tj;
    }
    if (delta >= min_gap)
        throw std::invalid_argument("render_udd_family: width exceeds the smallest pulse gap");

    bool all_x = true;
    for (size_t j = 0; j < seq.pulses.size(); ++j) {
        const Pulse& p = seq.pulses[j];
        double tj      = seq.times[j] * T;
        double w       = pulse_width(p, delta);
        // a virtual-z opens its wait slot: both start at t_j - delta
        double start = (p.kind == PulseKind::virtual_z) ? tj - delta : tj - w;
        sch.events.push_back({start, w, p});
        if (p.kind == PulseKind::physical && std::abs(p.phi) > 1e-12) all_x = false;
    }
    // a pure-x timed sequence of even order ends strictly before T: terminate
    // with an identity wait so the block implements a net identity on time
    if (all_x && !seq.times.empty() && seq.times.back() * T < T - 1e-12 * T && delta > 0) {
        Pulse idp;
        idp.kind = PulseKind::identity_wait;
        sch.events.push_back({T - delta, delta, idp});
    }
    return sch;
}

double max_delay(const SequenceIR& seq, double T, double delta) {
    if (seq.pulses.empty()) throw std::invalid_argument("max_delay: free evolution has no delay");
    double widths = 0;
    for (const auto& p : seq.pulses) widths += pulse_width(p, delta);
    if (T <= widths) throw std::invalid_argument("max_delay: T too small for one dense repetition");
    return (T - widths) / double(seq.pulses.size());
}

std::vector<std::string> validate(const Schedule& s) {
    std::vector<std::string> out;
    std::ostringstream os;
    const double tol = 1e-12 * std::max(s.T, 1.0);
    for (size_t i = 0; i < s.events.size(); ++i) {
        const Event& e = s.events[i];
        if (e.t_start < -tol) {
            os.str("");
            os << "event " << i << " starts before 0";
            out.push_back(os.str());
        }
        if (e.pulse.kind == PulseKind::virtual_z && e.duration != 0) {
            os.str("");
            os << "event " << i << " virtual-z with nonzero duration";
            out.push_back(os.str());
        }
        if (e.pulse.kind != PulseKind::virtual_z && std::abs(e.duration - s.delta) > tol) {
            os.str("");
            os << "event " << i << " duration differs from pulse width";
            out.push_back(os.str());
        }
        if (i + 1 < s.events.size() &&
            e.t_start + e.duration > s.events[i + 1].t_start + tol) {
            os.str("");
            os << "overlap between events " << i << " and " << i + 1;
            out.push_back(os.str());
        }
        if (e.t_start + e.duration > s.T + tol) {
            os.str("");
            os << "event " << i << " ends after T";
            out.push_back(os.str());
        }
    }
    return out;
}

}  // namespace dd
