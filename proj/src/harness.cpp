#include "dd/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dd {

namespace {

using nlohmann::json;

// ---- deterministic task seeding (FNV-1a over the grid values themselves) ----

uint64_t fnv1a(const void* data, size_t n, uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t fnv_str(const std::string& s, uint64_t h) {
    h = fnv1a(s.data(), s.size(), h);
    unsigned char sep = 0;
    return fnv1a(&sep, 1, h);
}

uint64_t fnv_double(double x, uint64_t h) {
    uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    return fnv1a(&bits, sizeof bits, h);
}

constexpr uint64_t FNV_BASIS = 14695981039346656037ULL;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[size_t(i)] = a + (b - a) * double(i) / double(n - 1);
    return v;
}

// ---- config plumbing ----

struct StateSpec {
    bool haar = false;
    int k     = 6;
};

StateSpec parse_states_spec(const std::string& s) {
    if (s == "pauli6") return {false, 6};
    if (s.rfind("haar:", 0) == 0) {
        int k = 0;
        try {
            size_t used = 0;
            k           = std::stoi(s.substr(5), &used);
            if (used != s.size() - 5) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("states: expected 'pauli6' or 'haar:K', got '" + s + "'");
        }
        if (k < 1) throw std::invalid_argument("states: haar count must be >= 1");
        return {true, k};
    }
    throw std::invalid_argument("states: expected 'pauli6' or 'haar:K', got '" + s + "'");
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.sequences.empty()) throw std::invalid_argument("sequences: list is empty");
    for (size_t i = 0; i < cfg.sequences.size(); ++i) {
        SequenceIR ir;
        try {
            ir = build(cfg.sequences[i]);
        } catch (const std::exception&) {
            throw std::invalid_argument("sequences[" + std::to_string(i) + "]: unknown sequence '" +
                                        cfg.sequences[i] + "'");
        }
        if (cfg.model == ModelKind::sc && ir.timed())
            throw std::invalid_argument("sequences[" + std::to_string(i) + "]: '" + cfg.sequences[i] +
                                        "' has fixed pulse times; the crosstalk model packs uniform blocks");
    }
    parse_states_spec(cfg.states);
    if (cfg.model == ModelKind::sc && cfg.z_virtual)
        throw std::invalid_argument("z_mode: the virtual compile is not defined for the crosstalk model");
    if (cfg.shots <= 0) throw std::invalid_argument("shots: must be positive");
    if (cfg.calibrations < 1) throw std::invalid_argument("calibrations: must be >= 1");
    if (cfg.delta <= 0) throw std::invalid_argument("delta: must be positive");
    if (cfg.d < 0) throw std::invalid_argument("d: must be nonnegative");
    if (cfg.T <= 0) throw std::invalid_argument("T: must be positive");
    if (cfg.times.empty()) {
        if (cfg.t_max <= 0) throw std::invalid_argument("t_max: must be positive");
        if (cfg.n_times < 2) throw std::invalid_argument("n_times: must be >= 2");
    } else {
        for (size_t i = 0; i < cfg.times.size(); ++i) {
            if (cfg.times[i] < 0) throw std::invalid_argument("times: entries must be nonnegative");
            if (i > 0 && cfg.times[i] <= cfg.times[i - 1])
                throw std::invalid_argument("times: entries must be strictly increasing");
        }
    }
    if (cfg.zetas.empty()) throw std::invalid_argument("zetas: list is empty");
    for (char z : cfg.zetas)
        if (z != 'a' && z != 's') throw std::invalid_argument("zetas: entries must be 'a' or 's'");
    if (cfg.n_bath < 1 || cfg.n_bath > 6) throw std::invalid_argument("n_bath: must be in [1,6]");
    if (cfg.J < 0 || cfg.beta < 0) throw std::invalid_argument("J/beta: must be nonnegative");
    if (cfg.model == ModelKind::lindblad1q) {
        if (cfg.T1 <= 0 || cfg.T2 <= 0) throw std::invalid_argument("T1/T2: must be positive");
    }
}

std::vector<std::pair<std::string, Eigen::Vector2cd>> resolve_states(const ExperimentConfig& cfg) {
    StateSpec spec = parse_states_spec(cfg.states);
    if (!spec.haar) return pauli6_states();
    std::vector<std::pair<std::string, Eigen::Vector2cd>> out;
    char buf[16];
    for (int i = 0; i < spec.k; ++i) {
        std::snprintf(buf, sizeof buf, "haar%02d", i);
        out.emplace_back(buf, haar_state(cfg.seed, i));
    }
    return out;
}

// ---- per-calibration model state ----

struct CalModel {
    ModelKind kind = ModelKind::generic;
    NoiseModel nm;
    ScModel sc;
    double T1 = 0, T2 = 0;
};

CalModel draw_calibration(const ExperimentConfig& cfg, int cal) {
    CalModel m;
    m.kind      = cfg.model;
    uint64_t cs = calibration_seed(cfg.seed, cal);
    switch (cfg.model) {
        case ModelKind::generic:
            m.nm = make_generic_bath(cs, cfg.n_bath, cfg.J, cfg.beta);
            break;
        case ModelKind::dephasing:
            m.nm = make_dephasing_bath(cs, cfg.n_bath, cfg.J, cfg.beta);
            break;
        case ModelKind::lindblad1q: {
            Rng r(cs);
            m.T1 = cfg.T1 * r.uniform(0.9, 1.1);
            m.T2 = cfg.T2 * r.uniform(0.9, 1.1);
            if (m.T2 > 2 * m.T1) m.T2 = 2 * m.T1;
            break;
        }
        case ModelKind::sc: {
            Rng r(cs);
            m.sc = draw_sc_calibration(r);
            break;
        }
    }
    return m;
}

struct PointProp {
    Mat M;
    ModelKind kind = ModelKind::generic;
};

double survival_of(const PointProp& pp, const Eigen::Vector2cd& psi) {
    switch (pp.kind) {
        case ModelKind::lindblad1q: return lindblad_survival_1q(pp.M, psi);
        case ModelKind::sc: return sc_survival(pp.M, psi);
        default: return unitary_survival(pp.M, psi);
    }
}

// non-timed view of a sequence: the derived interval fractions stand in for
// the absolute times so the uniform renderer can stretch them with delays
SequenceIR untimed_view(const SequenceIR& seq) {
    SequenceIR s = seq;
    s.times.clear();
    return s;
}

double physical_width_sum(const SequenceIR& seq, double delta) {
    double w = 0;
    for (const auto& p : seq.pulses)
        if (p.kind != PulseKind::virtual_z) w += delta;
    return w;
}

// as many repetitions as fit; throws when not even one does
int dense_reps(const SequenceIR& seq, double T, double delta, double d) {
    if (seq.pulses.empty()) return 1;
    double block = physical_width_sum(seq, delta) + double(seq.pulses.size()) * d;
    if (block <= 0) return 1;  // all-virtual sequence occupies no time
    long r = long(std::floor(T / block * (1 + 1e-12)));
    if (r < 1) throw std::invalid_argument("sequence does not fit in T (over-packed)");
    return int(std::min<long>(r, 1000000));
}

PointProp decay_propagator(const ExperimentConfig& cfg, const CalModel& m, const SequenceIR& ir,
                           double t, double d, char zeta) {
    PointProp pp;
    pp.kind = cfg.model;
    if (cfg.model == ModelKind::sc) {
        pp.M = sc_evolution_superop(m.sc, ir.pulses, t, cfg.delta, d);
        return pp;
    }
    Schedule sch;
    if (ir.timed())
        sch = render_udd_family(ir, t, cfg.delta);
    else
        sch = render(ir, t, cfg.delta, d, zeta, dense_reps(ir, t, cfg.delta, d));
    if (cfg.model == ModelKind::lindblad1q)
        pp.M = lindblad_propagate_1q(sch, cfg.err, m.T1, m.T2);
    else
        pp.M = propagate(sch, cfg.err, m.nm);
    return pp;
}

std::string kind_name(PulseKind k) {
    switch (k) {
        case PulseKind::physical: return "physical";
        case PulseKind::virtual_z: return "virtual_z";
        default: return "identity_wait";
    }
}

PulseKind kind_from_name(const std::string& s, const std::string& where) {
    if (s == "physical") return PulseKind::physical;
    if (s == "virtual_z") return PulseKind::virtual_z;
    if (s == "identity_wait") return PulseKind::identity_wait;
    throw std::invalid_argument(where + ": unknown kind '" + s + "'");
}

std::string model_name(ModelKind k) {
    switch (k) {
        case ModelKind::generic: return "generic";
        case ModelKind::dephasing: return "dephasing";
        case ModelKind::lindblad1q: return "lindblad1q";
        default: return "sc";
    }
}

ModelKind model_from_name(const std::string& s) {
    if (s == "generic") return ModelKind::generic;
    if (s == "dephasing") return ModelKind::dephasing;
    if (s == "lindblad1q") return ModelKind::lindblad1q;
    if (s == "sc") return ModelKind::sc;
    throw std::invalid_argument("model: unknown model '" + s + "'");
}

void sort_curves(std::vector<DecayCurve>& curves) {
    std::sort(curves.begin(), curves.end(), [](const DecayCurve& a, const DecayCurve& b) {
        if (a.sequence_label != b.sequence_label) return a.sequence_label < b.sequence_label;
        if (a.state_label != b.state_label) return a.state_label < b.state_label;
        return a.calibration_id < b.calibration_id;
    });
}

}  // namespace

std::vector<std::pair<std::string, Eigen::Vector2cd>> pauli6_states() {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<std::pair<std::string, Eigen::Vector2cd>> v(6);
    v[0] = {"Z+", {1, 0}};
    v[1] = {"Z-", {0, 1}};
    v[2] = {"X+", {s, s}};
    v[3] = {"X-", {s, -s}};
    v[4] = {"Y+", {s, cd(0, s)}};
    v[5] = {"Y-", {s, cd(0, -s)}};
    return v;
}

Eigen::Vector2cd haar_state(uint64_t seed, int index) {
    Rng r      = Rng(seed).split(uint64_t(index));
    double c   = r.uniform(-1.0, 1.0);  // cos(theta): uniform by the Haar measure
    double phi = r.uniform(0.0, 2 * PI);
    double th  = std::acos(std::min(1.0, std::max(-1.0, c)));
    Eigen::Vector2cd v;
    v << cd(std::cos(th / 2), 0), std::exp(cd(0, phi)) * std::sin(th / 2);
    return v;
}

long sample_shots(double p, long shots, uint64_t seed) {
    if (shots <= 0) throw std::invalid_argument("sample_shots: shots must be positive");
    if (p < -1e-12 || p > 1 + 1e-12)
        throw std::domain_error("sample_shots: probability outside [0,1]");
    if (p < 0 || p > 1)
        std::fprintf(stderr, "sample_shots: clamping p = %.17g into [0,1]\n", p);
    double pc = std::min(1.0, std::max(0.0, p));
    Rng r(seed);
    return r.binomial(shots, pc);
}

uint64_t task_seed(uint64_t master, const std::string& sequence, const std::string& state,
                   int calibration, double t, double d, char zeta) {
    uint64_t h = fnv1a(&master, sizeof master, FNV_BASIS);
    h          = fnv_str(sequence, h);
    h          = fnv_str(state, h);
    int64_t c  = calibration;
    h          = fnv1a(&c, sizeof c, h);
    h          = fnv_double(t, h);
    h          = fnv_double(d, h);
    unsigned char zc = static_cast<unsigned char>(zeta);
    return fnv1a(&zc, 1, h);
}

uint64_t calibration_seed(uint64_t master, int calibration) {
    uint64_t h = fnv1a(&master, sizeof master, FNV_BASIS);
    h          = fnv_str("calibration", h);
    int64_t c  = calibration;
    return fnv1a(&c, sizeof c, h);
}

double unitary_survival(const Mat& U, const Eigen::Vector2cd& psi) {
    const int D = int(U.rows());
    if (D < 2 || D % 2 != 0)
        throw std::invalid_argument("unitary_survival: joint dimension must be 2 x bath");
    const int dB = D / 2;
    Mat rho_s    = psi * psi.adjoint();
    Mat rho0     = kron(rho_s, Mat::Identity(dB, dB) / double(dB));
    Mat rho      = U * rho0 * U.adjoint();
    Mat rs       = (dB == 1) ? rho : partial_trace_bath(rho, 2, dB);
    cd tr        = rs.trace();
    if (std::abs(tr - cd(1, 0)) > 1e-9)
        throw std::runtime_error("unitary_survival: density trace drifted beyond 1e-9");
    return std::real((psi.adjoint() * rs * psi)(0));
}

SequenceIR compile_z_mode(const SequenceIR& seq) {
    SequenceIR out;
    out.name      = seq.name + "/zv";
    out.family    = seq.family;
    out.universal = seq.universal;
    out.uniform   = seq.uniform;
    out.fractions.push_back(seq.fractions.front());
    const double tol = 1e-9;
    for (size_t k = 0; k < seq.pulses.size(); ++k) {
        const Pulse& p = seq.pulses[k];
        double f       = seq.fractions[k + 1];
        double w       = std::fmod(p.phi, 2 * PI);
        if (w < 0) w += 2 * PI;
        bool yp = std::abs(w - PI / 2) < tol;
        bool ym = std::abs(w - 3 * PI / 2) < tol;
        bool compile = p.kind == PulseKind::physical && std::abs(p.theta - PI) < tol && (yp || ym);
        if (!compile) {
            out.pulses.push_back(p);
            out.fractions.push_back(f);
            if (seq.timed()) out.times.push_back(seq.times[k]);
            continue;
        }
        // frame step then the physical x pulse; the pair equals the y pulse
        // up to global phase, but the error axis moves onto x
        int s = yp ? p.sign : -p.sign;
        out.pulses.push_back(Pulse{0.0, PI, s, PulseKind::virtual_z});
        out.fractions.push_back(0.0);
        out.pulses.push_back(Pulse{0.0, PI, s, PulseKind::physical});
        out.fractions.push_back(f);
        if (seq.timed()) {
            out.times.push_back(seq.times[k]);
            out.times.push_back(seq.times[k]);
        }
    }
    return out;
}

PauliRunResult run_pauli_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.states != "pauli6")
        throw std::invalid_argument("states: the decay protocol uses pauli6");
    const auto states = pauli6_states();
    std::vector<double> grid =
        cfg.times.empty() ? linspace(0.0, cfg.t_max, cfg.n_times) : cfg.times;
    const char zeta = cfg.zetas.front();

    std::vector<CalModel> cals;
    for (int c = 0; c < cfg.calibrations; ++c) cals.push_back(draw_calibration(cfg, c));

    PauliRunResult out;
    for (const auto& name : cfg.sequences) {
        SequenceIR ir = build(name);
        if (cfg.z_virtual) ir = compile_z_mode(ir);
        for (int cal = 0; cal < cfg.calibrations; ++cal) {
            std::vector<DecayCurve> curves(states.size());
            for (size_t k = 0; k < states.size(); ++k) {
                curves[k].sequence_label = ir.name;
                curves[k].state_label    = states[k].first;
                curves[k].calibration_id = cal;
            }
            for (double t : grid) {
                std::vector<double> p(states.size(), 1.0);
                if (t > 0) {
                    PointProp pp;
                    try {
                        pp = decay_propagator(cfg, cals[size_t(cal)], ir, t, cfg.d, zeta);
                    } catch (const std::invalid_argument& e) {
                        out.skipped.push_back({ir.name, cal, t, cfg.d, zeta, e.what()});
                        continue;
                    }
                    for (size_t k = 0; k < states.size(); ++k)
                        p[k] = survival_of(pp, states[k].second);
                }
                for (size_t k = 0; k < states.size(); ++k) {
                    uint64_t ts = task_seed(cfg.seed, ir.name, states[k].first, cal, t, cfg.d, zeta);
                    curves[k].times.push_back(t);
                    curves[k].zeros.push_back(sample_shots(p[k], cfg.shots, ts));
                    curves[k].shots.push_back(cfg.shots);
                }
            }
            for (auto& c : curves)
                if (!c.times.empty()) out.curves.push_back(std::move(c));
        }
    }
    sort_curves(out.curves);
    return out;
}

IntervalRunResult run_haar_interval_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const auto states = resolve_states(cfg);

    std::vector<CalModel> cals;
    for (int c = 0; c < cfg.calibrations; ++c) cals.push_back(draw_calibration(cfg, c));

    IntervalRunResult out;
    for (const auto& name : cfg.sequences) {
        SequenceIR ir = build(name);
        if (cfg.z_virtual) ir = compile_z_mode(ir);
        SequenceIR flat = untimed_view(ir);
        for (char zeta : cfg.zetas) {
            std::vector<double> dgrid;
            if (flat.pulses.empty()) {
                dgrid = {0.0};
            } else {
                double dmax = 0;
                try {
                    dmax = max_delay(flat, cfg.T, cfg.delta);
                } catch (const std::invalid_argument& e) {
                    out.skipped.push_back({ir.name, -1, cfg.T, 0.0, zeta, e.what()});
                    continue;
                }
                dgrid = linspace(0.0, dmax, 8);
            }
            const std::string row_label = ir.name + "/" + zeta;
            // one curve per (state, calibration) with d as the abscissa
            std::vector<DecayCurve> curves(states.size() * size_t(cfg.calibrations));
            for (size_t k = 0; k < states.size(); ++k)
                for (int cal = 0; cal < cfg.calibrations; ++cal) {
                    DecayCurve& c    = curves[k * size_t(cfg.calibrations) + size_t(cal)];
                    c.sequence_label = row_label;
                    c.state_label    = states[k].first;
                    c.calibration_id = cal;
                }
            for (double d : dgrid) {
                IntervalRow row;
                row.sequence = row_label;
                row.d        = d;
                row.reps     = flat.pulses.empty() ? 1 : dense_reps(flat, cfg.T, cfg.delta, d);
                std::vector<double> fids;
                bool skipped_d = false;
                for (int cal = 0; cal < cfg.calibrations && !skipped_d; ++cal) {
                    PointProp pp;
                    try {
                        pp = decay_propagator(cfg, cals[size_t(cal)], flat, cfg.T, d, zeta);
                    } catch (const std::invalid_argument& e) {
                        out.skipped.push_back({ir.name, cal, cfg.T, d, zeta, e.what()});
                        skipped_d = true;
                        break;
                    }
                    for (size_t k = 0; k < states.size(); ++k) {
                        double p    = survival_of(pp, states[k].second);
                        uint64_t ts = task_seed(cfg.seed, ir.name, states[k].first, cal, cfg.T, d, zeta);
                        long z      = sample_shots(p, cfg.shots, ts);
                        DecayCurve& c = curves[k * size_t(cfg.calibrations) + size_t(cal)];
                        c.times.push_back(d);
                        c.zeros.push_back(z);
                        c.shots.push_back(cfg.shots);
                        fids.push_back(double(z) / double(cfg.shots));
                    }
                }
                if (!fids.empty()) {
                    row.stats = quartile_summary(fids);
                    out.rows.push_back(row);
                }
            }
            for (auto& c : curves)
                if (!c.times.empty()) out.curves.push_back(std::move(c));
        }
    }
    sort_curves(out.curves);
    return out;
}

// ---- curve CSV ----

std::string curves_to_csv(const std::vector<DecayCurve>& curves) {
    std::string out = "sequence,state,calibration,time_s,zeros,shots\n";
    char buf[160];
    for (const auto& c : curves) {
        for (size_t i = 0; i < c.times.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s,%s,%d,%.17g,%ld,%ld\n", c.sequence_label.c_str(),
                          c.state_label.c_str(), c.calibration_id, c.times[i], c.zeros[i],
                          c.shots[i]);
            out += buf;
        }
    }
    return out;
}

std::vector<DecayCurve> curves_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "sequence,state,calibration,time_s,zeros,shots")
        throw std::invalid_argument("line 1: expected header sequence,state,calibration,time_s,zeros,shots");
    std::vector<DecayCurve> curves;
    // (sequence, state, calibration) -> index into curves, first-appearance order
    std::map<std::tuple<std::string, std::string, int>, size_t> index;
    int ln = 1;
    while (std::getline(is, line)) {
        ++ln;
        if (line.empty()) continue;
        std::vector<std::string> f;
        size_t pos = 0;
        while (true) {
            size_t c = line.find(',', pos);
            f.push_back(line.substr(pos, c == std::string::npos ? c : c - pos));
            if (c == std::string::npos) break;
            pos = c + 1;
        }
        if (f.size() != 6)
            throw std::invalid_argument("line " + std::to_string(ln) + ": expected 6 fields, got " +
                                        std::to_string(f.size()));
        int cal;
        double t;
        long zeros, shots;
        try {
            cal = std::stoi(f[2]);
        } catch (...) {
            throw std::invalid_argument("line " + std::to_string(ln) + ": bad number in field calibration");
        }
        try {
            t = std::stod(f[3]);
        } catch (...) {
            throw std::invalid_argument("line " + std::to_string(ln) + ": bad number in field time_s");
        }
        try {
            zeros = std::stol(f[4]);
            shots = std::stol(f[5]);
        } catch (...) {
            throw std::invalid_argument("line " + std::to_string(ln) + ": bad number in field zeros/shots");
        }
        if (shots <= 0 || zeros < 0 || zeros > shots)
            throw std::invalid_argument("line " + std::to_string(ln) + ": zeros/shots out of range");
        auto key = std::make_tuple(f[0], f[1], cal);
        auto it  = index.find(key);
        if (it == index.end()) {
            DecayCurve c;
            c.sequence_label = f[0];
            c.state_label    = f[1];
            c.calibration_id = cal;
            curves.push_back(std::move(c));
            it = index.emplace(key, curves.size() - 1).first;
        }
        DecayCurve& c = curves[it->second];
        c.times.push_back(t);
        c.zeros.push_back(zeros);
        c.shots.push_back(shots);
    }
    return curves;
}

// ---- schedule JSON ----

std::string schedule_to_json(const Schedule& s) {
    json j;
    j["version"]  = 1;
    j["T"]        = s.T;
    j["delta"]    = s.delta;
    j["d"]        = s.d;
    j["symmetry"] = std::string(1, s.symmetry);
    j["reps"]     = s.reps;
    json evs      = json::array();
    for (const auto& e : s.events) {
        json je;
        je["t_start"]  = e.t_start;
        je["duration"] = e.duration;
        je["phi"]      = e.pulse.phi;
        je["theta"]    = e.pulse.theta;
        je["sign"]     = e.pulse.sign;
        je["kind"]     = kind_name(e.pulse.kind);
        evs.push_back(je);
    }
    j["events"] = evs;
    return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("schedule: ") + e.what());
    }
    for (const char* key : {"version", "T", "delta", "d", "symmetry", "reps", "events"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("schedule: missing field '") + key + "'");
    if (j["version"] != 1) throw std::invalid_argument("schedule: unsupported version");
    Schedule s;
    s.T     = j["T"].get<double>();
    s.delta = j["delta"].get<double>();
    s.d     = j["d"].get<double>();
    std::string sym = j["symmetry"].get<std::string>();
    if (sym.size() != 1 || (sym[0] != 'a' && sym[0] != 's'))
        throw std::invalid_argument("schedule: symmetry must be 'a' or 's'");
    s.symmetry = sym[0];
    s.reps     = j["reps"].get<int>();
    size_t i   = 0;
    for (const auto& je : j["events"]) {
        std::string where = "events[" + std::to_string(i) + "]";
        for (const char* key : {"t_start", "duration", "phi", "theta", "sign", "kind"})
            if (!je.contains(key))
                throw std::invalid_argument(where + ": missing field '" + key + "'");
        Event e;
        e.t_start    = je["t_start"].get<double>();
        e.duration   = je["duration"].get<double>();
        e.pulse.phi  = je["phi"].get<double>();
        e.pulse.theta = je["theta"].get<double>();
        e.pulse.sign = je["sign"].get<int>();
        e.pulse.kind = kind_from_name(je["kind"].get<std::string>(), where + ".kind");
        s.events.push_back(e);
        ++i;
    }
    return s;
}

// ---- experiment config JSON ----

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["model"]        = model_name(c.model);
    j["n_bath"]       = c.n_bath;
    j["J"]            = c.J;
    j["beta"]         = c.beta;
    j["T1"]           = c.T1;
    j["T2"]           = c.T2;
    j["sequences"]    = c.sequences;
    j["states"]       = c.states;
    if (!c.times.empty()) j["times"] = c.times;
    j["t_max"]        = c.t_max;
    j["n_times"]      = c.n_times;
    j["T"]            = c.T;
    j["delta"]        = c.delta;
    j["d"]            = c.d;
    j["zetas"]        = c.zetas;
    j["shots"]        = c.shots;
    j["calibrations"] = c.calibrations;
    j["seed"]         = c.seed;
    j["eps_r"]        = c.err.eps_r;
    j["eps_b"]        = c.err.eps_b;
    j["eps_c"]        = c.err.eps_c;
    j["envelope"]     = c.err.envelope == Envelope::square ? "square" : "gaussian";
    j["z_mode"]       = c.z_virtual ? "virtual" : "physical";
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    static const char* known[] = {"model", "n_bath", "J",     "beta",  "T1",    "T2",
                                  "sequences", "states", "times", "t_max", "n_times", "T",
                                  "delta", "d", "zetas", "shots", "calibrations", "seed",
                                  "eps_r", "eps_b", "eps_c", "envelope", "z_mode"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw std::invalid_argument("config: unknown field '" + it.key() + "'");
    }
    ExperimentConfig c;
    try {
        if (j.contains("model")) c.model = model_from_name(j["model"].get<std::string>());
        if (j.contains("n_bath")) c.n_bath = j["n_bath"].get<int>();
        if (j.contains("J")) c.J = j["J"].get<double>();
        if (j.contains("beta")) c.beta = j["beta"].get<double>();
        if (j.contains("T1")) c.T1 = j["T1"].get<double>();
        if (j.contains("T2")) c.T2 = j["T2"].get<double>();
        if (j.contains("sequences")) c.sequences = j["sequences"].get<std::vector<std::string>>();
        if (j.contains("states")) c.states = j["states"].get<std::string>();
        if (j.contains("times")) c.times = j["times"].get<std::vector<double>>();
        if (j.contains("t_max")) c.t_max = j["t_max"].get<double>();
        if (j.contains("n_times")) c.n_times = j["n_times"].get<int>();
        if (j.contains("T")) c.T = j["T"].get<double>();
        if (j.contains("delta")) c.delta = j["delta"].get<double>();
        if (j.contains("d")) c.d = j["d"].get<double>();
        if (j.contains("zetas")) c.zetas = j["zetas"].get<std::string>();
        if (j.contains("shots")) c.shots = j["shots"].get<long>();
        if (j.contains("calibrations")) c.calibrations = j["calibrations"].get<int>();
        if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
        if (j.contains("eps_r")) c.err.eps_r = j["eps_r"].get<double>();
        if (j.contains("eps_b")) c.err.eps_b = j["eps_b"].get<double>();
        if (j.contains("eps_c")) c.err.eps_c = j["eps_c"].get<double>();
        if (j.contains("envelope")) {
            std::string e = j["envelope"].get<std::string>();
            if (e == "square")
                c.err.envelope = Envelope::square;
            else if (e == "gaussian")
                c.err.envelope = Envelope::gaussian;
            else
                throw std::invalid_argument("envelope: expected 'square' or 'gaussian'");
        }
        if (j.contains("z_mode")) {
            std::string z = j["z_mode"].get<std::string>();
            if (z == "virtual")
                c.z_virtual = true;
            else if (z == "physical")
                c.z_virtual = false;
            else
                throw std::invalid_argument("z_mode: expected 'virtual' or 'physical'");
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    validate_config(c);
    return c;
}

}  // namespace dd
