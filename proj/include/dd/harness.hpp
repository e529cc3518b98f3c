#pragma once
// Experiment drivers: the Pauli-state decay protocol and the Haar-state
// pulse-interval sweep, shot sampling, deterministic per-task seeding, the
// virtual-Z compile pass, and the file formats (curve CSV, schedule JSON,
// config JSON).
#include <cstdint>
#include <string>
#include <vector>

#include "dd/analysis.hpp"
#include "dd/dynamics.hpp"

namespace dd {

enum class ModelKind { generic, dephasing, lindblad1q, sc };

struct ExperimentConfig {
    ModelKind model = ModelKind::generic;
    int n_bath      = 2;         // bath qubits of the unitary models
    double J        = 2 * PI * 4e3;  // system-bath coupling norm, rad/s
    double beta     = 2 * PI * 2e3;  // pure-bath norm, rad/s
    double T1       = 100e-6;    // lindblad1q base coherence times, s
    double T2       = 90e-6;
    std::vector<std::string> sequences{"xy4"};
    std::string states = "pauli6";  // "pauli6" or "haar:K"
    std::vector<double> times;      // decay grid; empty = n_times points to t_max
    double t_max = 75e-6;
    int n_times  = 12;
    double T     = 75e-6;  // fixed total time of the interval sweep
    double delta = 20e-9;  // pulse width, s
    double d     = 0;      // extra per-interval delay of the decay protocol
    std::string zetas = "a";  // padding conventions to sweep, chars of {a,s}
    long shots       = 8192;
    int calibrations = 10;
    uint64_t seed    = 2026;
    PulseErrorModel err;
    bool z_virtual = false;  // compile y pulses into virtual-z + x
};

struct SkipRecord {
    std::string sequence;
    int calibration = 0;
    double time_s   = 0;  // decay grid time, or total time for interval runs
    double d        = 0;
    char zeta       = 'a';
    std::string reason;
};

struct PauliRunResult {
    std::vector<DecayCurve> curves;  // sorted by (sequence, state, calibration)
    std::vector<SkipRecord> skipped;
};

struct IntervalRow {
    std::string sequence;  // catalog name with "/a" or "/s" padding suffix
    double d = 0;
    int reps = 1;
    QuartileSummary stats;  // fidelities across states x calibrations
};

struct IntervalRunResult {
    std::vector<DecayCurve> curves;  // abscissa column carries d, not t
    std::vector<IntervalRow> rows;
    std::vector<SkipRecord> skipped;
};

// six Pauli eigenstates with their labels Z+, Z-, X+, X-, Y+, Y-
std::vector<std::pair<std::string, Eigen::Vector2cd>> pauli6_states();

// deterministic Haar-random pure state: cos(theta) uniform, phase uniform
Eigen::Vector2cd haar_state(uint64_t seed, int index);

// binomial zero-count draw; p clamped within 1e-12 of [0,1], error beyond
long sample_shots(double p, long shots, uint64_t seed);

// per-task stream seed; hashing the grid values (not indices) makes the two
// drivers agree wherever their grids overlap
uint64_t task_seed(uint64_t master, const std::string& sequence, const std::string& state,
                   int calibration, double t, double d, char zeta);

// per-calibration model redraw seed
uint64_t calibration_seed(uint64_t master, int calibration);

// survival of psi when the bath half starts maximally mixed
double unitary_survival(const Mat& U, const Eigen::Vector2cd& psi);

// rewrite y pulses as a virtual-z frame step followed by a physical x pulse
SequenceIR compile_z_mode(const SequenceIR& seq);

// decay protocol over the time grid: dense schedules, as many repetitions as
// fit; over-packed grid points are skipped with a record
PauliRunResult run_pauli_experiment(const ExperimentConfig& cfg);

// pulse-interval sweep at fixed T: 8 delays from 0 to max_delay per sequence,
// quartile summaries per (sequence, zeta, d)
IntervalRunResult run_haar_interval_experiment(const ExperimentConfig& cfg);

// ---- file formats ----

// CSV with header sequence,state,calibration,time_s,zeros,shots
std::string curves_to_csv(const std::vector<DecayCurve>& curves);
std::vector<DecayCurve> curves_from_csv(const std::string& text);

std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const std::string& text);

std::string config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const std::string& text);

}  // namespace dd
