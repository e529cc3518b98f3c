#pragma once
// Noise models: generic system+bath Hamiltonians with seeded bath operators,
// and the two-qubit rotating-frame model with always-on ZZ coupling and
// T1/T2 dissipation used for the crosstalk experiments.
#include <array>
#include <optional>
#include <string>

#include "dd/linalg.hpp"
#include "dd/rng.hpp"

namespace dd {

struct RotatingFrameParams {
    double wd  = 0;  // drive frequency, rad/s
    double wq1 = 0;  // qubit-1 frequency
    double wq2 = 0;  // qubit-2 frequency
    double jzz = 0;  // ZZ coupling strength
};

struct LindbladParams {
    double T1 = 0;
    double T2 = 0;
};

struct NoiseModel {
    int n_bath = 1;                          // bath qubits
    std::array<double, 4> gamma{0, 1, 1, 1}; // couplings per system axis
    std::array<Mat, 4> B;                    // bath operators; B[0] folded into HB
    Mat HB;                                  // pure-bath Hamiltonian
    double beta = 0;                         // ||H_B||
    double J    = 0;                         // ||H_SB||
    double eps  = 0;                         // beta + J
    std::optional<RotatingFrameParams> rotating;
    std::optional<LindbladParams> lindblad;

    int dim_bath() const { return HB.rows() > 0 ? int(HB.rows()) : 1; }
    Mat h_sb() const;    // sum_a gamma_a sigma^a (x) B^a on system (x) bath
    Mat h_full() const;  // h_sb + I_S (x) H_B
    void refresh_norms();
};

// bath operators drawn as seeded random Hermitians, rescaled so that
// ||H_SB|| = J_target and ||H_B|| = beta_target
NoiseModel make_generic_bath(uint64_t seed, int n_bath, double J_target, double beta_target);

// pure-dephasing variant: only the sigma^z (x) B^z coupling survives
NoiseModel make_dephasing_bath(uint64_t seed, int n_bath, double J_target, double beta_target);

// ---- two-qubit superconducting crosstalk model (drive rotating frame) ----

struct ScModel {
    double dq1 = 0, dq2 = 0;  // drive detunings of the two qubits, rad/s
    double jzz = 0;           // always-on ZZ coupling, rad/s
    double T1a = 0, T1b = 0;  // relaxation times per qubit, s
    double T2a = 0, T2b = 0;  // dephasing times per qubit, s
    double eps_r = 0;         // relative flip-angle miscalibration
    double tilt  = 0;         // rotation-axis tilt toward z
};

// one calibration draw: frequencies, coupling, coherence times, pulse errors
ScModel draw_sc_calibration(Rng& rng);

// Lindblad generator on the 16-dim row-major superoperator space
Mat sc_generator(const ScModel& m);

// superoperator of an instantaneous pi pulse about axis phi on qubit 1
Mat sc_pulse_superop(const ScModel& m, double phi);

}  // namespace dd
