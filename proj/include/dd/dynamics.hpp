#pragma once
// Propagators: erroneous pulse unitaries, finite-width pulses under a noise
// model, schedule propagation, toggling-frame/average-Hamiltonian analysis,
// rotating-frame term scan, and Lindblad (density-operator) evolution.
#include <string>
#include <vector>

#include "dd/model.hpp"
#include "dd/schedule.hpp"

namespace dd {

enum class Envelope { square, gaussian };
enum class Frame { lab, rotating };

struct PulseErrorModel {
    double eps_r = 0;  // relative flip-angle error
    double eps_b = 0;  // in-plane axis misspecification
    double eps_c = 0;  // out-of-plane axis misspecification
    Envelope envelope = Envelope::square;
};

// 2x2 pulse unitary carrying the error model; virtual-z is exact
Mat ideal_pulse_unitary(const Pulse& p, const PulseErrorModel& err);

// joint system (x) bath propagator of one finite-width pulse of the given
// duration; identity_wait evolves freely, virtual-z is instantaneous
Mat finite_pulse_unitary(const Pulse& p, double duration, const PulseErrorModel& err,
                         const NoiseModel& model);

// exp(-i tau H_full); the rotating frame winds the Hamiltonian with the drive
// and integrates the resulting time dependence piecewise to < 1e-10
Mat free_propagator(const NoiseModel& model, double tau, Frame frame = Frame::lab);

// total unitary of a schedule: free segments between events, pulse
// propagators (finite-width when the event has nonzero duration)
Mat propagate(const Schedule& sched, const PulseErrorModel& err, const NoiseModel& model);

// ---- toggling frame (ideal zero-width pulses only) ----

struct ToggledSegment {
    double t0 = 0, t1 = 0;
    Mat H;
};

std::vector<ToggledSegment> toggling_segments(const Schedule& sched, const NoiseModel& model);
Mat toggling_hamiltonian(const Schedule& sched, const NoiseModel& model, double t);
// (1/T) integral of the toggled Hamiltonian over the schedule, exact segment sum
Mat first_order_average_hamiltonian(const Schedule& sched, const NoiseModel& model);

// ---- drive rotating frame (two-qubit space, DD on qubit 1) ----

// N-hat = I - (Z1 + Z2)/2, diagonal occupation-number operator
Mat number_operator_2q();

// propagator of the wound Hamiltonian V^dag(t) H V(t) - w_d N-hat with
// V(t) = exp(-i w_d N-hat t); piecewise-constant with halving to < 1e-10
Mat rotating_frame_propagator(const Mat& H_lab, double omega_d, double t);

struct TermScanEntry {
    std::string label;      // two letters, qubit-1 factor first, e.g. "XZ"
    double with_dd    = 0;  // sup norm of the first-order average over one cycle
    double without_dd = 0;  // same with the drive winding only
};

struct TermScanReport {
    std::vector<TermScanEntry> entries;
    double tau      = 0;
    bool fine_tuned = false;  // tau is an integer multiple of 2 pi / w_d
};

// first-order average of every two-qubit Pauli coupling term over one cycle
// of the sequence (pulses on qubit 1, inter-pulse spacing tau), evaluated in
// closed form per segment
TermScanReport rotating_frame_term_scan(const SequenceIR& seq, double omega_d, double tau);

// ---- density-operator paths ----

// single-qubit T1/T2 channel of a schedule: pulses act as instantaneous
// erroneous unitaries at their start, widths become free evolution
Mat lindblad_propagate_1q(const Schedule& sched, const PulseErrorModel& err, double T1,
                          double T2);

// two-qubit crosstalk model: repeated [pulse, free slot of delta + d] blocks
// packed into total time T, remainder evolving freely at the end
Mat sc_evolution_superop(const ScModel& m, const std::vector<Pulse>& pulses, double T,
                         double delta, double d);

// survival probability of qubit-1 state psi with the spectator starting in |0>
double sc_survival(const Mat& superop, const Eigen::Vector2cd& psi);

// survival probability of a single-qubit state under a 4x4 superoperator
double lindblad_survival_1q(const Mat& superop, const Eigen::Vector2cd& psi);

}  // namespace dd
