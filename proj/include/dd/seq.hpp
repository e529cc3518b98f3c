#pragma once
// Pulse-sequence intermediate representation and the catalog of surveyed
// sequences: basic echoes, XY4/CDD, RGA, KDD, UR, UDDx, QDD.
#include <string>
#include <vector>

#include "dd/linalg.hpp"

namespace dd {

enum class PulseKind { physical, virtual_z, identity_wait };

struct Pulse {
    double phi    = 0.0;  // axis angle from +x in the xy-plane, radians
    double theta  = PI;   // rotation angle (pi throughout the catalog)
    int sign      = +1;   // -1 = barred pulse (opposite orientation)
    PulseKind kind = PulseKind::physical;
};

inline Pulse px_pulse() { return {0.0, PI, +1, PulseKind::physical}; }
inline Pulse py_pulse() { return {PI / 2, PI, +1, PulseKind::physical}; }
inline Pulse pxbar_pulse() { return {0.0, PI, -1, PulseKind::physical}; }
inline Pulse pybar_pulse() { return {PI / 2, PI, -1, PulseKind::physical}; }

enum class Family { Free, Hahn, CPMG, XY4, CDD, EDD, RGA, KDD, UR, UDDx, QDD };

struct SequenceIR {
    std::string name;
    std::vector<Pulse> pulses;
    std::vector<double> fractions;  // pulses.size()+1 interval fractions, sum 1
    bool uniform   = true;
    bool universal = false;
    Family family  = Family::Free;
    // absolute pulse times on [0,1]; set only for the UDD/QDD (timed) family
    std::vector<double> times;
    bool timed() const { return !times.empty(); }
};

// phase schedule of the universally robust family; n even (n=2 -> CPMG phases)
std::vector<double> ur_phases(int n);

// the 5-pulse composite block K_phi
std::vector<Pulse> kdd_block(double phi);

// pulse times t_j = T sin^2(j pi / (2n+2)); j to n (even n) or n+1 (odd n)
std::vector<double> uhrig_times(int n, double T);

// normalized intervals s_j = sin((2j-1)pi/(2n+2)) csc(pi/(2n+2)), j = 1..n+1
std::vector<double> udd_normalized_intervals(int n);

// outer-Y / inner-X nested non-uniform sequence over total time T;
// odd inner order emits virtual-Z + identity-wait at coincident points
SequenceIR qdd(int n, int m, double T = 1.0);

// replace every free period of `outer` with a full copy of `inner`
SequenceIR concat(const SequenceIR& outer, const SequenceIR& inner);

// resolve a catalog name; n, m used by the parameterized families
SequenceIR build(const std::string& name, int n = 0, int m = 0);

// the 60 surveyed sequences
std::vector<std::string> catalog();

// ideal pulse product for closure checks (virtual-Z counts as exp(-i pi/2 Z))
Mat ideal_product(const SequenceIR& seq);

}  // namespace dd
