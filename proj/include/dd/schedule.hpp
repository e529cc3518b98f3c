#pragma once
// Renders a sequence IR into an absolute-time pulse schedule under total time
// T, pulse width, extra per-interval delay, symmetric/asymmetric padding and
// block repetition.
#include <string>
#include <vector>

#include "dd/seq.hpp"

namespace dd {

struct Event {
    double t_start  = 0;
    double duration = 0;
    Pulse pulse;
};

struct Schedule {
    std::vector<Event> events;
    double T     = 0;
    double delta = 0;
    double d     = 0;
    char symmetry = 'a';  // 'a' asymmetric, 's' symmetric
    int reps     = 1;
};

// uniform-interval layout; throws on over-packing
Schedule render(const SequenceIR& seq, double T, double delta, double d, char zeta, int reps);

// non-uniform (timed) layout: pulses end at their target times t_j;
// an even-order x-type sequence terminates with an identity wait
Schedule render_udd_family(const SequenceIR& seq, double T, double delta);

// largest d for which a single repetition fits in T
double max_delay(const SequenceIR& seq, double T, double delta);

// schedule invariant check; empty result means valid
std::vector<std::string> validate(const Schedule& s);

}  // namespace dd
