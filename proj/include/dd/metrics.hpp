#pragma once
// Error and fidelity measures: survival fidelity, the unitary decoupling
// error eta, filter functions, coherence integrals against a spectral
// density, and the closed-form theory bounds with the optimal CDD level.
#include <string>
#include <vector>

#include "dd/linalg.hpp"

namespace dd {

// survival probability <psi|rho|psi>
double state_fidelity(const Mat& rho, const Vec& psi);

// distance of the joint evolution from ideal-system (x) nearest-bath-unitary
double eta_dd(const Mat& U_total, const Mat& U0);

// F_n(w T) for n ideal pi pulses at times t_j in (0, T]
double filter_function(const std::vector<double>& times, double T, double omega);

struct SpectralDensity {
    enum class Kind { ohmic, lorentzian, one_over_f, tabulated };
    Kind kind        = Kind::ohmic;
    double amplitude = 1.0;
    double cutoff    = 1.0;  // angular cutoff w_c; ohmic is sharply truncated there
    double exponent  = 1.0;  // ohmic power s / 1-over-f exponent
    double w_min     = 0.0;  // evaluation domain
    double w_max     = 0.0;  // 0 = unbounded (lorentzian tails handled adaptively)
    std::vector<std::pair<double, double>> table;

    double operator()(double w) const;
};

// chi(t) = (2/pi) Int S(w)/w^2 F(w t) dw by adaptive quadrature
double coherence_chi(const SpectralDensity& S, const std::vector<double>& times, double t);

// closed-form bounds; kind in {xy4, xy4_width, edd, cdd, cdd_floor}
double theory_eta(const std::string& kind, double J, double eps, double tau, double Delta = 0,
                  double c = 1.0, int level = 1);

struct OptimalLevel {
    int level         = 0;
    bool out_of_range = false;  // argument >= 1: no suppression regime
};
OptimalLevel cdd_optimal_level(double cbar_eps_tau);

}  // namespace dd
