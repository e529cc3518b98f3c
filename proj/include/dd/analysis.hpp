#pragma once
// Statistics pipeline: bootstrap fidelity, interpolation + time-averaged
// fidelity, quartile summaries, the oscillatory decay-model fit with AICc
// selection and post-selection, and Haar convergence diagnostics.
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dd {

struct DecayCurve {
    std::vector<double> times;  // seconds, strictly increasing
    std::vector<long> zeros;
    std::vector<long> shots;
    std::string state_label;
    std::string sequence_label;
    int calibration_id = 0;

    std::vector<double> fidelities() const;  // zeros / shots
};

struct FitResult {
    double lambda = 0;  // decay time of the oscillating branch
    double gamma  = 0;  // oscillation frequency, rad per time unit
    double alpha  = 0;  // decay time of the plateau branch
    std::array<double, 3> se{0, 0, 0};          // standard errors
    std::array<double, 3> half_width{0, 0, 0};  // 95% t-score half-widths
    double aicc      = 0;
    double objective = 0;  // weighted sum of squared residuals
    bool accepted    = false;
    std::string rejection;  // first failed rule, empty when accepted
    int seed_index = -1;
};

// mean and sample standard deviation of resampled zero-ratios
std::pair<double, double> bootstrap_fidelity(long zeros, long shots, int resamples,
                                             uint64_t seed);

enum class InterpMethod { hermite3, cubic_spline };

// piecewise-cubic interpolant through all points
std::function<double(double)> interpolate(const std::vector<double>& t,
                                          const std::vector<double>& y, InterpMethod method);

// (1/T) Int_0^T f(t)/f(0) dt on the interpolant
double time_averaged_fidelity(const std::vector<double>& t, const std::vector<double>& y,
                              double T, InterpMethod method = InterpMethod::hermite3);

struct QuartileSummary {
    double min = 0, q25 = 0, median = 0, q75 = 0, max = 0, mean = 0;
};
// Q_x = smallest value with x% of the data at or below it
QuartileSummary quartile_summary(std::vector<double> values);

struct FitInput {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> sigma;
};

// decay shape 0.5 (e^{-t/lambda} cos(t gamma) + e^{-t/alpha}) and the fit
// curve pinned through the measured endpoints
double decay_shape(double t, double lambda, double gamma, double alpha);
double decay_model(double t, double lambda, double gamma, double alpha, double fe0, double feT,
                   double Tf);

// the standard seed grid over {gamma} x {lambda} x {alpha}
std::vector<std::array<double, 3>> default_fit_seeds(double Tf, double B);

// weighted nonlinear least squares from every seed; never throws per-seed
std::vector<FitResult> fit_decay(const FitInput& in,
                                 const std::vector<std::array<double, 3>>& seeds);

// drop rule-(a)/(b) violators, pick lowest AICc, fold gamma into [0, B)
std::optional<FitResult> postselect_and_fold(const std::vector<FitResult>& fits, double dt);

// rolling means over growing prefixes of per-state fidelities
std::vector<double> haar_convergence(const std::vector<double>& fidelities,
                                     const std::vector<int>& prefix_sizes);

// two-sided 95% Student-t quantile
double t_quantile_975(int nu);

}  // namespace dd
