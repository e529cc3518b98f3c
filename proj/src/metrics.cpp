#include "dd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace dd {

double state_fidelity(const Mat& rho, const Vec& psi) {
    if (std::abs(rho.trace() - cd(1, 0)) > 1e-8)
        throw std::invalid_argument("state_fidelity: density operator trace differs from 1");
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("state_fidelity: state not normalized");
    return std::real((psi.adjoint() * rho * psi)(0));
}

double eta_dd(const Mat& U_total, const Mat& U0) {
    const int D  = int(U_total.rows());
    const int dS = int(U0.rows());
    if (D % dS != 0) throw std::invalid_argument("eta_dd: dimension mismatch");
    const int dB = D / dS;
    if (op_norm(U_total.adjoint() * U_total - Mat::Identity(D, D)) > 1e-8)
        throw std::invalid_argument("eta_dd: joint operator is not unitary");

    Mat aligned = kron(U0.adjoint(), Mat::Identity(dB, dB)) * U_total;
    Mat M       = partial_trace_front(aligned, dS, dB) / double(dS);
    Mat Bp      = polar_unitary(M);
    return op_norm(U_total - kron(U0, Bp));
}

namespace {

// complex amplitude whose squared magnitude is the filter function
cd filter_amplitude(const std::vector<double>& times, double T, double omega) {
    const int n = int(times.size());
    cd amp      = cd(1, 0) + double((n % 2 == 0) ? -1 : 1) * std::exp(cd(0, omega * T));
    for (int j = 1; j <= n; ++j)
        amp += 2.0 * double((j % 2 == 0) ? 1 : -1) * std::exp(cd(0, omega * times[j - 1]));
    return amp;
}

}  // namespace

double filter_function(const std::vector<double>& times, double T, double omega) {
    for (size_t j = 0; j + 1 < times.size(); ++j)
        if (times[j] >= times[j + 1])
            throw std::invalid_argument("filter_function: pulse times must increase");
    if (!times.empty() && (times.front() <= 0 || times.back() > T * (1 + 1e-12)))
        throw std::invalid_argument("filter_function: pulse times must lie in (0, T]");
    return std::norm(filter_amplitude(times, T, omega));
}

double SpectralDensity::operator()(double w) const {
    if (w < 0) return 0;
    switch (kind) {
        case Kind::ohmic:
            if (w > cutoff) return 0;  // sharp truncation
            return amplitude * cutoff * std::pow(w / cutoff, exponent);
        case Kind::lorentzian:
            return amplitude / (1.0 + (w / cutoff) * (w / cutoff));
        case Kind::one_over_f:
            if (w <= 0) return 0;
            return amplitude * std::pow(cutoff / w, exponent);
        case Kind::tabulated: {
            if (table.empty() || w < table.front().first || w > table.back().first) return 0;
            auto it = std::lower_bound(table.begin(), table.end(), w,
                                       [](const auto& p, double x) { return p.first < x; });
            if (it == table.begin()) return it->second;
            auto lo = std::prev(it);
            double f = (w - lo->first) / (it->first - lo->first);
            return lo->second + f * (it->second - lo->second);
        }
    }
    return 0;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double eps, int depth) {
    double m  = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left  = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    // split into panels first: oscillatory integrands need a bounded panel size
    const int panels = 64;
    double total     = 0;
    double h         = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        double x0 = a + k * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        double f0 = f(x0), fm = f(xm), f1 = f(x1);
        double whole = h / 6.0 * (f0 + 4 * fm + f1);
        total += adaptive_simpson(f, x0, x1, f0, fm, f1, whole, eps / panels, 40);
    }
    return total;
}

}  // namespace

double coherence_chi(const SpectralDensity& S, const std::vector<double>& times, double t) {
    if (t <= 0) throw std::invalid_argument("coherence_chi: t must be positive");
    const int n = int(times.size());
    // F(w)/w^2 with its w -> 0 limit removed analytically
    const double c0 = [&] {
        double c = double((n % 2 == 0) ? -1 : 1) * t;
        for (int j = 1; j <= n; ++j) c += 2.0 * double((j % 2 == 0) ? 1 : -1) * times[j - 1];
        return c;
    }();
    auto f_over_w2 = [&](double w) -> double {
        if (std::abs(w) * t < 1e-8) {
            // amp(w) = i w c0 + O(w^2): the balanced sum vanishes at w = 0
            return c0 * c0;
        }
        cd amp = filter_amplitude(times, t, w);
        return std::norm(amp) / (w * w);
    };
    auto integrand = [&](double w) -> double { return S(w) * f_over_w2(w); };

    if (S.kind == SpectralDensity::Kind::one_over_f && S.exponent >= 1 && S.w_min <= 0)
        throw std::domain_error("coherence_chi: 1/f spectrum needs a positive low cutoff");

    double lo = std::max(0.0, S.w_min);
    double hi = S.w_max;
    double tail = 0;
    if (hi <= 0) {
        switch (S.kind) {
            case SpectralDensity::Kind::ohmic: hi = S.cutoff; break;
            case SpectralDensity::Kind::tabulated:
                hi = S.table.empty() ? 0 : S.table.back().first;
                break;
            case SpectralDensity::Kind::lorentzian: {
                // choose the upper limit so the analytic tail bound is negligible:
                // S <= A (w_c / w)^2 above w_c and F <= (2n + 2)^2
                double fmax = double(2 * n + 2) * double(2 * n + 2);
                hi          = 50 * S.cutoff;
                auto bound  = [&](double W) {
                    return fmax * S.amplitude * S.cutoff * S.cutoff / (3.0 * W * W * W);
                };
                while (bound(hi) > 1e-12 && hi < 1e12 * S.cutoff) hi *= 2;
                tail = bound(hi);
                break;
            }
            default:
                throw std::domain_error("coherence_chi: spectrum has no finite upper limit");
        }
    }
    if (hi <= lo) return 0;
    double val = integrate(integrand, lo, hi, 1e-10 * std::max(1.0, hi - lo));
    return (2.0 / PI) * (val + tail);
}

double theory_eta(const std::string& kind, double J, double eps, double tau, double Delta,
                  double c, int level) {
    if (J < 0 || eps < 0 || tau < 0 || Delta < 0)
        throw std::invalid_argument("theory_eta: scales must be non-negative");
    auto bracket = [&](double x) { return 0.5 * x + (2.0 / 9.0) * x * x; };
    if (kind == "xy4") return (4 * J * tau) * bracket(4 * eps * tau);
    if (kind == "xy4_width") return 4 * J * Delta + (4 * J * tau) * bracket(4 * eps * tau);
    if (kind == "edd") return (8 * J * tau) * bracket(8 * eps * tau);
    if (kind == "cdd")
        return std::pow(4.0, 0.5 * level * (level + 3)) * std::pow(c * eps * tau, level) *
               (J * tau);
    if (kind == "cdd_floor") return 16 * Delta * J;
    throw std::invalid_argument("theory_eta: unknown kind " + kind);
}

OptimalLevel cdd_optimal_level(double cbar_eps_tau) {
    if (cbar_eps_tau <= 0) throw std::invalid_argument("cdd_optimal_level: argument must be > 0");
    if (cbar_eps_tau >= 1) return {0, true};
    double raw = std::log(1.0 / cbar_eps_tau) / std::log(4.0) - 1.0;
    return {int(std::floor(raw)), false};
}

}  // namespace dd
