#include "dd/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dd/linalg.hpp"
#include "dd/rng.hpp"

namespace dd {

static constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> DecayCurve::fidelities() const {
    std::vector<double> f(times.size());
    for (size_t i = 0; i < times.size(); ++i) {
        if (shots[i] <= 0) throw std::runtime_error("curve has a zero-shot point");
        f[i] = double(zeros[i]) / double(shots[i]);
    }
    return f;
}

std::pair<double, double> bootstrap_fidelity(long zeros, long shots, int resamples,
                                             uint64_t seed) {
    if (shots <= 0) throw std::invalid_argument("bootstrap_fidelity: shots must be positive");
    if (zeros < 0 || zeros > shots)
        throw std::invalid_argument("bootstrap_fidelity: zeros outside [0, shots]");
    if (resamples < 100) throw std::invalid_argument("bootstrap_fidelity: need >= 100 resamples");
    const double p = double(zeros) / double(shots);
    Rng rng(seed);
    double sum = 0, sum2 = 0;
    for (int b = 0; b < resamples; ++b) {
        double r = double(rng.binomial(shots, p)) / double(shots);
        sum += r;
        sum2 += r * r;
    }
    double mean = sum / resamples;
    double var  = (sum2 - resamples * mean * mean) / double(resamples - 1);
    return {mean, std::sqrt(std::max(var, 0.0))};
}

namespace {

// node slopes from the local cubic (quadratic when only 3 points exist)
std::vector<double> local_poly_slopes(const std::vector<double>& x,
                                      const std::vector<double>& y) {
    const int n = int(x.size());
    const int w = std::min(4, n);  // stencil width
    std::vector<double> m(n);
    for (int i = 0; i < n; ++i) {
        int lo = std::min(std::max(i - 1, 0), n - w);
        // derivative of the Lagrange polynomial through the stencil at x[i]
        double s = 0;
        for (int j = 0; j < w; ++j) {
            double num = 0;
            for (int k = 0; k < w; ++k) {
                if (k == j) continue;
                double prod = 1;
                for (int l = 0; l < w; ++l) {
                    if (l == j || l == k) continue;
                    prod *= (x[i] - x[lo + l]) / (x[lo + j] - x[lo + l]);
                }
                num += prod / (x[lo + j] - x[lo + k]);
            }
            s += y[lo + j] * num;
        }
        m[i] = s;
    }
    return m;
}

int locate(const std::vector<double>& x, double t) {
    int i = int(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
    return std::clamp(i, 0, int(x.size()) - 2);
}

}  // namespace

std::function<double(double)> interpolate(const std::vector<double>& t,
                                          const std::vector<double>& y, InterpMethod method) {
    const int n = int(t.size());
    if (n < 3) throw std::invalid_argument("interpolate: need at least 3 points");
    if (y.size() != t.size()) throw std::invalid_argument("interpolate: size mismatch");
    for (int i = 0; i + 1 < n; ++i)
        if (t[i + 1] <= t[i]) throw std::invalid_argument("interpolate: duplicate or unsorted times");

    if (method == InterpMethod::hermite3) {
        auto m = local_poly_slopes(t, y);
        return [t, y, m](double s) {
            int i    = locate(t, s);
            double h = t[i + 1] - t[i];
            double u = (s - t[i]) / h;
            double h00 = (2 * u - 3) * u * u + 1, h10 = ((u - 2) * u + 1) * u;
            double h01 = (3 - 2 * u) * u * u, h11 = (u - 1) * u * u;
            return h00 * y[i] + h10 * h * m[i] + h01 * y[i + 1] + h11 * h * m[i + 1];
        };
    }

    // natural cubic spline: tridiagonal solve for curvature coefficients
    std::vector<double> h(n - 1);
    for (int i = 0; i < n - 1; ++i) h[i] = t[i + 1] - t[i];
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    A(0, 0) = A(n - 1, n - 1) = 1;
    for (int i = 1; i < n - 1; ++i) {
        A(i, i - 1) = h[i - 1];
        A(i, i)     = 2 * (h[i - 1] + h[i]);
        A(i, i + 1) = h[i];
        r(i) = 3 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    Eigen::VectorXd cv = A.partialPivLu().solve(r);
    std::vector<double> b(n - 1), c(n), d(n - 1);
    for (int i = 0; i < n; ++i) c[i] = cv(i);
    for (int i = 0; i < n - 1; ++i) {
        b[i] = (y[i + 1] - y[i]) / h[i] - h[i] * (2 * c[i] + c[i + 1]) / 3;
        d[i] = (c[i + 1] - c[i]) / (3 * h[i]);
    }
    return [t, y, b, c, d](double s) {
        int i     = locate(t, s);
        double dt = s - t[i];
        return y[i] + dt * (b[i] + dt * (c[i] + dt * d[i]));
    };
}

double time_averaged_fidelity(const std::vector<double>& t, const std::vector<double>& y,
                              double T, InterpMethod method) {
    if (t.empty() || y.size() != t.size())
        throw std::invalid_argument("time_averaged_fidelity: bad curve");
    if (y.front() == 0) throw std::invalid_argument("time_averaged_fidelity: f(0) = 0");
    if (T <= t.front() || T > t.back() * (1 + 1e-12))
        throw std::invalid_argument("time_averaged_fidelity: T outside the data range");
    auto f = interpolate(t, y, method);
    // Simpson is exact on the piecewise cubics, so integrate interval by interval
    double acc = 0;
    for (size_t i = 0; i + 1 < t.size() && t[i] < T; ++i) {
        double a = t[i], b = std::min(t[i + 1], T);
        double m = 0.5 * (a + b);
        acc += (b - a) / 6.0 * (f(a) + 4 * f(m) + f(b));
    }
    return acc / (T * y.front());
}

QuartileSummary quartile_summary(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("quartile_summary: empty input");
    std::sort(values.begin(), values.end());
    const int n = int(values.size());
    auto q = [&](double frac) {
        int idx = int(std::ceil(frac * n)) - 1;
        return values[std::clamp(idx, 0, n - 1)];
    };
    QuartileSummary s;
    s.min    = values.front();
    s.q25    = q(0.25);
    s.median = q(0.50);
    s.q75    = q(0.75);
    s.max    = values.back();
    s.mean   = std::accumulate(values.begin(), values.end(), 0.0) / n;
    return s;
}

double decay_shape(double t, double lambda, double gamma, double alpha) {
    return 0.5 * (std::exp(-t / lambda) * std::cos(t * gamma) + std::exp(-t / alpha));
}

double decay_model(double t, double lambda, double gamma, double alpha, double fe0, double feT,
                   double Tf) {
    double g  = decay_shape(t, lambda, gamma, alpha);
    double gT = decay_shape(Tf, lambda, gamma, alpha);
    return (feT - fe0) / (gT - 1.0) * (g - 1.0) + fe0;
}

std::vector<std::array<double, 3>> default_fit_seeds(double Tf, double B) {
    std::vector<std::array<double, 3>> seeds;
    for (double g0 : {0.0, B / 4, B / 2})
        for (double l0 : {Tf / 2, Tf, 2 * Tf})
            for (double a0 : {l0, 10 * l0}) seeds.push_back({l0, g0, a0});
    return seeds;
}

namespace {

using P3 = Eigen::Vector3d;

struct FitProblem {
    const FitInput& in;
    double fe0, feT, Tf, B;

    bool residuals(const P3& p, Eigen::VectorXd& r) const {
        if (p(0) <= 0 || p(2) <= 0 || std::abs(p(1)) > B) return false;
        for (size_t i = 0; i < in.t.size(); ++i) {
            double v = decay_model(in.t[i], p(0), p(1), p(2), fe0, feT, Tf);
            if (!std::isfinite(v)) return false;
            r(int(i)) = (in.y[i] - v) / in.sigma[i];
        }
        return true;
    }

    double objective(const P3& p) const {
        Eigen::VectorXd r(in.t.size());
        if (!residuals(p, r)) return kInf;
        return r.squaredNorm();
    }

    bool jacobian(const P3& p, Eigen::MatrixXd& J) const {
        const int N = int(in.t.size());
        Eigen::VectorXd rp(N), rm(N);
        for (int k = 0; k < 3; ++k) {
            double h = std::max(1e-8, 1e-6 * std::abs(p(k)));
            P3 pp = p, pm = p;
            pp(k) += h;
            pm(k) -= h;
            if (!residuals(pp, rp) || !residuals(pm, rm)) return false;
            J.col(k) = (rp - rm) / (2 * h);
        }
        return true;
    }
};

}  // namespace

std::vector<FitResult> fit_decay(const FitInput& in,
                                 const std::vector<std::array<double, 3>>& seeds) {
    const int N = int(in.t.size());
    if (N < 5) throw std::invalid_argument("fit_decay: need at least 5 points");
    if (in.y.size() != in.t.size() || in.sigma.size() != in.t.size())
        throw std::invalid_argument("fit_decay: size mismatch");
    for (double s : in.sigma)
        if (s <= 0) throw std::invalid_argument("fit_decay: sigmas must be positive");

    // uniform-grid Nyquist band; the optimizer never leaves it
    const double dt = in.t[1] - in.t[0];
    const double B  = PI / dt;
    FitProblem prob{in, in.y.front(), in.y.back(), in.t.back(), B};

    const int nu   = N - 3;
    const double tq = t_quantile_975(nu);

    std::vector<FitResult> out;
    for (size_t si = 0; si < seeds.size(); ++si) {
        FitResult fr;
        fr.seed_index = int(si);
        P3 p(seeds[si][0], seeds[si][1], seeds[si][2]);

        Eigen::VectorXd r(N);
        if (!prob.residuals(p, r)) {
            fr.rejection = "seed outside the admissible region";
            out.push_back(fr);
            continue;
        }
        double S  = r.squaredNorm();
        double mu = 1e-3;
        Eigen::MatrixXd J(N, 3);
        for (int it = 0; it < 200; ++it) {
            if (!prob.jacobian(p, J)) break;
            Eigen::Matrix3d A = J.transpose() * J;
            Eigen::Vector3d g = J.transpose() * r;
            Eigen::Matrix3d D = (A.diagonal().array() + 1e-12).matrix().asDiagonal();
            Eigen::Vector3d dp = -(A + mu * D).fullPivLu().solve(g);
            if (!dp.allFinite()) break;
            P3 pn     = p + dp;
            double Sn = prob.objective(pn);
            if (Sn < S) {
                p = pn;
                S = Sn;
                prob.residuals(p, r);
                mu = std::max(mu * 0.3, 1e-12);
                if (dp.norm() < 1e-10 * (1 + p.norm())) break;
            } else {
                mu *= 2.0;
                if (mu > 1e12) break;
            }
        }

        fr.lambda    = p(0);
        fr.gamma     = p(1);
        fr.alpha     = p(2);
        fr.objective = S;
        if (!std::isfinite(S)) {
            fr.rejection = "did not converge";
            out.push_back(fr);
            continue;
        }
        if (!prob.jacobian(p, J)) {
            fr.rejection = "jacobian failure at the optimum";
            out.push_back(fr);
            continue;
        }
        Eigen::Matrix3d A = J.transpose() * J;
        Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
        if (!lu.isInvertible()) {
            fr.rejection = "singular normal matrix";
            out.push_back(fr);
            continue;
        }
        // exact per-point weights: covariance is the unscaled inverse normal matrix
        Eigen::Matrix3d C = lu.inverse();
        for (int k = 0; k < 3; ++k) {
            fr.se[k]         = std::sqrt(std::max(C(k, k), 0.0));
            fr.half_width[k] = tq * fr.se[k];
        }
        const int kpar = 4;
        fr.aicc = N * std::log(S / N) + 2 * kpar + 2.0 * kpar * (kpar + 1) / (N - kpar - 1);

        // rule (a): the fitted curve must stay a fidelity
        bool in_range = true;
        for (int i = 0; i < 100; ++i) {
            double tt = in.t.front() + (in.t.back() - in.t.front()) * i / 99.0;
            double v  = decay_model(tt, p(0), p(1), p(2), prob.fe0, prob.feT, prob.Tf);
            if (v < -1e-9 || v > 1 + 1e-9) {
                in_range = false;
                break;
            }
        }
        if (!in_range) {
            fr.rejection = "predicted fidelity leaves [0, 1]";
            out.push_back(fr);
            continue;
        }
        // rule (b): every parameter must exceed its own confidence half-width
        double vals[3] = {p(0), p(1), p(2)};
        bool under     = false;
        for (int k = 0; k < 3; ++k)
            if (std::abs(vals[k]) < fr.half_width[k]) under = true;
        if (under) {
            fr.rejection = "parameter smaller than its error";
            out.push_back(fr);
            continue;
        }
        fr.accepted = true;
        out.push_back(fr);
    }
    return out;
}

std::optional<FitResult> postselect_and_fold(const std::vector<FitResult>& fits, double dt) {
    if (dt <= 0) throw std::invalid_argument("postselect_and_fold: dt must be positive");
    const double B = 2 * PI / (2 * dt);
    const FitResult* best = nullptr;
    for (const auto& f : fits) {
        if (!f.accepted) continue;
        if (!best || f.aicc < best->aicc ||
            (f.aicc == best->aicc && f.seed_index < best->seed_index))
            best = &f;
    }
    if (!best) return std::nullopt;
    FitResult folded = *best;
    folded.gamma     = std::fmod(std::abs(folded.gamma), B);
    return folded;
}

std::vector<double> haar_convergence(const std::vector<double>& fidelities,
                                     const std::vector<int>& prefix_sizes) {
    std::vector<double> out;
    for (int n : prefix_sizes) {
        if (n < 1 || size_t(n) > fidelities.size())
            throw std::invalid_argument("haar_convergence: prefix exceeds the data");
        out.push_back(std::accumulate(fidelities.begin(), fidelities.begin() + n, 0.0) / n);
    }
    return out;
}

namespace {

double betacf(double a, double b, double x) {
    const double tiny = 1e-30;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d        = 1.0 / d;
    double h = d;
    for (int m = 1; m < 300; ++m) {
        int m2    = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d         = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d  = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d             = 1.0 / d;
        double delt   = d * c;
        h *= delt;
        if (std::abs(delt - 1.0) < 1e-14) break;
    }
    return h;
}

double betainc(double a, double b, double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    double front = std::exp(a * std::log(x) + b * std::log(1 - x) - lbeta);
    if (x < (a + 1) / (a + b + 2)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1 - x) / b;
}

double t_cdf(double x, double nu) {
    if (x == 0) return 0.5;
    double ib = betainc(nu / 2, 0.5, nu / (nu + x * x));
    return x > 0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

}  // namespace

double t_quantile_975(int nu) {
    if (nu < 1) throw std::invalid_argument("t_quantile_975: nu must be >= 1");
    double lo = 0.0, hi = 100.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (t_cdf(mid, nu) < 0.975 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace dd
