#include "dd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dd {

namespace {

// unit rotation axis of a physical pulse after axis misspecification
Mat pulse_axis(const Pulse& p, const PulseErrorModel& err) {
    Mat in_plane = std::cos(p.phi) * pauli(1) + std::sin(p.phi) * pauli(2);
    Mat perp     = -std::sin(p.phi) * pauli(1) + std::cos(p.phi) * pauli(2);
    Mat ax       = in_plane + err.eps_b * perp + err.eps_c * pauli(3);
    return ax / std::sqrt(1.0 + err.eps_b * err.eps_b + err.eps_c * err.eps_c);
}

// time-sliced propagator of H_ctrl(t) + H0 with midpoint sampling, halving
// the step until the result moves by < tol
template <typename Fn>
Mat sliced_propagator(Fn&& hamiltonian_at, double t_total, int k0, double tol) {
    Mat prev;
    for (int k = k0; k <= 4096; k *= 2) {
        double dt = t_total / k;
        Mat U;
        for (int i = 0; i < k; ++i) {
            Mat Hi = hamiltonian_at((i + 0.5) * dt);
            Mat Ui = expm_hermitian(Hi, dt);
            U      = (i == 0) ? Ui : Mat(Ui * U);
        }
        if (prev.size() > 0 && op_norm(U - prev) < tol) return U;
        prev = U;
    }
    return prev;
}

}  // namespace

Mat ideal_pulse_unitary(const Pulse& p, const PulseErrorModel& err) {
    switch (p.kind) {
        case PulseKind::identity_wait: return pauli(0);
        case PulseKind::virtual_z:
            return expm_hermitian(pauli(3), double(p.sign) * p.theta / 2);
        case PulseKind::physical:
        default:
            return expm_hermitian(pulse_axis(p, err),
                                  double(p.sign) * (p.theta / 2) * (1.0 + err.eps_r));
    }
}

Mat finite_pulse_unitary(const Pulse& p, double duration, const PulseErrorModel& err,
                         const NoiseModel& model) {
    const int dB = model.dim_bath();
    const Mat IB = Mat::Identity(dB, dB);
    if (p.kind == PulseKind::virtual_z) return kron(ideal_pulse_unitary(p, err), IB);
    const Mat Hf = model.h_full();
    if (p.kind == PulseKind::identity_wait) return expm_hermitian(Hf, duration);
    if (duration <= 0) return kron(ideal_pulse_unitary(p, err), IB);

    const double angle = double(p.sign) * (p.theta / 2) * (1.0 + err.eps_r);
    const Mat axis     = kron(pulse_axis(p, err), IB);
    if (err.envelope == Envelope::square)
        return expm_hermitian((angle / duration) * axis + Hf, duration);

    // truncated gaussian envelope on [0, duration], sigma = duration/6,
    // normalized so the integrated drive reproduces the target angle
    const double s  = duration / 6.0;
    const double c  = duration / 2.0;
    auto bell       = [&](double t) { return std::exp(-0.5 * (t - c) * (t - c) / (s * s)); };
    // integral of the bell over the window via erf
    const double z  = c / (std::sqrt(2.0) * s);
    const double I0 = s * std::sqrt(2.0 * PI) * std::erf(z);
    auto H_at       = [&](double t) -> Mat { return (angle * bell(t) / I0) * axis + Hf; };
    return sliced_propagator(H_at, duration, 16, 1e-11);
}

Mat free_propagator(const NoiseModel& model, double tau, Frame frame) {
    if (tau < 0) throw std::invalid_argument("free_propagator: negative duration");
    if (frame == Frame::lab) return expm_hermitian(model.h_full(), tau);
    if (!model.rotating)
        throw std::invalid_argument("free_propagator: model lacks rotating-frame parameters");
    if (model.dim_bath() != 2)
        throw std::invalid_argument("free_propagator: rotating frame needs a two-qubit model");
    return rotating_frame_propagator(model.h_full(), model.rotating->wd, tau);
}

Mat propagate(const Schedule& sched, const PulseErrorModel& err, const NoiseModel& model) {
    auto problems = validate(sched);
    if (!problems.empty()) throw std::invalid_argument("propagate: " + problems.front());
    const int dB = model.dim_bath();
    const Mat IB = Mat::Identity(dB, dB);
    Mat U        = Mat::Identity(2 * dB, 2 * dB);
    const double tol = 1e-15 * std::max(sched.T, 1.0);
    double t = 0;
    for (const auto& e : sched.events) {
        if (e.t_start > t + tol) U = expm_hermitian(model.h_full(), e.t_start - t) * U;
        if (e.duration > 0)
            U = finite_pulse_unitary(e.pulse, e.duration, err, model) * U;
        else if (e.pulse.kind != PulseKind::identity_wait)
            U = kron(ideal_pulse_unitary(e.pulse, err), IB) * U;
        t = e.t_start + e.duration;
    }
    if (sched.T > t + tol) U = expm_hermitian(model.h_full(), sched.T - t) * U;
    return U;
}

std::vector<ToggledSegment> toggling_segments(const Schedule& sched, const NoiseModel& model) {
    for (const auto& e : sched.events)
        if (e.duration != 0 && e.pulse.kind != PulseKind::identity_wait)
            throw std::invalid_argument("toggling_segments: zero-width pulses required");
    const int dB = model.dim_bath();
    const Mat IB = Mat::Identity(dB, dB);
    const Mat H  = model.h_full();
    PulseErrorModel perfect;

    std::vector<ToggledSegment> segs;
    Mat Uc   = Mat::Identity(2 * dB, 2 * dB);
    double t = 0;
    auto emit = [&](double t1) {
        if (t1 > t + 1e-15 * std::max(sched.T, 1.0)) {
            segs.push_back({t, t1, Uc.adjoint() * H * Uc});
            t = t1;
        }
    };
    for (const auto& e : sched.events) {
        emit(e.t_start);
        if (e.pulse.kind != PulseKind::identity_wait)
            Uc = kron(ideal_pulse_unitary(e.pulse, perfect), IB) * Uc;
        t = std::max(t, e.t_start + e.duration);
    }
    emit(sched.T);
    return segs;
}

Mat toggling_hamiltonian(const Schedule& sched, const NoiseModel& model, double t) {
    auto segs = toggling_segments(sched, model);
    for (const auto& s : segs)
        if (t >= s.t0 && t < s.t1) return s.H;
    if (!segs.empty() && t >= segs.back().t1) return segs.back().H;
    return model.h_full();  // before the first pulse (or empty schedule)
}

Mat first_order_average_hamiltonian(const Schedule& sched, const NoiseModel& model) {
    auto segs = toggling_segments(sched, model);
    const int D = 2 * model.dim_bath();
    Mat acc     = Mat::Zero(D, D);
    for (const auto& s : segs) acc += (s.t1 - s.t0) * s.H;
    return acc / sched.T;
}

Mat number_operator_2q() {
    return kron(pauli(0), pauli(0)) - 0.5 * (kron(pauli(3), pauli(0)) + kron(pauli(0), pauli(3)));
}

Mat rotating_frame_propagator(const Mat& H_lab, double omega_d, double t) {
    if (H_lab.rows() != 4) throw std::invalid_argument("rotating_frame_propagator: need dim 4");
    const Mat N = number_operator_2q();
    auto H_at   = [&](double s) -> Mat {
        Mat V = expm_hermitian(N, omega_d * s);
        return V.adjoint() * H_lab * V - omega_d * N;
    };
    return sliced_propagator(H_at, t, 64, 1e-10);
}

TermScanReport rotating_frame_term_scan(const SequenceIR& seq, double omega_d, double tau) {
    if (omega_d == 0) throw std::invalid_argument("term_scan: drive frequency required");
    if (seq.pulses.empty()) throw std::invalid_argument("term_scan: sequence has no pulses");
    if (tau <= 0) throw std::invalid_argument("term_scan: tau must be positive");

    const size_t n = seq.pulses.size();
    const double T = double(n) * tau;
    // occupation numbers of |00>, |01>, |10>, |11>
    const double nu[4] = {0, 1, 1, 2};
    const Mat I2       = pauli(0);
    PulseErrorModel perfect;

    // closed-form segment integral of e^{i w t} on [a, b]
    auto osc_int = [&](double w, double a, double b) -> cd {
        if (std::abs(w) * (b - a) < 1e-14) return cd(b - a, 0);
        return (std::exp(cd(0, w * b)) - std::exp(cd(0, w * a))) / cd(0, w);
    };

    // pulse times from the interval fractions (zero-width, no extra delay)
    std::vector<double> pt(n);
    {
        double t = 0;
        for (size_t k = 0; k < n; ++k) {
            t += seq.fractions[k] * T;
            pt[k] = t;
        }
    }

    auto averaged_norm = [&](const Mat& O, bool with_dd) -> double {
        Mat acc = Mat::Zero(4, 4);
        Mat Udd = Mat::Identity(4, 4);
        double t0 = 0;
        auto accumulate = [&](double a, double b) {
            if (b <= a + 1e-15 * T) return;
            Mat Od = with_dd ? Mat(Udd.adjoint() * O * Udd) : O;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    acc(r, c) += Od(r, c) * osc_int(omega_d * (nu[r] - nu[c]), a, b);
        };
        for (size_t k = 0; k < n; ++k) {
            accumulate(t0, pt[k]);
            t0 = pt[k];
            if (seq.pulses[k].kind != PulseKind::identity_wait)
                Udd = kron(ideal_pulse_unitary(seq.pulses[k], perfect), I2) * Udd;
        }
        accumulate(t0, T);
        return op_norm(acc / T);
    };

    TermScanReport rep;
    rep.tau           = tau;
    double cycles     = tau * omega_d / (2 * PI);
    rep.fine_tuned    = std::abs(cycles - std::round(cycles)) < 1e-9 * std::max(1.0, cycles);
    const char* letter = "IXYZ";
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            Mat O = kron(pauli(a), pauli(b));
            TermScanEntry e;
            e.label      = std::string{letter[a], letter[b]};
            e.with_dd    = averaged_norm(O, true);
            e.without_dd = averaged_norm(O, false);
            rep.entries.push_back(std::move(e));
        }
    return rep;
}

// ---- density-operator paths ----

namespace {

// row-major vectorization: vec(A rho B) = (A kron B^T) vec(rho)
Mat lr(const Mat& A, const Mat& B) { return kron(A, B.transpose()); }

Mat dissipator(const Mat& L) {
    const int d = int(L.rows());
    Mat I = Mat::Identity(d, d);
    Mat LdL = L.adjoint() * L;
    return lr(L, L.adjoint()) - 0.5 * (lr(LdL, I) + lr(I, LdL));
}

Mat unitary_superop(const Mat& U) { return lr(U, U.adjoint()); }

Mat lindblad_generator_1q(double T1, double T2) {
    Mat sm(2, 2);
    sm.setZero();
    sm(0, 1) = 1.0;  // |0><1|
    double gphi = 1.0 / T2 - 0.5 / T1;
    if (gphi < 0) throw std::invalid_argument("lindblad: T2 > 2 T1 is unphysical");
    Mat G = (1.0 / T1) * dissipator(sm) + (gphi / 2.0) * dissipator(pauli(3));
    return G;
}

Mat matrix_power(Mat base, long n) {
    Mat acc = Mat::Identity(base.rows(), base.cols());
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

}  // namespace

Mat lindblad_propagate_1q(const Schedule& sched, const PulseErrorModel& err, double T1,
                          double T2) {
    const Mat G = lindblad_generator_1q(T1, T2);
    auto free_over = [&](double dt) -> Mat { return expm(G * dt); };
    Mat S    = Mat::Identity(4, 4);
    double t = 0;
    const double tol = 1e-15 * std::max(sched.T, 1.0);
    for (const auto& e : sched.events) {
        // the pulse is instantaneous at its slot start; its width idles
        if (e.t_start > t + tol) S = free_over(e.t_start - t) * S;
        if (e.pulse.kind != PulseKind::identity_wait)
            S = unitary_superop(ideal_pulse_unitary(e.pulse, err)) * S;
        if (e.duration > 0) S = free_over(e.duration) * S;
        t = e.t_start + e.duration;
    }
    if (sched.T > t + tol) S = free_over(sched.T - t) * S;
    return S;
}

Mat sc_evolution_superop(const ScModel& m, const std::vector<Pulse>& pulses, double T,
                         double delta, double d) {
    if (pulses.empty()) return expm(sc_generator(m) * T);
    const Mat G     = sc_generator(m);
    const double slot = delta + d;
    const size_t n  = pulses.size();
    long N          = long(std::floor(T / (double(n) * slot)));
    if (N < 1) N = 1;
    if (double(N) * double(n) * slot > T * (1 + 1e-12))
        throw std::invalid_argument("sc_evolution_superop: one repetition does not fit in T");

    const Mat F = expm(G * slot);
    Mat rep     = Mat::Identity(16, 16);
    for (const auto& p : pulses) {
        double phi = (p.sign < 0) ? p.phi + PI : p.phi;  // barred = opposite orientation
        rep        = sc_pulse_superop(m, phi) * rep;
        rep        = F * rep;
    }
    Mat total  = matrix_power(rep, N);
    double rem = T - double(N) * double(n) * slot;
    if (rem > 1e-15 * T) total = expm(G * rem) * total;
    return total;
}

namespace {

double survival(const Mat& superop, const Mat& rho0, const Eigen::Vector2cd& psi, int dB) {
    const int D = int(rho0.rows());
    Vec v(D * D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) v(i * D + j) = rho0(i, j);
    Vec w = superop * v;
    Mat rho(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) rho(i, j) = w(i * D + j);
    Mat rho1 = (dB == 1) ? rho : partial_trace_bath(rho, 2, dB);
    cd val   = (psi.adjoint() * rho1 * psi)(0);
    return std::real(val);
}

}  // namespace

double sc_survival(const Mat& superop, const Eigen::Vector2cd& psi) {
    Mat rho_q1 = psi * psi.adjoint();
    Mat rho_sp = Mat::Zero(2, 2);
    rho_sp(0, 0) = 1.0;  // spectator in |0>
    return survival(superop, kron(rho_q1, rho_sp), psi, 2);
}

double lindblad_survival_1q(const Mat& superop, const Eigen::Vector2cd& psi) {
    Mat rho0 = psi * psi.adjoint();
    return survival(superop, rho0, psi, 1);
}

}  // namespace dd
