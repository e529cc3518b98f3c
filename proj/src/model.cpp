#include "dd/model.hpp"

#include <cmath>
#include <stdexcept>

namespace dd {

namespace {

Mat random_hermitian(Rng& rng, int dim) {
    Mat H(dim, dim);
    for (int i = 0; i < dim; ++i) {
        H(i, i) = cd(rng.uniform(-1.0, 1.0), 0.0);
        for (int j = i + 1; j < dim; ++j) {
            cd z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            H(i, j) = z;
            H(j, i) = std::conj(z);
        }
    }
    return H;
}

}  // namespace

Mat NoiseModel::h_sb() const {
    const int dB = dim_bath();
    Mat H = Mat::Zero(2 * dB, 2 * dB);
    for (int a = 1; a <= 3; ++a) {
        if (gamma[a] == 0.0 || B[a].rows() == 0) continue;
        H += gamma[a] * kron(pauli(a), B[a]);
    }
    return H;
}

Mat NoiseModel::h_full() const {
    return h_sb() + kron(pauli(0), HB);
}

void NoiseModel::refresh_norms() {
    J    = op_norm(h_sb());
    beta = op_norm(HB);
    eps  = J + beta;
}

NoiseModel make_generic_bath(uint64_t seed, int n_bath, double J_target, double beta_target) {
    Rng rng(seed);
    NoiseModel m;
    m.n_bath = n_bath;
    const int dB = 1 << n_bath;
    for (int a = 1; a <= 3; ++a) m.B[a] = random_hermitian(rng, dB);
    m.B[0] = Mat::Zero(dB, dB);
    m.HB   = random_hermitian(rng, dB);
    m.gamma = {0, 1, 1, 1};
    // rescale couplings and bath Hamiltonian to hit the requested norms exactly
    double j0 = op_norm(m.h_sb());
    if (j0 > 0) for (int a = 1; a <= 3; ++a) m.B[a] *= (J_target / j0);
    double b0 = op_norm(m.HB);
    if (b0 > 0) m.HB *= (beta_target / b0);
    m.refresh_norms();
    return m;
}

NoiseModel make_dephasing_bath(uint64_t seed, int n_bath, double J_target, double beta_target) {
    Rng rng(seed);
    NoiseModel m;
    m.n_bath = n_bath;
    const int dB = 1 << n_bath;
    m.B[3] = random_hermitian(rng, dB);
    m.B[1] = Mat::Zero(dB, dB);
    m.B[2] = Mat::Zero(dB, dB);
    m.B[0] = Mat::Zero(dB, dB);
    m.HB   = random_hermitian(rng, dB);
    m.gamma = {0, 0, 0, 1};
    double j0 = op_norm(m.h_sb());
    if (j0 > 0) m.B[3] *= (J_target / j0);
    double b0 = op_norm(m.HB);
    if (b0 > 0) m.HB *= (beta_target / b0);
    m.refresh_norms();
    return m;
}

ScModel draw_sc_calibration(Rng& rng) {
    ScModel m;
    const double twopi = 2.0 * PI;
    m.dq1 = twopi * 50e3 * rng.uniform(-1.0, 1.0);
    m.dq2 = twopi * 50e3 * rng.uniform(-1.0, 1.0);
    m.jzz = twopi * rng.uniform(20e3, 40e3);
    m.T1a = 100e-6 * rng.uniform(0.9, 1.1);
    m.T1b = 100e-6 * rng.uniform(0.9, 1.1);
    m.T2a = std::min(90e-6 * rng.uniform(0.9, 1.1), 2.0 * m.T1a);
    m.T2b = std::min(90e-6 * rng.uniform(0.9, 1.1), 2.0 * m.T1b);
    m.eps_r = 0.015 * rng.normal();
    m.tilt  = 0.01 * rng.normal();
    return m;
}

namespace {

// row-major vectorization: vec(A rho B) = (A kron B^T) vec(rho)
Mat left_right(const Mat& A, const Mat& B) {
    return kron(A, B.transpose());
}

Mat dissipator(const Mat& L) {
    const int d = int(L.rows());
    Mat I = Mat::Identity(d, d);
    Mat LdL = L.adjoint() * L;
    return left_right(L, L.adjoint()) - 0.5 * (left_right(LdL, I) + left_right(I, LdL));
}

}  // namespace

Mat sc_generator(const ScModel& m) {
    Mat I2 = pauli(0), Z = pauli(3);
    Mat Z1 = kron(Z, I2), Z2 = kron(I2, Z);
    Mat H = 0.5 * m.dq1 * Z1 + 0.5 * m.dq2 * Z2 + m.jzz * kron(Z, Z);

    Mat sm(2, 2);  // lowering operator |0><1|
    sm.setZero();
    sm(0, 1) = 1.0;

    Mat I4 = Mat::Identity(4, 4);
    Mat G  = cd(0, -1) * (left_right(H, I4) - left_right(I4, H));

    auto add_qubit_noise = [&](double T1, double T2, bool first) {
        Mat rel = first ? kron(sm, I2) : kron(I2, sm);
        Mat dep = first ? Z1 : Z2;
        G += (1.0 / T1) * dissipator(rel);
        double gphi = 1.0 / T2 - 0.5 / T1;
        if (gphi < 0) throw std::runtime_error("unphysical T2 > 2 T1");
        G += (gphi / 2.0) * dissipator(dep);
    };
    add_qubit_noise(m.T1a, m.T2a, true);
    add_qubit_noise(m.T1b, m.T2b, false);
    return G;
}

Mat sc_pulse_superop(const ScModel& m, double phi) {
    // pi rotation of qubit 1 about an axis in the xy plane at angle phi,
    // with calibration errors: overrotation eps_r and axis tilt toward z
    double nx = std::cos(phi), ny = std::sin(phi), nz = m.tilt;
    double nn = std::sqrt(nx * nx + ny * ny + nz * nz);
    Mat axis = (nx * pauli(1) + ny * pauli(2) + nz * pauli(3)) / nn;
    Mat U1   = expm_hermitian(axis, 0.5 * PI * (1.0 + m.eps_r));
    Mat U    = kron(U1, pauli(0));
    return left_right(U, U.adjoint());
}

}  // namespace dd
