#pragma once
// Small dense complex linear algebra on top of Eigen: Pauli basis, matrix
// exponentials, operator norms, polar decomposition, phase-aligned distance.
#include <Eigen/Dense>
#include <complex>
#include <cmath>

namespace dd {

using cd  = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double PI = 3.141592653589793238462643383279502884;

// sigma^0..sigma^3 = I, X, Y, Z
inline const Mat& pauli(int a) {
    static const Mat s[4] = {
        (Mat(2, 2) << 1, 0, 0, 1).finished(),
        (Mat(2, 2) << 0, 1, 1, 0).finished(),
        (Mat(2, 2) << 0, cd(0, -1), cd(0, 1), 0).finished(),
        (Mat(2, 2) << 1, 0, 0, -1).finished()};
    return s[a];
}

inline Mat kron(const Mat& A, const Mat& B) {
    Mat K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

// sup operator norm (largest singular value)
inline double op_norm(const Mat& A) {
    return A.jacobiSvd().singularValues()(0);
}

// exp(-i t H) for Hermitian H, via spectral decomposition
inline Mat expm_hermitian(const Mat& H, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    const auto& w = es.eigenvalues();
    const Mat& V  = es.eigenvectors();
    Vec ph(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) ph(k) = std::exp(cd(0, -t * w(k)));
    return V * ph.asDiagonal() * V.adjoint();
}

// general exp(A), scaling-and-squaring with Pade(13) (Higham 2005)
inline Mat expm(const Mat& A) {
    static const double b[14] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                 1187353796428800.,  129060195264000.,   10559470521600.,
                                 670442572800.,      33522128640.,       1323241920.,
                                 40840800.,          960960.,            16380.,
                                 182.,               1.};
    const Eigen::Index n = A.rows();
    double mu = A.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int s = 0;
    Mat As = A;
    const double theta13 = 5.371920351148152;
    if (mu > theta13) {
        s  = std::max(0, int(std::ceil(std::log2(mu / theta13))));
        As = A / std::pow(2.0, s);
    }
    Mat I  = Mat::Identity(n, n);
    Mat A2 = As * As, A4 = A2 * A2, A6 = A4 * A2;
    Mat U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                  b[3] * A2 + b[1] * I);
    Mat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 +
            b[0] * I;
    Mat F = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < s; ++k) F = F * F;
    return F;
}

// nearest unitary in Frobenius norm: polar factor U from SVD M = W S V^†
inline Mat polar_unitary(const Mat& M) {
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

// min over global phase of ||A - e^{i theta} B||, theta = arg tr(B^† A)
inline double phase_dist(const Mat& A, const Mat& B) {
    cd tr = (B.adjoint() * A).trace();
    cd ph = (std::abs(tr) < 1e-300) ? cd(1, 0) : tr / std::abs(tr);
    return op_norm(A - ph * B);
}

// trace out the second tensor factor of dim dB: result_{ij} = sum_b M_{(i,b),(j,b)}
inline Mat partial_trace_bath(const Mat& M, int dS, int dB) {
    Mat R = Mat::Zero(dS, dS);
    for (int i = 0; i < dS; ++i)
        for (int j = 0; j < dS; ++j)
            for (int b = 0; b < dB; ++b) R(i, j) += M(i * dB + b, j * dB + b);
    return R;
}

// trace out the first tensor factor of dim dA
inline Mat partial_trace_front(const Mat& M, int dA, int dB) {
    Mat R = Mat::Zero(dB, dB);
    for (int i = 0; i < dB; ++i)
        for (int j = 0; j < dB; ++j)
            for (int a = 0; a < dA; ++a) R(i, j) += M(a * dB + i, a * dB + j);
    return R;
}

}  // namespace dd
