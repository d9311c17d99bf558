// kernels.hpp
// SU(2) Euler-angle rotations, the two extended parity operators and the
// displaced kernels Delta(Omega) = U Pi U^dag whose expectation values are the
// spin Wigner functions.
#pragma once

#include "spinwig/core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace spinwig {

struct EulerAngles {
    double theta = 0;
    double phi = 0;
    double Phi = 0;  // third Euler angle; never affects a kernel
};

// One Euler triple per qubit.
using PhasePoint = std::vector<EulerAngles>;

enum class ParityKind { Su2N, TensorSu2 };

inline std::string to_string(ParityKind kind) {
    return kind == ParityKind::Su2N ? "su2n" : "tensor";
}

// Per-qubit rotation U(theta, phi, Phi) = exp(i phi sz) exp(-i theta sy) exp(i Phi sz).
//
// The sign of the middle factor is chosen so that U sz U^dag points along
//   n(theta, phi) = (sin2theta cos2phi, -sin2theta sin2phi, cos2theta),
// the axis convention every closed form in wigner.hpp (GHZ interference term,
// clock-state product form) is written against.
inline Eigen::Matrix2cd su2_rotation(const EulerAngles& a) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    const cdouble ep = std::exp(cdouble(0, a.phi));
    const cdouble eP = std::exp(cdouble(0, a.Phi));
    Eigen::Matrix2cd u;
    u << c * ep * eP, -s * ep / eP,
         s * eP / ep, c / (ep * eP);
    return u;
}

// Kronecker product over qubits in index order (qubit 0 is the leftmost factor).
inline Mat composite_rotation(const PhasePoint& p) {
    const int n = static_cast<int>(p.size());
    check_qubit_count(n);
    Mat u = su2_rotation(p[0]);
    for (int q = 1; q < n; ++q) u = kron(u, su2_rotation(p[q]));
    return u;
}

// Diagonal of the extended parity operator, in closed form.
//   Su2N:      first entry [1 + (2^n - 1) sqrt(2^n + 1)] / 2^n,
//              all others [1 - sqrt(2^n + 1)] / 2^n.
//   TensorSu2: tensor product over qubits of (I + sqrt(3) sz)/2.
// Both have unit trace.
inline Eigen::VectorXd parity_diagonal(ParityKind kind, int n) {
    check_qubit_count(n);
    const Eigen::Index d = dim_of(n);
    Eigen::VectorXd diag(d);
    if (kind == ParityKind::Su2N) {
        const double root = std::sqrt(static_cast<double>(d) + 1.0);
        diag.setConstant((1.0 - root) / static_cast<double>(d));
        diag(0) = (1.0 + (static_cast<double>(d) - 1.0) * root) / static_cast<double>(d);
    } else {
        const double up = (1.0 + std::sqrt(3.0)) / 2.0;
        const double down = (1.0 - std::sqrt(3.0)) / 2.0;
        for (Eigen::Index idx = 0; idx < d; ++idx) {
            double v = 1.0;
            for (int q = 0; q < n; ++q) v *= bit_of(static_cast<std::size_t>(idx), q, n) ? down : up;
            diag(idx) = v;
        }
    }
    return diag;
}

inline Mat extended_parity(ParityKind kind, int n) {
    return parity_diagonal(kind, n).cast<cdouble>().asDiagonal();
}

// Displaced kernel Delta(Omega) = U(Omega) Pi U^dag(Omega). Hermitian, same
// spectrum as Pi, independent of the third Euler angles.
inline Mat kernel_at(const PhasePoint& p, ParityKind kind) {
    const Mat u = composite_rotation(p);
    const Eigen::VectorXd diag = parity_diagonal(kind, static_cast<int>(p.size()));
    return u * diag.cast<cdouble>().asDiagonal() * u.adjoint();
}

// Unit vector n such that the one-qubit TensorSu2 kernel at these angles is
// (I + sqrt(3) n.sigma)/2. The doubled angles cover the Bloch sphere once for
// theta in [0, pi/2), phi in [0, pi).
inline Eigen::Vector3d kernel_axis(const EulerAngles& a) {
    return {std::sin(2 * a.theta) * std::cos(2 * a.phi),
            -std::sin(2 * a.theta) * std::sin(2 * a.phi),
            std::cos(2 * a.theta)};
}

}  // namespace spinwig
