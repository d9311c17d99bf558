// wigner.hpp
// Pointwise, sliced and integrated evaluation of the two spin Wigner
// functions, plus closed-form oracles for the GHZ interpolation family and the
// clock state. The oracles share no code with the kernel path on purpose:
// agreement between the two routes is a correctness check, not a tautology.
#pragma once

#include "spinwig/core.hpp"
#include "spinwig/kernels.hpp"
#include "spinwig/quadrature.hpp"
#include "spinwig/states.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace spinwig {

struct WignerSample {
    PhasePoint point;
    double value = 0;
};

// Dense 2D slice; values are row-major with axis1 as the major index.
struct SliceGrid {
    std::string axis1_name, axis2_name;
    std::vector<double> axis1, axis2;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }
};

inline constexpr double kImagTol = 1e-10;

inline PhasePoint equal_angle_point(int n, double theta, double phi) {
    return PhasePoint(static_cast<std::size_t>(n), EulerAngles{theta, phi, 0.0});
}

inline PhasePoint equator_point(int n, double phi) {
    return equal_angle_point(n, std::numbers::pi / 4.0, phi);
}

// W(Omega) = Tr(rho Delta(Omega)); the trace of two Hermitian matrices must be
// real up to round-off, anything larger is a usage or numerics bug.
inline double wigner_at(const DensityMatrix& rho, const PhasePoint& p, ParityKind kind) {
    if (static_cast<int>(p.size()) != rho.n)
        throw std::invalid_argument("phase point qubit count does not match the state");
    const cdouble tr = (rho.mat * kernel_at(p, kind)).trace();
    if (std::abs(tr.imag()) >= kImagTol)
        throw numeric_failure("Wigner value has a non-negligible imaginary part");
    return tr.real();
}

// Same value through the measurement protocol: rotate the state, then weight
// the computational-basis populations by the parity diagonal.
inline double wigner_via_populations(const DensityMatrix& rho, const PhasePoint& p,
                                     ParityKind kind) {
    if (static_cast<int>(p.size()) != rho.n)
        throw std::invalid_argument("phase point qubit count does not match the state");
    const Mat u = composite_rotation(p);
    const Mat rotated = u.adjoint() * rho.mat * u;
    const Eigen::VectorXd diag = parity_diagonal(kind, rho.n);
    cdouble acc = 0;
    for (Eigen::Index k = 0; k < diag.size(); ++k) acc += rotated(k, k) * diag(k);
    if (std::abs(acc.imag()) >= kImagTol)
        throw numeric_failure("Wigner value has a non-negligible imaginary part");
    return acc.real();
}

// Slice with every qubit at the same (theta, phi), third angles zero.
inline SliceGrid equal_angle_slice(const DensityMatrix& rho, ParityKind kind,
                                   const std::vector<double>& thetas,
                                   const std::vector<double>& phis) {
    if (thetas.empty() || phis.empty())
        throw std::invalid_argument("equal_angle_slice requires nonempty axes");
    SliceGrid g{"theta", "phi", thetas, phis, {}};
    g.values.reserve(thetas.size() * phis.size());
    for (double t : thetas)
        for (double f : phis) g.values.push_back(wigner_at(rho, equal_angle_point(rho.n, t, f), kind));
    return g;
}

// Two-qubit slice over (theta1, theta2) at phi1 = phi2 = 0.
inline SliceGrid theta_theta_slice(const DensityMatrix& rho, ParityKind kind,
                                   const std::vector<double>& thetas1,
                                   const std::vector<double>& thetas2) {
    if (rho.n != 2) throw std::invalid_argument("theta_theta_slice requires a two-qubit state");
    if (thetas1.empty() || thetas2.empty())
        throw std::invalid_argument("theta_theta_slice requires nonempty axes");
    SliceGrid g{"theta1", "theta2", thetas1, thetas2, {}};
    g.values.reserve(thetas1.size() * thetas2.size());
    for (double t1 : thetas1)
        for (double t2 : thetas2)
            g.values.push_back(wigner_at(rho, {EulerAngles{t1, 0, 0}, EulerAngles{t2, 0, 0}}, kind));
    return g;
}

// Samples along the equator: every theta at pi/4, all phis swept together.
inline std::vector<WignerSample> equator_scan(const DensityMatrix& rho, ParityKind kind,
                                              const std::vector<double>& phi_values) {
    if (rho.n < 2) throw std::invalid_argument("equator_scan requires n >= 2");
    std::vector<WignerSample> out;
    out.reserve(phi_values.size());
    for (double f : phi_values) {
        PhasePoint p = equator_point(rho.n, f);
        out.push_back({p, wigner_at(rho, p, kind)});
    }
    return out;
}

// Closed form for the TensorSu2 Wigner function of
//   gamma |GHZ><GHZ| + (1-gamma) (|0..0><0..0| + |1..1><1..1|)/2:
// two polar product terms plus a gamma-weighted interference term at the
// maximum azimuthal frequency.
inline double analytic_ghz_wigner(int n, double gamma, const PhasePoint& p) {
    check_qubit_count(n);
    if (static_cast<int>(p.size()) != n)
        throw std::invalid_argument("phase point qubit count mismatch");
    const double r3 = std::sqrt(3.0);
    double up = 1.0, down = 1.0, fringe = 1.0, phi_sum = 0.0;
    for (const EulerAngles& a : p) {
        up *= 1.0 + r3 * std::cos(2 * a.theta);
        down *= 1.0 - r3 * std::cos(2 * a.theta);
        fringe *= r3 * std::sin(2 * a.theta);
        phi_sum += a.phi;
    }
    const double scale = std::pow(2.0, -(n + 1));
    return scale * (up + down) + 2.0 * scale * gamma * fringe * std::cos(2 * phi_sum);
}

// Closed form for the TensorSu2 Wigner function of the clock state: a product
// of per-qubit equatorial cosines with phases advancing by 2*pi*k/n.
inline double analytic_clock_wigner(int n, const PhasePoint& p) {
    check_qubit_count(n);
    if (static_cast<int>(p.size()) != n)
        throw std::invalid_argument("phase point qubit count mismatch");
    const double r3 = std::sqrt(3.0);
    double prod = 1.0;
    for (int k = 1; k <= n; ++k) {
        const EulerAngles& a = p[static_cast<std::size_t>(k - 1)];
        prod *= 1.0 + r3 * std::sin(2 * a.theta) *
                          std::cos(2 * a.phi + 2.0 * std::numbers::pi * k / n);
    }
    return std::pow(2.0, -n) * prod;
}

// Quadrature of Delta over the product measure. For TensorSu2 this resolves
// the identity; no claim is made for Su2N, whose natural measure under this
// parametrization is left open.
inline Mat integrate_kernel(ParityKind kind, int n, const Quadrature& q) {
    check_qubit_count(n);
    if (q.n != n) throw std::invalid_argument("quadrature qubit count mismatch");
    Mat acc = Mat::Zero(dim_of(n), dim_of(n));
    q.for_each_point([&](const PhasePoint& p, double w) { acc += w * kernel_at(p, kind); });
    return acc;
}

// Integral of W1*W2 over the product measure; equals Tr(rho1 rho2) for the
// tensor kernel. The Su2N kernel does not satisfy this identity under the
// product measure, so asking for it is an error rather than a wrong number.
inline double overlap_integral(const DensityMatrix& rho1, const DensityMatrix& rho2,
                               ParityKind kind, const Quadrature& q) {
    if (kind != ParityKind::TensorSu2)
        throw unsupported_for_kind("overlap_integral is defined for the tensor kernel only");
    if (rho1.n != rho2.n) throw std::invalid_argument("overlap_integral qubit count mismatch");
    if (q.n != rho1.n) throw std::invalid_argument("quadrature qubit count mismatch");
    double acc = 0;
    q.for_each_point([&](const PhasePoint& p, double w) {
        acc += w * wigner_at(rho1, p, kind) * wigner_at(rho2, p, kind);
    });
    return acc;
}

// Marginal of a two-qubit tensor-kernel Wigner function: integrates the other
// qubit out by quadrature and returns a single-qubit function of (theta, phi).
inline std::function<double(const EulerAngles&)> marginal_slice(const DensityMatrix& rho,
                                                                ParityKind kind, int keep,
                                                                const Quadrature& q) {
    if (kind != ParityKind::TensorSu2)
        throw unsupported_for_kind("marginal_slice is defined for the tensor kernel only");
    if (rho.n != 2) throw std::invalid_argument("marginal_slice requires a two-qubit state");
    if (keep != 0 && keep != 1) throw std::invalid_argument("keep index must be 0 or 1");
    return [rho, kind, keep, theta = q.theta, wtheta = q.wtheta, phi = q.phi,
            wphi = q.wphi](const EulerAngles& a) {
        double acc = 0;
        PhasePoint p(2);
        p[static_cast<std::size_t>(keep)] = a;
        for (std::size_t it = 0; it < theta.size(); ++it)
            for (std::size_t ip = 0; ip < phi.size(); ++ip) {
                p[static_cast<std::size_t>(1 - keep)] = EulerAngles{theta[it], phi[ip], 0.0};
                acc += wtheta[it] * wphi[ip] * wigner_at(rho, p, kind);
            }
        return acc;
    };
}

}  // namespace spinwig
