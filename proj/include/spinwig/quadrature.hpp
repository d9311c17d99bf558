// quadrature.hpp
// Product quadrature for the phase-space measure. Per qubit the measure is
//   dOmega = (2/pi) sin(2 theta) dtheta dphi,  theta in [0, pi/2], phi in [0, pi),
// so each qubit carries total measure 2. Substituting u = cos(2 theta) turns the
// theta integral into a plain [-1, 1] integral handled by Gauss-Legendre; the
// phi integral of a trigonometric polynomial is exact on a uniform grid below
// the aliasing order.
#pragma once

#include "spinwig/core.hpp"
#include "spinwig/kernels.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace spinwig {

struct QuadratureRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration on P_m.
inline QuadratureRule1D gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("gauss_legendre requires at least one node");
    QuadratureRule1D rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[m - 1 - i] = w;
    }
    return rule;
}

struct Quadrature {
    int n = 0;  // qubits
    std::vector<double> theta, wtheta;
    std::vector<double> phi, wphi;

    static Quadrature product(int n, int theta_nodes, int phi_nodes) {
        check_qubit_count(n);
        if (theta_nodes < 1 || phi_nodes < 1)
            throw std::invalid_argument("quadrature needs at least one node per axis");
        Quadrature q;
        q.n = n;
        const QuadratureRule1D gl = gauss_legendre(theta_nodes);
        for (int j = 0; j < theta_nodes; ++j) {
            q.theta.push_back(0.5 * std::acos(gl.nodes[j]));
            q.wtheta.push_back(gl.weights[j] / std::numbers::pi);
        }
        for (int k = 0; k < phi_nodes; ++k) {
            q.phi.push_back(k * std::numbers::pi / phi_nodes);
            q.wphi.push_back(std::numbers::pi / phi_nodes);
        }
        double measure = 0;
        for (double wt : q.wtheta)
            for (double wp : q.wphi) measure += wt * wp;
        if (std::abs(measure - 2.0) > 1e-12)
            throw numeric_failure("per-qubit quadrature measure is not 2");
        return q;
    }

    // 16 theta nodes and 4n+2 phi nodes per qubit: exact for every integrand
    // this library produces (polynomials in cos 2theta and trigonometric
    // polynomials in 2phi of low order).
    static Quadrature defaults(int n) { return product(n, 16, 4 * n + 2); }

    std::size_t points_per_qubit() const { return theta.size() * phi.size(); }

    std::size_t total_points() const {
        std::size_t t = 1;
        for (int q = 0; q < n; ++q) t *= points_per_qubit();
        return t;
    }

    // Visits the full product grid; fn receives the phase point and its weight.
    void for_each_point(const std::function<void(const PhasePoint&, double)>& fn) const {
        const std::size_t per = points_per_qubit();
        std::vector<std::size_t> odo(static_cast<std::size_t>(n), 0);
        PhasePoint p(static_cast<std::size_t>(n));
        for (;;) {
            double w = 1.0;
            for (int q = 0; q < n; ++q) {
                const std::size_t it = odo[static_cast<std::size_t>(q)] / phi.size();
                const std::size_t ip = odo[static_cast<std::size_t>(q)] % phi.size();
                p[static_cast<std::size_t>(q)] = EulerAngles{theta[it], phi[ip], 0.0};
                w *= wtheta[it] * wphi[ip];
            }
            fn(p, w);
            int q = n - 1;
            while (q >= 0 && ++odo[static_cast<std::size_t>(q)] == per) {
                odo[static_cast<std::size_t>(q)] = 0;
                --q;
            }
            if (q < 0) break;
        }
    }
};

}  // namespace spinwig
