// witness.hpp
// GHZ-type entanglement certification from equatorial Wigner oscillations.
// The certified statement is relative to product states: the clock state
// maximizes the frequency-2n equatorial fringe amplitude over product states,
// so a fitted amplitude statistically above that bound cannot come from one.
#pragma once

#include "spinwig/core.hpp"
#include "spinwig/wigner.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

namespace spinwig {

struct EquatorScanResult {
    std::vector<double> phi;
    std::vector<double> estimate;
    std::vector<double> std_error;  // zeros for exact scans

    void validate() const {
        if (phi.size() != estimate.size() || phi.size() != std_error.size())
            throw std::invalid_argument("equator scan arrays must have equal lengths");
        for (double s : std_error)
            if (s < 0) throw std::invalid_argument("std errors must be nonnegative");
    }
};

inline EquatorScanResult exact_equator_scan(const DensityMatrix& rho, ParityKind kind,
                                            const std::vector<double>& phis) {
    EquatorScanResult scan;
    scan.phi = phis;
    for (const WignerSample& s : equator_scan(rho, kind, phis)) scan.estimate.push_back(s.value);
    scan.std_error.assign(phis.size(), 0.0);
    return scan;
}

struct OscillationFit {
    double amplitude = 0;        // >= 0
    double phase = 0;            // model: offset + amplitude * cos(2n phi + phase)
    double offset = 0;
    int frequency_index = 0;     // fixed to 2n in this module's phi convention
    double residual = 0;         // RMS residual of the fit
    double amplitude_std = 0;    // propagated from the per-point std errors
};

// Linear regression on {1, cos(2n phi), sin(2n phi)}; amplitude and its
// standard error follow from the (a, b) coefficients by the delta method.
inline OscillationFit fit_equatorial_oscillation(const EquatorScanResult& scan, int n) {
    check_qubit_count(n);
    scan.validate();
    const std::size_t m = scan.phi.size();
    const std::size_t needed = static_cast<std::size_t>(4 * n + 2);
    std::set<double> distinct(scan.phi.begin(), scan.phi.end());
    if (m < needed || distinct.size() < needed)
        throw underdetermined_fit("need at least " + std::to_string(needed) +
                                  " distinct phi samples for frequency " + std::to_string(2 * n));

    const double freq = 2.0 * n;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(m), 3);
    Eigen::VectorXd y(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        x(static_cast<Eigen::Index>(i), 0) = 1.0;
        x(static_cast<Eigen::Index>(i), 1) = std::cos(freq * scan.phi[i]);
        x(static_cast<Eigen::Index>(i), 2) = std::sin(freq * scan.phi[i]);
        y(static_cast<Eigen::Index>(i)) = scan.estimate[i];
    }

    const Eigen::Matrix3d xtx = x.transpose() * x;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(xtx);
    if (es.eigenvalues().minCoeff() < 1e-10 * es.eigenvalues().maxCoeff())
        throw underdetermined_fit("phi sampling is degenerate for the target frequency");
    const Eigen::Matrix3d xtx_inv = xtx.inverse();
    const Eigen::Vector3d beta = xtx_inv * (x.transpose() * y);

    const double a = beta(1), b = beta(2);
    OscillationFit fit;
    fit.offset = beta(0);
    fit.amplitude = std::hypot(a, b);
    fit.phase = std::atan2(-b, a);
    fit.frequency_index = 2 * n;
    fit.residual = std::sqrt((y - x * beta).squaredNorm() / static_cast<double>(m));

    // Cov(beta) = (X'X)^-1 X' diag(sigma_i^2) X (X'X)^-1
    Eigen::MatrixXd xs = x;
    for (std::size_t i = 0; i < m; ++i)
        xs.row(static_cast<Eigen::Index>(i)) *= scan.std_error[i] * scan.std_error[i];
    const Eigen::Matrix3d cov = xtx_inv * (x.transpose() * xs) * xtx_inv;
    if (fit.amplitude > 1e-12) {
        const Eigen::Vector2d grad(a / fit.amplitude, b / fit.amplitude);
        fit.amplitude_std = std::sqrt(std::max(0.0, grad.dot(cov.block<2, 2>(1, 1) * grad)));
    } else {
        fit.amplitude_std = std::sqrt(std::max(0.0, std::max(cov(1, 1), cov(2, 2))));
    }
    return fit;
}

// Frequency-2n equatorial fringe amplitude of the clock state, sqrt(3)^n * 2^(1-2n):
// the maximum over product states, hence the certification bound.
inline double separable_bound(int n) {
    check_qubit_count(n);
    if (n < 2) throw std::invalid_argument("separable_bound requires n >= 2");
    return std::pow(std::sqrt(3.0), n) * std::pow(2.0, 1 - 2 * n);
}

struct WitnessVerdict {
    double fitted_amplitude = 0;
    double bound = 0;
    double z_score = 0;
    bool entangled = false;
    int n = 0;
    double threshold_sigma = 0;
};

// entangled iff (A - bound) / sigma_A > threshold. Exact scans have
// sigma_A = 0; the verdict then degenerates to a sign test on A - bound.
inline WitnessVerdict certify_ghz_entanglement(const EquatorScanResult& scan, int n,
                                               double threshold_sigma = 5.0) {
    const OscillationFit fit = fit_equatorial_oscillation(scan, n);
    const double bound = separable_bound(n);
    double z;
    if (fit.amplitude_std > 0) {
        z = (fit.amplitude - bound) / fit.amplitude_std;
    } else {
        z = fit.amplitude > bound ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
    }
    return WitnessVerdict{fit.amplitude, bound, z, z > threshold_sigma, n, threshold_sigma};
}

// RMS difference between two slices on identical grids.
inline double template_distance(const SliceGrid& slice, const SliceGrid& tmpl) {
    if (slice.axis1 != tmpl.axis1 || slice.axis2 != tmpl.axis2 ||
        slice.values.size() != tmpl.values.size())
        throw std::invalid_argument("template_distance requires identical grids");
    double ss = 0;
    for (std::size_t i = 0; i < slice.values.size(); ++i) {
        const double d = slice.values[i] - tmpl.values[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(slice.values.size()));
}

}  // namespace spinwig
