// states.hpp
// Constructors and validators for the N-qubit pure and mixed states the rest
// of the library operates on.
#pragma once

#include "spinwig/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace spinwig {

struct PureState {
    int n = 0;
    Vec amps;  // length 2^n

    Eigen::Index dim() const { return amps.size(); }
};

struct DensityMatrix {
    int n = 0;
    Mat mat;  // 2^n x 2^n

    Eigen::Index dim() const { return mat.rows(); }
};

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

inline void validate_pure(const PureState& psi, double tol = kNormTol) {
    check_qubit_count(psi.n);
    if (psi.amps.size() != dim_of(psi.n))
        throw std::invalid_argument("amplitude vector length does not match 2^n");
    if (std::abs(psi.amps.norm() - 1.0) > tol)
        throw std::invalid_argument("pure state is not normalized");
}

// Hermiticity and unit trace are cheap and always checked; positivity costs an
// eigendecomposition so it is opt-in via check_psd.
inline void validate_density(const DensityMatrix& rho, bool check_psd = true) {
    check_qubit_count(rho.n);
    if (rho.mat.rows() != dim_of(rho.n) || rho.mat.cols() != dim_of(rho.n))
        throw std::invalid_argument("density matrix shape does not match 2^n x 2^n");
    if ((rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.mat.trace().real() - 1.0) > kTraceTol ||
        std::abs(rho.mat.trace().imag()) > kTraceTol)
        throw std::invalid_argument("density matrix trace is not 1");
    if (check_psd) {
        Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < kEigenvalueFloor)
            throw std::invalid_argument("density matrix has an eigenvalue below the PSD floor");
    }
}

// Clips eigenvalues in (kEigenvalueFloor, 0) to zero and renormalizes.
inline DensityMatrix clip_negative_eigenvalues(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    Mat m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    m /= m.trace().real();
    return DensityMatrix{rho.n, std::move(m)};
}

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline PureState bell(BellState which) {
    const double r = 1.0 / std::numbers::sqrt2;
    Vec a = Vec::Zero(4);
    switch (which) {
        case BellState::PhiPlus:  a(0) = r; a(3) = r;  break;
        case BellState::PhiMinus: a(0) = r; a(3) = -r; break;
        case BellState::PsiPlus:  a(1) = r; a(2) = r;  break;
        case BellState::PsiMinus: a(1) = r; a(2) = -r; break;
    }
    return PureState{2, std::move(a)};
}

// (|0...0> + |1...1>)/sqrt(2)
inline PureState ghz(int n) {
    check_qubit_count(n);
    if (n < 2) throw std::invalid_argument("ghz requires n >= 2");
    Vec a = Vec::Zero(dim_of(n));
    a(0) = a(dim_of(n) - 1) = 1.0 / std::numbers::sqrt2;
    return PureState{n, std::move(a)};
}

// Equal superposition of all weight-1 basis states.
inline PureState w_state(int n) {
    check_qubit_count(n);
    if (n < 2) throw std::invalid_argument("w_state requires n >= 2");
    Vec a = Vec::Zero(dim_of(n));
    for (int q = 0; q < n; ++q)
        a(static_cast<Eigen::Index>(std::size_t{1} << (n - 1 - q))) = 1.0 / std::sqrt(double(n));
    return PureState{n, std::move(a)};
}

// Tensor product over k = 1..n of (|0> + exp(2*pi*i*k/n)|1>)/sqrt(2); the
// k-th factor sits at tensor position k-1.
inline PureState clock_state(int n) {
    check_qubit_count(n);
    Vec a = Vec::Constant(dim_of(n), 1.0);
    for (int k = 1; k <= n; ++k) {
        const cdouble phase = std::exp(cdouble(0, 2.0 * std::numbers::pi * k / n));
        for (Eigen::Index idx = 0; idx < a.size(); ++idx)
            a(idx) *= bit_of(static_cast<std::size_t>(idx), k - 1, n)
                          ? phase / std::numbers::sqrt2
                          : 1.0 / std::numbers::sqrt2;
    }
    return PureState{n, std::move(a)};
}

inline DensityMatrix density(const PureState& psi) {
    return DensityMatrix{psi.n, psi.amps * psi.amps.adjoint()};
}

// gamma * |GHZ><GHZ| + (1-gamma) * (|0..0><0..0| + |1..1><1..1|)/2
inline DensityMatrix ghz_family(int n, double gamma) {
    check_qubit_count(n);
    if (n < 2) throw std::invalid_argument("ghz_family requires n >= 2");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("gamma must lie in [0, 1]");
    const Eigen::Index d = dim_of(n);
    Mat m = Mat::Zero(d, d);
    m(0, 0) = m(d - 1, d - 1) = 0.5;
    m(0, d - 1) = m(d - 1, 0) = 0.5 * gamma;
    return DensityMatrix{n, std::move(m)};
}

struct BlochAngles {
    double polar = 0;    // angle from |0> on the Bloch sphere
    double azimuth = 0;  // relative phase of |1>
};

// Tensor product of cos(polar/2)|0> + e^{i azimuth} sin(polar/2)|1>.
inline PureState product_state(const std::vector<BlochAngles>& angles) {
    const int n = static_cast<int>(angles.size());
    check_qubit_count(n);
    Vec a = Vec::Constant(dim_of(n), 1.0);
    for (int q = 0; q < n; ++q) {
        const cdouble a0 = std::cos(angles[q].polar / 2.0);
        const cdouble a1 = std::exp(cdouble(0, angles[q].azimuth)) * std::sin(angles[q].polar / 2.0);
        for (Eigen::Index idx = 0; idx < a.size(); ++idx)
            a(idx) *= bit_of(static_cast<std::size_t>(idx), q, n) ? a1 : a0;
    }
    return PureState{n, std::move(a)};
}

inline PureState superpose(const PureState& a, const PureState& b) {
    if (a.n != b.n) throw std::invalid_argument("superpose requires equal qubit counts");
    Vec sum = a.amps + b.amps;
    const double norm = sum.norm();
    if (norm < 1e-12)
        throw degenerate_superposition("superposition of the given states has zero norm");
    sum /= norm;
    return PureState{a.n, std::move(sum)};
}

inline DensityMatrix mixture(const std::vector<std::pair<double, DensityMatrix>>& terms) {
    if (terms.empty()) throw std::invalid_argument("mixture requires at least one term");
    const int n = terms.front().second.n;
    double wsum = 0;
    for (const auto& [w, rho] : terms) {
        if (w < 0) throw std::invalid_argument("mixture weights must be nonnegative");
        if (rho.n != n) throw std::invalid_argument("mixture terms must share the qubit count");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > kTraceTol)
        throw std::invalid_argument("mixture weights must sum to 1");
    Mat m = Mat::Zero(dim_of(n), dim_of(n));
    for (const auto& [w, rho] : terms) m += w * rho.mat;
    return DensityMatrix{n, std::move(m)};
}

// Partial trace onto the kept qubits, ordered by ascending kept index.
inline DensityMatrix reduced_density(const DensityMatrix& rho, const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("reduced_density requires a nonempty keep set");
    std::vector<int> kept(keep);
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    for (int q : kept)
        if (q < 0 || q >= rho.n)
            throw std::invalid_argument("reduced_density keep index out of range");

    const int n = rho.n;
    const int m = static_cast<int>(kept.size());
    std::vector<int> traced;
    for (int q = 0; q < n; ++q)
        if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

    // Embed (kept bits, traced bits) back into a full index.
    auto embed = [&](std::size_t kept_bits, std::size_t traced_bits) {
        std::size_t full = 0;
        for (int i = 0; i < m; ++i)
            if ((kept_bits >> (m - 1 - i)) & 1u) full |= std::size_t{1} << (n - 1 - kept[i]);
        for (std::size_t i = 0; i < traced.size(); ++i)
            if ((traced_bits >> (traced.size() - 1 - i)) & 1u)
                full |= std::size_t{1} << (n - 1 - traced[i]);
        return full;
    };

    const Eigen::Index dk = dim_of(m);
    const std::size_t dt = std::size_t{1} << traced.size();
    Mat out = Mat::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r)
        for (Eigen::Index c = 0; c < dk; ++c) {
            cdouble acc = 0;
            for (std::size_t b = 0; b < dt; ++b)
                acc += rho.mat(static_cast<Eigen::Index>(embed(static_cast<std::size_t>(r), b)),
                               static_cast<Eigen::Index>(embed(static_cast<std::size_t>(c), b)));
            out(r, c) = acc;
        }
    return DensityMatrix{m, std::move(out)};
}

}  // namespace spinwig
