// tomography.hpp
// The measurement protocol in simulation (rotate, read populations, with shot
// and readout noise) and linear reconstruction of the density matrix from
// Wigner data.
#pragma once

#include "spinwig/core.hpp"
#include "spinwig/kernels.hpp"
#include "spinwig/quadrature.hpp"
#include "spinwig/sampling.hpp"
#include "spinwig/states.hpp"
#include "spinwig/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace spinwig {

struct MeasurementSetting {
    PhasePoint point;
    std::uint64_t shots = 0;
};

struct NoiseModel {
    double readout_flip = 0;   // per-qubit probability a reported bit is flipped
    double depolarizing = 0;   // per-qubit probability the qubit is replaced by I/2 before rotation

    void validate() const {
        if (readout_flip < 0 || readout_flip > 1 || depolarizing < 0 || depolarizing > 1)
            throw std::invalid_argument("noise probabilities must lie in [0, 1]");
    }
};

// One measurement setting plus its shot counts, dense over basis states.
struct CountRecord {
    MeasurementSetting setting;
    std::vector<std::uint64_t> counts;  // length 2^n

    int n() const { return static_cast<int>(setting.point.size()); }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (std::uint64_t c : counts) t += c;
        return t;
    }
};

struct WignerEstimate {
    double value = 0;
    double std_error = 0;
};

// rho_tilde = U^dag(Omega) rho U(Omega); trace and spectrum preserved.
inline DensityMatrix rotate_state(const DensityMatrix& rho, const PhasePoint& p) {
    if (static_cast<int>(p.size()) != rho.n)
        throw std::invalid_argument("phase point qubit count does not match the state");
    const Mat u = composite_rotation(p);
    return DensityMatrix{rho.n, u.adjoint() * rho.mat * u};
}

// Per-qubit depolarizing channel: with probability p the qubit is replaced by I/2.
inline DensityMatrix depolarize(const DensityMatrix& rho, double p) {
    if (p < 0 || p > 1) throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
    if (p == 0) return rho;
    const Eigen::Index d = rho.dim();
    Mat m = rho.mat;
    for (int q = 0; q < rho.n; ++q) {
        Mat b = Mat::Zero(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c) {
                if (bit_of(static_cast<std::size_t>(r), q, rho.n) !=
                    bit_of(static_cast<std::size_t>(c), q, rho.n))
                    continue;
                const auto rf = static_cast<Eigen::Index>(flip_bit(static_cast<std::size_t>(r), q, rho.n));
                const auto cf = static_cast<Eigen::Index>(flip_bit(static_cast<std::size_t>(c), q, rho.n));
                b(r, c) = 0.5 * (m(r, c) + m(rf, cf));
            }
        m = (1.0 - p) * m + p * b;
    }
    return DensityMatrix{rho.n, std::move(m)};
}

// Computational-basis populations of the depolarized, rotated state. Tiny
// negative diagonal entries are clipped; anything beyond round-off is an error.
inline Eigen::VectorXd rotated_populations(const DensityMatrix& rho, const PhasePoint& p,
                                           const NoiseModel& noise) {
    noise.validate();
    const DensityMatrix rotated = rotate_state(depolarize(rho, noise.depolarizing), p);
    Eigen::VectorXd probs = rotated.mat.diagonal().real();
    if (probs.minCoeff() < kEigenvalueFloor)
        throw numeric_failure("rotated state has a negative population beyond tolerance");
    probs = probs.cwiseMax(0.0);
    probs /= probs.sum();
    return probs;
}

// Multinomial shot draws by inverse CDF, then independent per-shot, per-qubit
// readout bit flips. Draw order (outcome, then flips qubit 0..n-1) is part of
// the determinism contract; the flip loop is skipped entirely when
// readout_flip is zero.
inline std::vector<std::uint64_t> sample_populations(const Eigen::VectorXd& probs,
                                                     std::uint64_t shots, int n,
                                                     double readout_flip, Rng& rng) {
    std::vector<double> cdf(static_cast<std::size_t>(probs.size()));
    double acc = 0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        acc += probs(i);
        cdf[static_cast<std::size_t>(i)] = acc;
    }
    cdf.back() = 1.0;

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(probs.size()), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= counts.size()) idx = counts.size() - 1;
        if (readout_flip > 0)
            for (int q = 0; q < n; ++q)
                if (rng.uniform() < readout_flip) idx = flip_bit(idx, q, n);
        ++counts[idx];
    }
    return counts;
}

inline CountRecord sample_counts(const DensityMatrix& rho, const MeasurementSetting& setting,
                                 const NoiseModel& noise, std::uint64_t seed) {
    if (setting.shots < 1) throw std::invalid_argument("shots must be >= 1");
    const Eigen::VectorXd probs = rotated_populations(rho, setting.point, noise);
    Rng rng(seed);
    return CountRecord{setting, sample_populations(probs, setting.shots, rho.n,
                                                   noise.readout_flip, rng)};
}

// Batch over settings with per-setting derived seeds, so record k is
// reproducible in isolation as sample_counts(..., derive_seed(seed, k)).
inline std::vector<CountRecord> simulate_batch(const DensityMatrix& rho,
                                               const std::vector<PhasePoint>& points,
                                               std::uint64_t shots, const NoiseModel& noise,
                                               std::uint64_t seed) {
    std::vector<CountRecord> records;
    records.reserve(points.size());
    for (std::size_t k = 0; k < points.size(); ++k)
        records.push_back(sample_counts(rho, MeasurementSetting{points[k], shots}, noise,
                                        derive_seed(seed, k)));
    return records;
}

// Plug-in estimator: W_hat = sum_b f_b Pi_bb with f the outcome frequencies,
// std_error from the multinomial variance of the weighted sum. If
// readout_correction holds epsilon, the per-qubit 2x2 confusion matrix is
// inverted on the frequency vector first (the variance stays the plain
// plug-in form on the corrected frequencies).
inline WignerEstimate estimate_wigner(const CountRecord& rec, ParityKind kind,
                                      std::optional<double> readout_correction = std::nullopt) {
    const int n = rec.n();
    check_qubit_count(n);
    const std::uint64_t shots = rec.setting.shots;
    if (shots == 0) throw std::invalid_argument("estimate_wigner requires shots >= 1");
    if (rec.counts.size() != static_cast<std::size_t>(dim_of(n)))
        throw std::invalid_argument("count vector length does not match 2^n");
    if (rec.total() != shots)
        throw std::invalid_argument("counts must sum to shots");

    Eigen::VectorXd freq(rec.counts.size());
    for (std::size_t i = 0; i < rec.counts.size(); ++i)
        freq(static_cast<Eigen::Index>(i)) =
            static_cast<double>(rec.counts[i]) / static_cast<double>(shots);

    if (readout_correction) {
        const double eps = *readout_correction;
        if (eps < 0 || eps >= 0.5)
            throw std::invalid_argument("readout correction needs epsilon in [0, 0.5)");
        const double a = (1.0 - eps) / (1.0 - 2.0 * eps);
        const double b = -eps / (1.0 - 2.0 * eps);
        for (int q = 0; q < n; ++q)
            for (std::size_t i = 0; i < rec.counts.size(); ++i)
                if (bit_of(i, q, n) == 0) {
                    const std::size_t j = flip_bit(i, q, n);
                    const double f0 = freq(static_cast<Eigen::Index>(i));
                    const double f1 = freq(static_cast<Eigen::Index>(j));
                    freq(static_cast<Eigen::Index>(i)) = a * f0 + b * f1;
                    freq(static_cast<Eigen::Index>(j)) = b * f0 + a * f1;
                }
    }

    const Eigen::VectorXd diag = parity_diagonal(kind, n);
    const double value = freq.dot(diag);
    const double second = freq.dot(diag.cwiseProduct(diag));
    const double var = std::max(0.0, (second - value * value) / static_cast<double>(shots));
    return WignerEstimate{value, std::sqrt(var)};
}

namespace detail {

// Pauli words indexed in base 4, digit 0 = I, 1 = X, 2 = Y, 3 = Z; qubit 0 is
// the most significant digit. sigma_w has one nonzero per row: column
// r ^ xmask, value the product of per-qubit entries.
inline int pauli_digit(std::size_t word, int qubit, int n) {
    return static_cast<int>((word >> (2 * (n - 1 - qubit))) & 3u);
}

inline std::size_t pauli_flip_mask(std::size_t word, int n) {
    std::size_t mask = 0;
    for (int q = 0; q < n; ++q) {
        const int d = pauli_digit(word, q, n);
        if (d == 1 || d == 2) mask |= std::size_t{1} << (n - 1 - q);
    }
    return mask;
}

inline cdouble pauli_entry(std::size_t word, std::size_t row, int n) {
    cdouble v = 1.0;
    for (int q = 0; q < n; ++q) {
        const int d = pauli_digit(word, q, n);
        const int bit = bit_of(row, q, n);
        if (d == 2) v *= bit ? cdouble(0, 1) : cdouble(0, -1);
        else if (d == 3) v *= bit ? -1.0 : 1.0;
    }
    return v;
}

inline double trace_with_pauli(std::size_t word, const Mat& m, int n) {
    const std::size_t mask = pauli_flip_mask(word, n);
    cdouble acc = 0;
    for (std::size_t r = 0; r < static_cast<std::size_t>(m.rows()); ++r)
        acc += pauli_entry(word, r, n) *
               m(static_cast<Eigen::Index>(r ^ mask), static_cast<Eigen::Index>(r));
    return acc.real();
}

}  // namespace detail

// Row k maps the coefficients of rho in the orthonormal Hermitian basis
// {sigma_w / sqrt(2^n)} to W(Omega_k).
inline Eigen::MatrixXd design_matrix(const std::vector<PhasePoint>& points, ParityKind kind,
                                     int n) {
    check_qubit_count(n);
    const std::size_t nwords = std::size_t{1} << (2 * n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim_of(n)));
    Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()),
                      static_cast<Eigen::Index>(nwords));
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (static_cast<int>(points[k].size()) != n)
            throw std::invalid_argument("design_matrix point qubit count mismatch");
        const Mat delta = kernel_at(points[k], kind);
        for (std::size_t w = 0; w < nwords; ++w)
            a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(w)) =
                scale * detail::trace_with_pauli(w, delta, n);
    }
    return a;
}

// Per qubit, the four phase points whose kernel axes form a regular
// tetrahedron; the product over qubits gives a well-conditioned 4^n-point
// informationally complete set.
inline std::vector<PhasePoint> tetrahedral_grid(int n) {
    check_qubit_count(n);
    const double r = 1.0 / std::sqrt(3.0);
    const Eigen::Vector3d axes[4] = {
        {r, r, r}, {r, -r, -r}, {-r, r, -r}, {-r, -r, r}};
    EulerAngles angles[4];
    for (int k = 0; k < 4; ++k) {
        const Eigen::Vector3d& v = axes[k];
        double phi = 0.5 * std::atan2(-v.y(), v.x());
        if (phi < 0) phi += std::numbers::pi;
        angles[k] = EulerAngles{0.5 * std::acos(v.z()), phi, 0.0};
    }
    std::vector<PhasePoint> grid;
    grid.reserve(std::size_t{1} << (2 * n));
    for (std::size_t code = 0; code < (std::size_t{1} << (2 * n)); ++code) {
        PhasePoint p(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q)
            p[static_cast<std::size_t>(q)] = angles[(code >> (2 * (n - 1 - q))) & 3u];
        grid.push_back(std::move(p));
    }
    return grid;
}

struct ReconstructionResult {
    DensityMatrix rho_hat;
    double residual_norm = 0;
    double condition_number = 0;
    bool projected = false;
};

// Least squares in the Hermitian operator basis, then trace normalization and
// optional spectral projection back onto the PSD cone.
inline ReconstructionResult reconstruct_density(const std::vector<PhasePoint>& points,
                                                const std::vector<double>& values,
                                                ParityKind kind, int n, bool project) {
    check_qubit_count(n);
    if (points.size() != values.size())
        throw std::invalid_argument("reconstruct_density needs one value per point");
    const Eigen::Index nwords = Eigen::Index{1} << (2 * n);
    const Eigen::MatrixXd a = design_matrix(points, kind, n);
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < nwords)
        throw not_informationally_complete(static_cast<int>(qr.rank()), static_cast<int>(nwords));
    const Eigen::VectorXd coeff = qr.solve(y);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    const double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);

    const Eigen::Index d = dim_of(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Mat rho = Mat::Zero(d, d);
    for (Eigen::Index w = 0; w < nwords; ++w) {
        const std::size_t word = static_cast<std::size_t>(w);
        const std::size_t mask = detail::pauli_flip_mask(word, n);
        for (std::size_t r = 0; r < static_cast<std::size_t>(d); ++r)
            rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r ^ mask)) +=
                coeff(w) * scale * detail::pauli_entry(word, r, n);
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();

    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-9) throw numeric_failure("reconstructed matrix has near-zero trace");
    rho /= tr;

    bool projected = false;
    if (project) {
        Eigen::SelfAdjointEigenSolver<Mat> es(rho);
        if (es.eigenvalues().minCoeff() < -1e-14) {
            Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
            rho /= rho.trace().real();
            projected = true;
        }
    }

    return ReconstructionResult{DensityMatrix{n, std::move(rho)},
                                (a * coeff - y).norm(), cond, projected};
}

inline ReconstructionResult reconstruct_density(const std::vector<CountRecord>& records,
                                                ParityKind kind, bool project,
                                                std::optional<double> readout_correction =
                                                    std::nullopt) {
    if (records.empty()) throw std::invalid_argument("reconstruct_density needs records");
    const int n = records.front().n();
    std::vector<PhasePoint> points;
    std::vector<double> values;
    points.reserve(records.size());
    values.reserve(records.size());
    for (const CountRecord& rec : records) {
        if (rec.n() != n) throw std::invalid_argument("records must share the qubit count");
        points.push_back(rec.setting.point);
        values.push_back(estimate_wigner(rec, kind, readout_correction).value);
    }
    return reconstruct_density(points, values, kind, n, project);
}

// rho = integral of W(Omega) Delta(Omega) dOmega for the tensor kernel.
inline DensityMatrix weyl_inverse_tensor(const std::function<double(const PhasePoint&)>& sampler,
                                         int n, const Quadrature& q,
                                         ParityKind kind = ParityKind::TensorSu2) {
    if (kind != ParityKind::TensorSu2)
        throw unsupported_for_kind("the Weyl inverse holds for the tensor kernel only");
    check_qubit_count(n);
    if (q.n != n) throw std::invalid_argument("quadrature qubit count mismatch");
    Mat acc = Mat::Zero(dim_of(n), dim_of(n));
    q.for_each_point([&](const PhasePoint& p, double w) {
        acc += (w * sampler(p)) * kernel_at(p, kind);
    });
    return DensityMatrix{n, std::move(acc)};
}

namespace detail {

inline Mat psd_sqrt_checked(const DensityMatrix& rho, const char* who) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat);
    if (es.eigenvalues().minCoeff() < kEigenvalueFloor)
        throw std::invalid_argument(std::string(who) + " requires PSD inputs within tolerance");
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

// Uhlmann fidelity, squared convention: F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
// so F(|psi><psi|, sigma) = <psi|sigma|psi>.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.n != sigma.n) throw std::invalid_argument("fidelity requires equal qubit counts");
    const Mat root = detail::psd_sqrt_checked(rho, "fidelity");
    (void)detail::psd_sqrt_checked(sigma, "fidelity");
    Mat m = root * sigma.mat * root;
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    const double sum = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return sum * sum;
}

inline double frobenius_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.n != sigma.n)
        throw std::invalid_argument("frobenius_distance requires equal qubit counts");
    return (rho.mat - sigma.mat).norm();
}

}  // namespace spinwig
