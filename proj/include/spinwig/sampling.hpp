// sampling.hpp
// Seedable randomness with a platform-stable contract. std::mt19937_64 output
// is fixed by the standard; the distribution transforms here are our own so
// that identical seeds give identical streams everywhere (std::*_distribution
// is implementation-defined and would not).
#pragma once

#include "spinwig/core.hpp"
#include "spinwig/kernels.hpp"
#include "spinwig/states.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace spinwig {

// splitmix64 finalizer; used to derive independent per-task seeds as
// derive_seed(seed, k) = mix(seed + golden * (k + 1)).
inline std::uint64_t splitmix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ull * (k + 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; draws two uniforms per call.
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

inline PureState random_pure(int n, Rng& rng) {
    check_qubit_count(n);
    Vec a(dim_of(n));
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cdouble(rng.normal(), rng.normal());
    a /= a.norm();
    return PureState{n, std::move(a)};
}

// Ginibre construction; rank defaults to the full dimension.
inline DensityMatrix random_density(int n, Rng& rng, int rank = 0) {
    check_qubit_count(n);
    const Eigen::Index d = dim_of(n);
    const Eigen::Index r = rank > 0 ? rank : d;
    Mat g(d, r);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < r; ++j) g(i, j) = cdouble(rng.normal(), rng.normal());
    Mat m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix{n, std::move(m)};
}

inline PureState random_product_state(int n, Rng& rng) {
    std::vector<BlochAngles> angles;
    angles.reserve(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        // Uniform over the Bloch sphere.
        const double polar = std::acos(rng.uniform(-1.0, 1.0));
        angles.push_back({polar, rng.uniform(0.0, 2.0 * std::numbers::pi)});
    }
    return product_state(angles);
}

inline PhasePoint random_phase_point(int n, Rng& rng, bool random_third_angle = true) {
    PhasePoint p;
    p.reserve(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q)
        p.push_back({rng.uniform(0.0, std::numbers::pi / 2.0),
                     rng.uniform(0.0, std::numbers::pi),
                     random_third_angle ? rng.uniform(0.0, 2.0 * std::numbers::pi) : 0.0});
    return p;
}

}  // namespace spinwig
