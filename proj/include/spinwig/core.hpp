// core.hpp
// Shared scalar types, basis-index helpers, Pauli matrices and error types
// used across the spinwig headers.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace spinwig {

inline constexpr const char* kVersion = "0.1.0";

using cdouble = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Dense storage caps the register size; 2^12 x 2^12 complex doubles is the
// largest matrix we are willing to allocate.
inline constexpr int kMaxQubits = 12;

inline void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits)
        throw std::invalid_argument("qubit count n must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n));
}

inline Eigen::Index dim_of(int n) { return Eigen::Index{1} << n; }

// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
// basis-state index. "01011" therefore denotes qubit 0 in |0>, qubit 4 in |1>.
inline int bit_of(std::size_t index, int qubit, int n) {
    return static_cast<int>((index >> (n - 1 - qubit)) & std::size_t{1});
}

inline std::size_t flip_bit(std::size_t index, int qubit, int n) {
    return index ^ (std::size_t{1} << (n - 1 - qubit));
}

inline std::string index_to_bitstring(std::size_t index, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q)
        if (bit_of(index, q, n)) s[static_cast<std::size_t>(q)] = '1';
    return s;
}

inline std::size_t bitstring_to_index(const std::string& bits) {
    std::size_t idx = 0;
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bitstring must contain only '0'/'1', got \"" + bits + "\"");
        idx = (idx << 1) | static_cast<std::size_t>(c == '1');
    }
    return idx;
}

inline const Eigen::Matrix2cd& pauli_i() {
    static const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    return m;
}
inline const Eigen::Matrix2cd& pauli_x() {
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    return m;
}
inline const Eigen::Matrix2cd& pauli_y() {
    static const Eigen::Matrix2cd m =
        (Eigen::Matrix2cd() << 0, cdouble(0, -1), cdouble(0, 1), 0).finished();
    return m;
}
inline const Eigen::Matrix2cd& pauli_z() {
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    return Eigen::kroneckerProduct(a, b);
}

// Error taxonomy. Precondition violations use std::invalid_argument directly;
// the named conditions below get their own types so callers can branch.
struct degenerate_superposition : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct unsupported_for_kind : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numeric_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_informationally_complete : std::runtime_error {
    int rank;
    int required;
    not_informationally_complete(int rank_, int required_)
        : std::runtime_error("point set is not informationally complete: design rank " +
                             std::to_string(rank_) + " < " + std::to_string(required_)),
          rank(rank_), required(required_) {}
};

struct underdetermined_fit : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace spinwig
