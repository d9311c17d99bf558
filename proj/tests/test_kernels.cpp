#include "spinwig/kernels.hpp"
#include "spinwig/sampling.hpp"
#include "spinwig/states.hpp"
#include "spinwig/wigner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace spinwig;

TEST_CASE("su2_rotation basics", "[kernels]") {
    const Eigen::Matrix2cd id = su2_rotation({0, 0, 0});
    REQUIRE((id - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);

    // Pure theta rotation; the sign convention makes the kernel axis tilt
    // toward +x (see kernel_axis below).
    const double t = 0.7;
    const Eigen::Matrix2cd u = su2_rotation({t, 0, 0});
    REQUIRE(std::abs(u(0, 0).real() - std::cos(t)) < 1e-15);
    REQUIRE(std::abs(u(0, 1).real() + std::sin(t)) < 1e-15);
    REQUIRE(std::abs(u(1, 0).real() - std::sin(t)) < 1e-15);
    REQUIRE(std::abs(u(1, 1).real() - std::cos(t)) < 1e-15);

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Matrix2cd v = su2_rotation(
            {rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)});
        REQUIRE((v.adjoint() * v - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("composite_rotation has tensor structure", "[kernels]") {
    REQUIRE((composite_rotation(PhasePoint(3)) - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() <
            1e-15);

    const EulerAngles a{0.3, 1.1, -0.4};
    REQUIRE((composite_rotation({a}) - Mat(su2_rotation(a))).cwiseAbs().maxCoeff() < 1e-15);

    const Mat u2 = composite_rotation({a, EulerAngles{}});
    REQUIRE((u2 - kron(su2_rotation(a), Mat::Identity(2, 2))).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("extended parity matches the printed matrices", "[kernels]") {
    const double r3 = std::sqrt(3.0), r5 = std::sqrt(5.0);

    const Eigen::VectorXd s1 = parity_diagonal(ParityKind::Su2N, 1);
    REQUIRE(std::abs(s1(0) - (1 + r3) / 2) < 1e-15);
    REQUIRE(std::abs(s1(1) - (1 - r3) / 2) < 1e-15);

    const Eigen::VectorXd s2 = parity_diagonal(ParityKind::Su2N, 2);
    REQUIRE(std::abs(s2(0) - (1 + 3 * r5) / 4) < 1e-15);
    for (int i = 1; i < 4; ++i) REQUIRE(std::abs(s2(i) - (1 - r5) / 4) < 1e-15);

    const Eigen::VectorXd t2 = parity_diagonal(ParityKind::TensorSu2, 2);
    REQUIRE(std::abs(t2(0) - (2 + r3) / 2) < 1e-14);
    REQUIRE(std::abs(t2(1) + 0.5) < 1e-14);
    REQUIRE(std::abs(t2(2) + 0.5) < 1e-14);
    REQUIRE(std::abs(t2(3) - (2 - r3) / 2) < 1e-14);

    REQUIRE((parity_diagonal(ParityKind::TensorSu2, 1) - s1).cwiseAbs().maxCoeff() < 1e-15);

    for (int n = 1; n <= 6; ++n)
        for (ParityKind kind : {ParityKind::Su2N, ParityKind::TensorSu2})
            REQUIRE(std::abs(parity_diagonal(kind, n).sum() - 1.0) < 1e-12);
}

TEST_CASE("kernel_at is the displaced parity", "[kernels]") {
    for (ParityKind kind : {ParityKind::Su2N, ParityKind::TensorSu2}) {
        const Mat k0 = kernel_at(PhasePoint(2), kind);
        REQUIRE((k0 - extended_parity(kind, 2)).cwiseAbs().maxCoeff() < 1e-15);
    }

    // One qubit, tensor kind: (I + sqrt(3) n.sigma)/2 with n from kernel_axis.
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const PhasePoint p = random_phase_point(1, rng);
        const Eigen::Vector3d n = kernel_axis(p[0]);
        const Mat want = 0.5 * (Mat::Identity(2, 2) +
                                std::sqrt(3.0) * (n.x() * pauli_x() + n.y() * pauli_y() +
                                                  n.z() * pauli_z()));
        REQUIRE((kernel_at(p, ParityKind::TensorSu2) - want).cwiseAbs().maxCoeff() < 1e-14);
    }

    // Similarity transform: trace and spectrum preserved.
    for (int n = 1; n <= 3; ++n)
        for (ParityKind kind : {ParityKind::Su2N, ParityKind::TensorSu2}) {
            const PhasePoint p = random_phase_point(n, rng);
            const Mat k = kernel_at(p, kind);
            REQUIRE(std::abs(k.trace().real() - 1.0) < 1e-12);
            Eigen::SelfAdjointEigenSolver<Mat> es(k, Eigen::EigenvaluesOnly);
            Eigen::VectorXd want = parity_diagonal(kind, n);
            std::sort(want.begin(), want.end());
            REQUIRE((es.eigenvalues() - want).cwiseAbs().maxCoeff() < 1e-12);
        }
}

TEST_CASE("kernel_at is Hermitian at random points", "[kernels]") {
    Rng rng(17);
    for (int n = 1; n <= 4; ++n) {
        const int trials = n <= 2 ? 400 : 100;
        for (ParityKind kind : {ParityKind::Su2N, ParityKind::TensorSu2})
            for (int i = 0; i < trials; ++i) {
                const Mat k = kernel_at(random_phase_point(n, rng), kind);
                REQUIRE((k - k.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
            }
    }
}

TEST_CASE("kernel_axis geometry", "[kernels]") {
    const Eigen::Vector3d pole = kernel_axis({0, 0, 0});
    REQUIRE((pole - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);

    const Eigen::Vector3d x = kernel_axis({std::numbers::pi / 4, 0, 2.7});
    REQUIRE((x - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);

    Rng rng(23);
    for (int i = 0; i < 500; ++i) {
        const Eigen::Vector3d n = kernel_axis({rng.uniform(-5, 5), rng.uniform(-5, 5), 0});
        REQUIRE(std::abs(n.norm() - 1.0) < 1e-14);
    }
}

TEST_CASE("third Euler angles never reach the kernel", "[kernels]") {
    Rng rng(29);
    for (int n = 1; n <= 3; ++n)
        for (ParityKind kind : {ParityKind::Su2N, ParityKind::TensorSu2})
            for (int i = 0; i < 50; ++i) {
                PhasePoint p = random_phase_point(n, rng, false);
                const Mat base = kernel_at(p, kind);
                for (EulerAngles& a : p) a.Phi = rng.uniform(-10, 10);
                REQUIRE((kernel_at(p, kind) - base).cwiseAbs().maxCoeff() < 1e-13);
            }
}

TEST_CASE("covariance: local z rotations shift phi", "[kernels]") {
    Rng rng(31);
    for (int n = 1; n <= 3; ++n)
        for (ParityKind kind : {ParityKind::Su2N, ParityKind::TensorSu2})
            for (int i = 0; i < 40; ++i) {
                const DensityMatrix rho = random_density(n, rng);
                PhasePoint p = random_phase_point(n, rng);
                const int qubit = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(n));
                const double alpha = rng.uniform(0, 2 * std::numbers::pi);

                PhasePoint zrot(static_cast<std::size_t>(n));
                zrot[static_cast<std::size_t>(qubit)] = EulerAngles{0, alpha, 0};
                const Mat v = composite_rotation(zrot);
                const DensityMatrix rotated{n, v * rho.mat * v.adjoint()};

                const double lhs = wigner_at(rotated, p, kind);
                p[static_cast<std::size_t>(qubit)].phi -= alpha;
                REQUIRE(std::abs(lhs - wigner_at(rho, p, kind)) < 1e-12);
            }
}

TEST_CASE("covariance: local y rotations shift theta on the phi=0 meridian", "[kernels]") {
    Rng rng(37);
    for (ParityKind kind : {ParityKind::Su2N, ParityKind::TensorSu2})
        for (int i = 0; i < 40; ++i) {
            const int n = 2;
            const DensityMatrix rho = random_density(n, rng);
            const int qubit = static_cast<int>(rng.raw() % 2);
            PhasePoint p = random_phase_point(n, rng);
            p[static_cast<std::size_t>(qubit)].phi = 0;
            const double alpha = rng.uniform(0, 2 * std::numbers::pi);

            // exp(i alpha sy) on the chosen qubit.
            Eigen::Matrix2cd ry;
            ry << std::cos(alpha), std::sin(alpha), -std::sin(alpha), std::cos(alpha);
            Mat v = qubit == 0 ? kron(ry, Mat::Identity(2, 2)) : kron(Mat::Identity(2, 2), ry);
            const DensityMatrix rotated{n, v * rho.mat * v.adjoint()};

            const double lhs = wigner_at(rotated, p, kind);
            p[static_cast<std::size_t>(qubit)].theta += alpha;
            REQUIRE(std::abs(lhs - wigner_at(rho, p, kind)) < 1e-12);
        }
}
