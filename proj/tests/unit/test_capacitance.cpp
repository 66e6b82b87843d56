#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "resona1d/capacitance.hpp"

using namespace resona1d;

TEST_CASE("single resonator closed form") {
    const ResonatorChain chain({1.0}, {2.0});
    for (double alpha : {0.0, 0.4, 1.0}) {
        const auto c = capacitance_matrix(alpha, chain);
        const double expected = (2.0 - 2.0 * std::cos(alpha * 3.0)) / 2.0;
        CHECK(std::abs(c(0, 0) - expected) < 1e-14);
    }
}

TEST_CASE("capacitance matrix is Hermitian, PSD and annihilates constants at alpha = 0") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> len(0.5, 2.0), u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 5;
        std::vector<double> l(n), g(n);
        for (std::size_t i = 0; i < n; ++i) {
            l[i] = len(rng);
            g[i] = len(rng);
        }
        const ResonatorChain chain(l, g);
        const double alpha = u(rng) * std::numbers::pi / chain.period();
        const auto c = capacitance_matrix(alpha, chain);
        CHECK((c - c.adjoint()).norm() < 1e-14);
        CHECK((capacitance_matrix(-alpha, chain) - c.conjugate()).norm() < 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        const auto c0 = capacitance_matrix(0.0, chain);
        CHECK((c0 * Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(n))).norm() < 1e-14);

        // Eigenvalues are periodic in alpha with period 2 pi / L.
        const auto e1 = generalized_capacitance_eigenvalues(alpha, chain, MaterialConstants{});
        const auto e2 = generalized_capacitance_eigenvalues(alpha + 2 * std::numbers::pi / chain.period(),
                                                            chain, MaterialConstants{});
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e1[i] - e2[i]) < 1e-12);
    }
}

TEST_CASE("symmetrised eigenvalues equal those of V^2 L^-1 C") {
    const ResonatorChain chain({1.0, 0.6, 1.7}, {1.2, 0.8, 2.0});
    const auto mat = MaterialConstants::from_contrast(1e-3, 1.0, 1.8);
    for (double alpha : {0.0, 0.3, -0.5}) {
        const auto direct = generalized_capacitance(alpha, chain, mat);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(direct);
        std::vector<double> expected;
        for (Eigen::Index i = 0; i < 3; ++i) {
            CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-12);
            expected.push_back(std::max(es.eigenvalues()(i).real(), 0.0));
        }
        std::sort(expected.begin(), expected.end());
        const auto got = generalized_capacitance_eigenvalues(alpha, chain, mat);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got[i] - expected[i]) < 1e-12);
    }
}

TEST_CASE("static degeneracy at alpha = 0") {
    const auto mat = MaterialConstants::from_contrast(1e-4, 1.0, 1.0);
    const double Omega = 0.03;
    const auto equi = static_bands(0.0, ResonatorChain({1, 1, 1}, {1, 1, 1}), mat);
    CHECK(std::abs(equi[1] - equi[2]) <= 1e-10);
    CHECK(equi[0] == 0.0);
    const auto uneven = static_bands(0.0, ResonatorChain({1, 1, 1}, {1, 1, 2}), mat);
    CHECK(std::abs(uneven[1] - uneven[2]) > 1e-4 * Omega);
}

TEST_CASE("static spectrum folds plus and minus bands") {
    const ResonatorSystem sys(ResonatorChain({1.0}, {1.0}), MaterialConstants::from_contrast(1e-4, 1.0, 1.0),
                              Modulation::none(0.03, 1));
    const auto s = static_spectrum(std::numbers::pi / 2.0, sys);
    REQUIRE(s.entries.size() == 2);
    // omega = 0.02 folds to -0.01 and -0.02 to 0.01.
    CHECK(s.entries[0].real() == doctest::Approx(-0.01));
    CHECK(s.entries[1].real() == doctest::Approx(0.01));
    CHECK(s.method == Method::static_capacitance);
}
