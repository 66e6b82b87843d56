#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "resona1d/capacitance.hpp"
#include "resona1d/errors.hpp"
#include "resona1d/floquet.hpp"
#include "resona1d/perturbation.hpp"

using namespace resona1d;

namespace {

constexpr double kOmega = 0.03;

ResonatorSystem single(double eps, double phi = 0.0) {
    return {ResonatorChain({1.0}, {1.0}), MaterialConstants::from_contrast(1e-4, 1.0, 1.0),
            Modulation(kOmega, {eps}, {eps}, {phi}, {phi})};
}

ResonatorSystem triple(double eps, std::vector<double> phi_kappa, double phi_rho = 0.3) {
    return {ResonatorChain({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}),
            MaterialConstants::from_contrast(1e-4, 1.0, 1.0),
            Modulation(kOmega, {eps, eps, eps}, {eps, eps, eps}, {phi_rho, phi_rho, phi_rho},
                       std::move(phi_kappa))};
}

// Amplitude -eps is amplitude eps with every phase shifted by pi.
std::vector<double> shifted(std::vector<double> phi) {
    for (auto& p : phi) p += std::numbers::pi;
    return phi;
}

// cos(alpha L) = 1 - Omega^2 g / (8 delta) puts the single band at Omega / 2.
double single_crossing() { return std::acos(1.0 - kOmega * kOmega / (8.0 * 1e-4)) / 2.0; }

double measured_splitting(double eps) {
    const auto s = floquet_spectrum(single_crossing(), single(eps));
    REQUIRE(s.entries.size() == 2);
    return std::abs(s.entries[0].imag() - s.entries[1].imag());
}

}  // namespace

TEST_CASE("folding numbers") {
    const auto a = folding_number(0.02, kOmega);
    CHECK(a.m == 1);
    CHECK(a.omega_0 == doctest::Approx(-0.01));
    const auto b = folding_number(-0.015, kOmega);
    CHECK(b.m == 0);
    CHECK(b.omega_0 == -0.015);
    const auto c = folding_number(0.015, kOmega);
    CHECK(c.m == 1);
    CHECK(c.omega_0 == doctest::Approx(-0.015));
    const auto d = folding_number(-0.05, kOmega);
    CHECK(d.m == -2);
    CHECK(d.omega_0 == doctest::Approx(0.01));
}

TEST_CASE("amplitudes must be common") {
    const ResonatorSystem sys(ResonatorChain({1.0}, {1.0}), MaterialConstants::from_contrast(1e-4, 1.0, 1.0),
                              Modulation(kOmega, {0.0}, {0.2}, {0.0}, {0.0}));
    CHECK_THROWS_AS((void)m_first_order(0.5, sys), MixedAmplitudes);
    CHECK_THROWS_AS((void)m_first_order(0.0, single(0.1)), DefectiveStaticOperator);
}

TEST_CASE("static diagonalisation") {
    const auto exp = m_first_order(0.4, triple(0.1, {0.0, 1.0, 2.0}));
    const Eigen::Index n = 3;
    CHECK((exp.p * exp.p_inv - Eigen::MatrixXcd::Identity(2 * n, 2 * n)).norm() < 1e-10);
    Eigen::MatrixXcd a0 = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    a0.topRightCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
    a0.bottomLeftCorner(n, n) = -exp.m0;
    const Eigen::MatrixXcd d = exp.p_inv * a0 * exp.p;
    CHECK((d - Eigen::MatrixXcd(exp.a0.asDiagonal())).norm() < 1e-12);
    const auto bands = static_bands(0.4, ResonatorChain({1, 1, 1}, {1, 1, 1}), MaterialConstants::from_contrast(1e-4, 1, 1));
    for (Eigen::Index j = 0; j < n; ++j) {
        CHECK(std::abs(exp.a0(j) - cplx{0.0, exp.frequencies(j)}) < 1e-15);
        CHECK(std::abs(exp.a0(j + n) + cplx{0.0, exp.frequencies(j)}) < 1e-15);
        CHECK(std::abs(exp.frequencies(j) - bands[static_cast<std::size_t>(j)]) < 1e-12);
    }
    // -i diag(F0) is the folded static spectrum.
    const Eigen::MatrixXcd f0 = exp.f0();
    for (std::size_t j = 0; j < exp.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        CHECK(std::abs(cplx{0.0, -1.0} * f0(jj, jj) - exp.folded[j].omega_0) < 1e-15);
        CHECK(exp.folded[j].omega_0 >= -kOmega / 2);
        CHECK(exp.folded[j].omega_0 < kOmega / 2);
    }
}

TEST_CASE("M1 is the derivative of M in epsilon") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(-3.0, 3.0), time(0.0, 200.0), al(0.05, 0.5);
    const double h = 1e-4;
    for (int trial = 0; trial < 8; ++trial) {
        const std::vector<double> phi = {u(rng), u(rng), u(rng)};
        const double alpha = al(rng);
        const auto exp = m_first_order(alpha, triple(0.1, phi));
        const double t = time(rng);
        const Eigen::MatrixXcd fd =
            (m_alpha_at(t, alpha, triple(h, phi)) -
             m_alpha_at(t, alpha, triple(h, shifted(phi), 0.3 + std::numbers::pi))) /
            (2 * h);
        const Eigen::MatrixXcd m1 = exp.m1_at(t);
        CHECK((m1 - fd).norm() <= 1e-5 * fd.norm());
        CHECK((exp.m0 - m_alpha_at(t, alpha, triple(0.0, phi))).norm() < 1e-18);
    }
    for (double phi : {0.0, 1.0, -2.5}) {
        const auto exp = m_first_order(0.7, single(0.1, phi));
        const Eigen::MatrixXcd fd =
            (m_alpha_at(12.0, 0.7, single(h, phi)) -
             m_alpha_at(12.0, 0.7, single(h, phi + std::numbers::pi))) /
            (2 * h);
        CHECK((exp.m1_at(12.0) - fd).norm() <= 1e-5 * fd.norm());
    }
}

TEST_CASE("M1 harmonics are conjugate where the capacitance matrix is real") {
    const double alpha = std::numbers::pi / 6.0;  // alpha L = pi
    const auto exp = m_first_order(alpha, triple(0.1, {0.0, 1.0, 2.0}));
    CHECK(exp.l.imag().norm() < 1e-15);
    CHECK((exp.m1_minus - exp.m1_plus.conjugate()).norm() < 1e-15);
    CHECK(exp.a1(2).norm() == 0.0);
}

TEST_CASE("single resonator crossing closed form") {
    const double eps = 0.05;
    const double alpha = single_crossing();
    const auto sys = single(eps);
    CHECK(std::abs(crossing_alpha(sys, 0, 1, 1, 0.01, std::numbers::pi / 2.0) - alpha) < 1e-10);

    const auto exp = m_first_order(alpha, sys);
    const auto pairs = degenerate_pairs(exp);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
    const auto blk = f1_block(exp, 0, 1);
    CHECK(blk.folding_difference == 1);
    CHECK(std::abs(blk.block(0, 0)) < 1e-15);
    CHECK(std::abs(blk.block(1, 1)) < 1e-15);
    CHECK(std::abs(blk.eigenvalues(0) + blk.eigenvalues(1)) < 1e-15);

    const double estimate = gap_size_estimate(exp, 0, 1, eps);
    CHECK(estimate == doctest::Approx(eps * kOmega / 4.0).epsilon(1e-9));
    const double measured = measured_splitting(eps);
    CHECK(std::abs(estimate - measured) <= 0.3 * measured);

    // The full F1 agrees with the degenerate block on the pair.
    const Eigen::MatrixXcd f1 = exp.f1();
    CHECK(std::abs(f1(0, 1) - blk.block(0, 1)) < 1e-15);
    CHECK(std::abs(f1(1, 0) - blk.block(1, 0)) < 1e-15);

    const auto spec = perturbative_spectrum(alpha, sys);
    REQUIRE(spec.entries.size() == 2);
    CHECK(std::abs(std::abs(spec.entries[0].imag()) - eps * kOmega / 8.0) < 1e-9);
    CHECK(spec.entries[0].imag() == doctest::Approx(-spec.entries[1].imag()));
}

TEST_CASE("estimate converges to the measured splitting") {
    const double e1 = std::abs(gap_size_estimate(m_first_order(single_crossing(), single(0.08)), 0, 1, 0.08) -
                               measured_splitting(0.08));
    const double e2 = std::abs(gap_size_estimate(m_first_order(single_crossing(), single(0.04)), 0, 1, 0.04) -
                               measured_splitting(0.04));
    CHECK(e2 < e1 / 4.0);
}

TEST_CASE("gap estimate is linear in epsilon and vanishes without modulation") {
    const auto exp = m_first_order(single_crossing(), single(0.05));
    const double g1 = gap_size_estimate(exp, 0, 1, 0.01);
    CHECK(gap_size_estimate(exp, 0, 1, 0.02) == doctest::Approx(2.0 * g1));
    CHECK(gap_size_estimate(exp, 0, 1, 0.0) == 0.0);
    const auto still = m_first_order(single_crossing(), single(0.0));
    CHECK(gap_size_estimate(still, 0, 1, still.epsilon) == 0.0);
    const auto spec = perturbative_spectrum(single_crossing(), single(0.0));
    for (const auto& w : spec.entries) CHECK(std::abs(w.imag()) < 1e-15);
}

TEST_CASE("non-degenerate pairs are rejected") {
    const auto exp = m_first_order(0.5, single(0.05));
    CHECK(degenerate_pairs(exp).empty());
    CHECK_THROWS_AS((void)f1_block(exp, 0, 1), NotDegenerate);
    CHECK_THROWS_AS((void)crossing_alpha(single(0.05), 0, 1, 1, 0.1, 0.5), NotDegenerate);
}

TEST_CASE("perturbative spectrum of a static chain equals the capacitance spectrum") {
    const ResonatorSystem sys(ResonatorChain({1.0, 1.0, 1.0}, {1.0, 1.0, 2.0}),
                              MaterialConstants::from_contrast(1e-4, 1.0, 1.0), Modulation::none(kOmega, 3));
    for (double alpha : {0.1, -0.3, 0.5}) {
        const auto p = perturbative_spectrum(alpha, sys);
        const auto s = static_spectrum(alpha, sys);
        REQUIRE(p.entries.size() == s.entries.size());
        for (const auto& w : p.entries) {
            double best = 1e300;
            for (const auto& v : s.entries) best = std::min(best, folded_distance(w, v, kOmega));
            CHECK(best < 1e-14);
        }
    }
}
