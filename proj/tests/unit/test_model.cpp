#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "resona1d/errors.hpp"
#include "resona1d/model.hpp"
#include "resona1d/spectrum.hpp"

using namespace resona1d;

TEST_CASE("chain geometry") {
    const ResonatorChain chain({1.0, 0.5, 2.0}, {1.0, 1.5, 2.0});
    CHECK(chain.size() == 3);
    CHECK(chain.period() == doctest::Approx(8.0));
    CHECK(chain.left(0) == 0.0);
    CHECK(chain.right(0) == doctest::Approx(1.0));
    CHECK(chain.left(1) == doctest::Approx(2.0));
    CHECK(chain.left(2) == doctest::Approx(4.0));
    CHECK(chain.right(2) == doctest::Approx(6.0));
    CHECK(chain.gap_before(0) == doctest::Approx(2.0));
    CHECK(chain.gap_before(2) == doctest::Approx(1.5));
    CHECK_FALSE(chain.equidistant());
    CHECK(ResonatorChain({1, 1}, {2, 2}).equidistant());
}

TEST_CASE("invalid chains are rejected") {
    CHECK_THROWS_AS(ResonatorChain({}, {}), ConfigError);
    CHECK_THROWS_AS(ResonatorChain({1.0}, {1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(ResonatorChain({1.0, -1.0}, {1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(ResonatorChain({1.0}, {0.0}), ConfigError);
}

TEST_CASE("material constants from contrast") {
    const auto m = MaterialConstants::from_contrast(1e-4, 2.0, 3.0);
    CHECK(m.delta() == doctest::Approx(1e-4));
    CHECK(m.v0() == doctest::Approx(2.0));
    CHECK(m.vr() == doctest::Approx(3.0));
    CHECK(m.stiffness_scale() == doctest::Approx(1e-4 * 9.0));
    CHECK_THROWS_AS(MaterialConstants::from_contrast(0.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("modulation validation") {
    CHECK_THROWS_AS(Modulation(0.0, {0.1}, {0.1}, {0}, {0}), ConfigError);
    CHECK_THROWS_AS(Modulation(0.03, {1.0}, {0.1}, {0}, {0}), ConfigError);
    CHECK_THROWS_AS(Modulation(0.03, {0.1}, {-0.1}, {0}, {0}), ConfigError);
    CHECK_THROWS_AS(Modulation(0.03, {0.1, 0.1}, {0.1}, {0}, {0}), ConfigError);
    CHECK(Modulation::none(0.03, 2).is_static());
    CHECK(Modulation(0.03, {0.0}, {0.2}, {0}, {0}).period() ==
          doctest::Approx(2.0 * std::numbers::pi / 0.03));
}

TEST_CASE("kappa derivatives match central differences") {
    const Modulation mod(0.05, {0.3}, {0.4}, {0.2}, {1.1});
    const double h = 1e-3;
    for (double t : {0.0, 7.0, 31.0, 90.0}) {
        const auto d = mod.kappa_derivatives_at(0, t);
        const double fd1 = (mod.kappa_at(0, t + h) - mod.kappa_at(0, t - h)) / (2 * h);
        const double fd2 =
            (mod.kappa_at(0, t + h) - 2 * mod.kappa_at(0, t) + mod.kappa_at(0, t - h)) / (h * h);
        CHECK(d.value == doctest::Approx(mod.kappa_at(0, t)));
        CHECK(std::abs(d.first - fd1) < 1e-9);
        CHECK(std::abs(d.second - fd2) < 1e-7);
    }
}

TEST_CASE("Fourier coefficients reproduce 1/rho and 1/kappa") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> eps(0.0, 0.9), phase(-3.0, 3.0), time(0.0, 500.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Modulation mod(0.03, {eps(rng)}, {eps(rng)}, {phase(rng)}, {phase(rng)});
        const auto r = mod.inverse_rho_coefficients(0);
        const auto k = mod.inverse_kappa_coefficients(0);
        CHECK(r.cutoff() == 1);
        CHECK(r[2] == cplx{0.0, 0.0});
        CHECK(std::abs(r[-1] - std::conj(r[1])) < 1e-15);
        const double t = time(rng);
        CHECK(std::abs(r.evaluate(0.03 * t) - 1.0 / mod.rho_at(0, t)) < 1e-13);
        CHECK(std::abs(k.evaluate(0.03 * t) - 1.0 / mod.kappa_at(0, t)) < 1e-13);
    }
}

TEST_CASE("folding into the half-open window") {
    const double Omega = 0.03;
    CHECK(fold(0.3 * Omega, Omega) == doctest::Approx(0.3 * Omega));
    CHECK(fold(0.7 * Omega, Omega) == doctest::Approx(-0.3 * Omega));
    CHECK(fold(-0.5 * Omega, Omega) == -0.5 * Omega);
    CHECK(fold(0.5 * Omega, Omega) == doctest::Approx(-0.5 * Omega));
    CHECK(fold(-2.6 * Omega, Omega) == doctest::Approx(0.4 * Omega));
    CHECK(folded_distance({0.49 * Omega, 0.0}, {-0.49 * Omega, 0.0}, Omega) ==
          doctest::Approx(0.02 * Omega));
    CHECK(folded_distance({0.0, 1e-3}, {0.0, -1e-3}, Omega) == doctest::Approx(2e-3));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = w(rng);
        const double f = fold(x, Omega);
        CHECK(f >= -0.5 * Omega);
        CHECK(f < 0.5 * Omega);
        const double m = (x - f) / Omega;
        CHECK(std::abs(m - std::round(m)) < 1e-9);
    }
}

TEST_CASE("method names") {
    CHECK(parse_method("static") == Method::static_capacitance);
    CHECK(parse_method("floquet") == Method::floquet);
    CHECK(to_string(Method::perturbative) == "perturbative");
    CHECK_THROWS_AS((void)parse_method("fem"), ConfigError);
}
