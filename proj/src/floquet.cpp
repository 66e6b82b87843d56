#include "resona1d/floquet.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "resona1d/errors.hpp"

namespace resona1d {

namespace {

namespace odeint = boost::numeric::odeint;

using Real = long double;
using State = std::vector<cplx_ld>;

// Per-resonator modulation terms of M^alpha(t) in extended precision.
struct Weights {
    std::vector<Real> sqrt_kappa;
    std::vector<Real> w3;
};

Weights weights_at(Real t, const Modulation& mod) {
    const std::size_t n = mod.size();
    const Real Omega = mod.frequency();
    Weights w{std::vector<Real>(n), std::vector<Real>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const Real eps = mod.eps_kappa(i);
        const Real theta = Omega * t + static_cast<Real>(mod.phi_kappa(i));
        const Real g = 1.0L + eps * std::cos(theta);
        const Real g1 = -eps * Omega * std::sin(theta);
        const Real g2 = -eps * Omega * Omega * std::cos(theta);
        const Real kappa = 1.0L / g;
        const Real k1 = -g1 / (g * g);
        const Real k2 = -g2 / (g * g) + 2.0L * g1 * g1 / (g * g * g);
        // d/dt (kappa' kappa^{-3/2}) = kappa'' kappa^{-3/2} - (3/2) kappa'^2 kappa^{-5/2}
        const Real inner = k2 * std::pow(kappa, -1.5L) - 1.5L * k1 * k1 * std::pow(kappa, -2.5L);
        w.sqrt_kappa[i] = std::sqrt(kappa);
        w.w3[i] = 0.5L * std::sqrt(kappa) * inner;
    }
    return w;
}

MatrixXcld capacitance_ld(double alpha, const ResonatorChain& chain) {
    const auto n = static_cast<Eigen::Index>(chain.size());
    MatrixXcld c = MatrixXcld::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        c(i, i) += 1.0L / static_cast<Real>(chain.gap_before(ui)) +
                   1.0L / static_cast<Real>(chain.gap(ui));
        if (i + 1 < n) {
            c(i, i + 1) -= 1.0L / static_cast<Real>(chain.gap(ui));
            c(i + 1, i) -= 1.0L / static_cast<Real>(chain.gap(ui));
        }
    }
    const Real wrap = chain.gap(chain.size() - 1);
    const Real arg = static_cast<Real>(alpha) * static_cast<Real>(chain.period());
    const cplx_ld phase{std::cos(arg), std::sin(arg)};
    c(0, n - 1) -= 1.0L / (wrap * phase);
    c(n - 1, 0) -= phase / wrap;
    return c;
}

// Precomputes (delta kappa_r / rho_r) diag(1/ell) C^alpha; the time-dependent
// factors are applied per evaluation.
struct Operator {
    MatrixXcld scaled_capacitance;
    const Modulation* modulation;

    Operator(double alpha, const ResonatorSystem& system) : modulation(&system.modulation) {
        const auto n = static_cast<Eigen::Index>(system.size());
        scaled_capacitance = capacitance_ld(alpha, system.chain);
        const Real scale = static_cast<Real>(system.material.delta()) *
                           static_cast<Real>(system.material.kappa_r) /
                           static_cast<Real>(system.material.rho_r);
        for (Eigen::Index i = 0; i < n; ++i)
            scaled_capacitance.row(i) *=
                scale / static_cast<Real>(system.chain.length(static_cast<std::size_t>(i)));
    }

    [[nodiscard]] MatrixXcld at(Real t) const {
        const auto w = weights_at(t, *modulation);
        const auto n = scaled_capacitance.rows();
        MatrixXcld m(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                m(r, c) = w.sqrt_kappa[static_cast<std::size_t>(r)] * scaled_capacitance(r, c) *
                          w.sqrt_kappa[static_cast<std::size_t>(c)];
        for (Eigen::Index r = 0; r < n; ++r) m(r, r) += w.w3[static_cast<std::size_t>(r)];
        return m;
    }
};

}  // namespace

Eigen::MatrixXcd m_alpha_at(double t, double alpha, const ResonatorSystem& system) {
    return Operator(alpha, system).at(t).cast<cplx>();
}

Eigen::VectorXd w3_diagonal(double t, const ResonatorSystem& system) {
    const auto w = weights_at(t, system.modulation);
    Eigen::VectorXd out(static_cast<Eigen::Index>(w.w3.size()));
    for (std::size_t i = 0; i < w.w3.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = static_cast<double>(w.w3[i]);
    return out;
}

cplx Monodromy::determinant() const { return static_cast<cplx>(matrix.determinant()); }

Monodromy monodromy(double alpha, const ResonatorSystem& system,
                    const IntegratorSettings& settings) {
    const Operator op(alpha, system);
    const auto n = static_cast<Eigen::Index>(system.size());
    const Eigen::Index dim = 2 * n;
    const Real period = 2.0L * std::numbers::pi_v<Real> / static_cast<Real>(system.frequency());

    // Column-major storage of the 2N x 2N fundamental matrix.
    State y(static_cast<std::size_t>(dim * dim), cplx_ld{0.0L, 0.0L});
    for (Eigen::Index k = 0; k < dim; ++k) y[static_cast<std::size_t>(k * dim + k)] = 1.0L;

    auto rhs = [&](const State& x, State& dxdt, Real t) {
        const MatrixXcld m = op.at(t);
        Eigen::Map<const MatrixXcld> X(x.data(), dim, dim);
        Eigen::Map<MatrixXcld> D(dxdt.data(), dim, dim);
        D.topRows(n) = X.bottomRows(n);
        D.bottomRows(n).noalias() = -m * X.topRows(n);
    };

    using Stepper = odeint::runge_kutta_fehlberg78<State, Real, State, Real>;
    std::size_t steps = 0;
    try {
        steps = odeint::integrate_adaptive(
            odeint::make_controlled<Stepper>(settings.absolute_tolerance,
                                             settings.relative_tolerance),
            rhs, y, 0.0L, period,
            period * static_cast<Real>(settings.initial_step_fraction));
    } catch (const std::exception& e) {
        throw IntegrationFailure(std::string("period map integration failed: ") + e.what());
    }

    Monodromy mono;
    mono.matrix = Eigen::Map<const MatrixXcld>(y.data(), dim, dim);
    mono.period = static_cast<double>(period);
    mono.alpha = alpha;
    mono.steps = steps;
    if (!mono.matrix.allFinite()) throw IntegrationFailure("period map is not finite");
    return mono;
}

QuasifrequencySpectrum quasifrequencies_from_monodromy(const Monodromy& mono, double Omega) {
    Eigen::ComplexEigenSolver<MatrixXcld> solver(mono.matrix, false);
    if (solver.info() != Eigen::Success) throw EigenFailure("monodromy eigenvalues did not converge");
    QuasifrequencySpectrum s;
    s.alpha = mono.alpha;
    s.method = Method::floquet;
    const Real period = mono.period;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const cplx_ld mu = solver.eigenvalues()(k);
        const cplx_ld exponent = std::log(mu) / period;
        const cplx_ld omega = cplx_ld{0.0L, -1.0L} * exponent;
        s.entries.push_back(fold(static_cast<cplx>(omega), Omega));
    }
    s.sort();
    return s;
}

QuasifrequencySpectrum floquet_spectrum(double alpha, const ResonatorSystem& system,
                                        const IntegratorSettings& settings) {
    return quasifrequencies_from_monodromy(monodromy(alpha, system, settings), system.frequency());
}

}  // namespace resona1d
