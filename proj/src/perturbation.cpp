#include "resona1d/perturbation.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>

#include "resona1d/capacitance.hpp"
#include "resona1d/errors.hpp"

namespace resona1d {

namespace {

constexpr cplx kI{0.0, 1.0};

// Hermitian square root factor of L: L = D^2 C with D = diag(sqrt(s / ell_i)).
Eigen::VectorXd similarity_diagonal(const ResonatorSystem& system) {
    const auto n = static_cast<Eigen::Index>(system.size());
    Eigen::VectorXd d(n);
    const double s = system.material.stiffness_scale();
    for (Eigen::Index i = 0; i < n; ++i)
        d(i) = std::sqrt(s / system.chain.length(static_cast<std::size_t>(i)));
    return d;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> static_eigen(double alpha,
                                                             const ResonatorSystem& system) {
    const Eigen::VectorXd d = similarity_diagonal(system);
    const Eigen::MatrixXcd h = d.asDiagonal() * capacitance_matrix(alpha, system.chain) * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw EigenFailure("static eigen-decomposition failed");
    return solver;
}

double common_amplitude(const Modulation& mod) {
    const double eps = mod.eps_kappa(0);
    for (std::size_t i = 0; i < mod.size(); ++i) {
        if (mod.eps_rho(i) != eps || mod.eps_kappa(i) != eps) {
            std::ostringstream msg;
            msg << "first-order expansion needs eps_rho = eps_kappa equal across resonators; resonator "
                << i << " has eps_rho = " << mod.eps_rho(i) << ", eps_kappa = " << mod.eps_kappa(i)
                << " (reference " << eps << ")";
            throw MixedAmplitudes(msg.str());
        }
    }
    return eps;
}

// F1 for given folding numbers.
Eigen::MatrixXcd f1_with(const PerturbationExpansion& e, const std::vector<int>& m) {
    const auto n = static_cast<Eigen::Index>(e.size());
    const Eigen::MatrixXcd a1m[3] = {e.a1(-1), e.a1(0), e.a1(1)};
    auto a1 = [&](int h) -> const Eigen::MatrixXcd* { return h >= -1 && h <= 1 ? &a1m[h + 1] : nullptr; };
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        f(j, j) = a1m[1](j, j);
        for (Eigen::Index l = 0; l < n; ++l) {
            if (l == j) continue;
            const auto ul = static_cast<std::size_t>(l);
            const cplx f0_diff = (e.a0(l) - kI * e.Omega * static_cast<double>(m[ul])) -
                                 (e.a0(j) - kI * e.Omega * static_cast<double>(m[uj]));
            const int resonant = m[uj] - m[ul];
            cplx sum{0.0, 0.0};
            for (int h = -1; h <= 1; ++h) {
                const auto* coeff = a1(h);
                if (h == resonant) {
                    // The resonant term's prefactor cancels its denominator.
                    sum += (*coeff)(j, l);
                } else {
                    sum += f0_diff * (*coeff)(j, l) /
                           (kI * e.Omega * static_cast<double>(h) + e.a0(l) - e.a0(j));
                }
            }
            f(j, l) = sum;
        }
    }
    return f;
}

double circular_distance(double a, double b, double Omega) {
    const double d = std::fmod(std::abs(a - b), Omega);
    return std::min(d, Omega - d);
}

}  // namespace

FoldedEigenvalue folding_number(double omega_A0, double Omega) {
    const double w0 = fold(omega_A0, Omega);
    const int m = static_cast<int>(std::lround((omega_A0 - w0) / Omega));
    return {omega_A0, w0, m};
}

Eigen::VectorXd static_frequencies(double alpha, const ResonatorSystem& system) {
    const auto solver = static_eigen(alpha, system);
    return solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

PerturbationExpansion m_first_order(double alpha, const ResonatorSystem& system) {
    const double eps = common_amplitude(system.modulation);
    const auto n = static_cast<Eigen::Index>(system.size());
    const double Omega = system.frequency();
    const auto& mod = system.modulation;

    PerturbationExpansion e;
    e.alpha = alpha;
    e.Omega = Omega;
    e.epsilon = eps;

    const Eigen::VectorXd d = similarity_diagonal(system);
    e.l = d.cwiseProduct(d).asDiagonal() * capacitance_matrix(alpha, system.chain);
    e.m0 = e.l;

    e.m1_plus = Eigen::MatrixXcd::Zero(n, n);
    e.m1_minus = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto ul = static_cast<std::size_t>(l);
        const cplx kl = std::exp(kI * mod.phi_kappa(ul));
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            cplx plus;
            if (l == j) {
                plus = (0.5 * Omega * Omega - e.l(l, l)) * kl;
            } else {
                const cplx rl = std::exp(kI * mod.phi_rho(ul));
                const cplx rj = std::exp(kI * mod.phi_rho(uj));
                const cplx kj = std::exp(kI * mod.phi_kappa(uj));
                plus = e.l(l, j) * (rl - rj - 0.5 * (kl + kj));
            }
            // cos(x) = (e^{ix} + e^{-ix}) / 2; only the phases are conjugated.
            e.m1_plus(l, j) = 0.5 * plus;
            const cplx kl_c = std::conj(kl);
            cplx minus;
            if (l == j) {
                minus = (0.5 * Omega * Omega - e.l(l, l)) * kl_c;
            } else {
                const cplx rl = std::exp(-kI * mod.phi_rho(ul));
                const cplx rj = std::exp(-kI * mod.phi_rho(uj));
                const cplx kj = std::exp(-kI * mod.phi_kappa(uj));
                minus = e.l(l, j) * (rl - rj - 0.5 * (kl_c + kj));
            }
            e.m1_minus(l, j) = 0.5 * minus;
        }
    }

    const auto solver = static_eigen(alpha, system);
    const Eigen::VectorXd lambda = solver.eigenvalues();
    if (lambda.minCoeff() <= 1e-12 * std::max(lambda.maxCoeff(), 0.0)) {
        std::ostringstream msg;
        msg << "static operator has a zero frequency at alpha = " << alpha
            << "; A0 is not diagonalisable";
        throw DefectiveStaticOperator(msg.str());
    }
    e.frequencies = lambda.cwiseSqrt();
    const Eigen::MatrixXcd& u = solver.eigenvectors();
    const Eigen::MatrixXcd s = d.asDiagonal() * u;
    const Eigen::MatrixXcd s_inv = u.adjoint() * d.cwiseInverse().asDiagonal();
    const Eigen::VectorXcd w = e.frequencies.cast<cplx>();
    const Eigen::VectorXcd w_inv = w.cwiseInverse();

    e.p.resize(2 * n, 2 * n);
    e.p << s, s, kI * s * w.asDiagonal(), -kI * s * w.asDiagonal();
    e.p_inv.resize(2 * n, 2 * n);
    const Eigen::MatrixXcd ws = w_inv.asDiagonal() * s_inv;
    e.p_inv << 0.5 * s_inv, -0.5 * kI * ws, 0.5 * s_inv, 0.5 * kI * ws;

    e.a0.resize(2 * n);
    e.a0 << kI * w, -kI * w;
    for (Eigen::Index j = 0; j < 2 * n; ++j) e.folded.push_back(folding_number(e.a0(j).imag(), Omega));
    return e;
}

Eigen::MatrixXcd PerturbationExpansion::m1_at(double t) const {
    const cplx phase = std::exp(kI * Omega * t);
    return m1_plus * phase + m1_minus * std::conj(phase);
}

Eigen::MatrixXcd PerturbationExpansion::a1(int m) const {
    const auto n = m0.rows();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    if (m == 1) a.bottomLeftCorner(n, n) = -m1_plus;
    else if (m == -1) a.bottomLeftCorner(n, n) = -m1_minus;
    else return a;
    return p_inv * a * p;
}

Eigen::MatrixXcd PerturbationExpansion::f0() const {
    Eigen::VectorXcd diag = a0;
    for (Eigen::Index j = 0; j < diag.size(); ++j)
        diag(j) -= kI * Omega * static_cast<double>(folded[static_cast<std::size_t>(j)].m);
    return diag.asDiagonal();
}

Eigen::MatrixXcd PerturbationExpansion::f1() const {
    std::vector<int> m;
    for (const auto& f : folded) m.push_back(f.m);
    return f1_with(*this, m);
}

std::vector<std::pair<std::size_t, std::size_t>> degenerate_pairs(
    const PerturbationExpansion& expansion, double tolerance) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = expansion.size();
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = l + 1; k < n; ++k)
            if (circular_distance(expansion.folded[l].omega_A0, expansion.folded[k].omega_A0,
                                  expansion.Omega) < tolerance * expansion.Omega)
                out.emplace_back(l, k);
    return out;
}

F1Block f1_block(const PerturbationExpansion& expansion, std::size_t l, std::size_t k,
                 double tolerance) {
    if (l == k || l >= expansion.size() || k >= expansion.size())
        throw NotDegenerate("f1_block needs two distinct eigenvalue indices");
    const double wl = expansion.folded[l].omega_A0;
    const double wk = expansion.folded[k].omega_A0;
    const double dist = circular_distance(wl, wk, expansion.Omega);
    if (!(dist < tolerance * expansion.Omega)) {
        std::ostringstream msg;
        msg << "eigenvalues " << l << " and " << k << " are " << dist / expansion.Omega
            << " Omega apart after folding";
        throw NotDegenerate(msg.str());
    }
    F1Block out;
    out.folding_difference = static_cast<int>(std::lround((wl - wk) / expansion.Omega));
    const auto li = static_cast<Eigen::Index>(l);
    const auto ki = static_cast<Eigen::Index>(k);
    const Eigen::MatrixXcd a1_0 = expansion.a1(0);
    out.block << a1_0(li, li), expansion.a1(out.folding_difference)(li, ki),
        expansion.a1(-out.folding_difference)(ki, li), a1_0(ki, ki);
    const cplx half_trace = 0.5 * (out.block(0, 0) + out.block(1, 1));
    const cplx half_diff = 0.5 * (out.block(0, 0) - out.block(1, 1));
    const cplx root = std::sqrt(half_diff * half_diff + out.block(0, 1) * out.block(1, 0));
    out.eigenvalues << half_trace + root, half_trace - root;
    return out;
}

double gap_size_estimate(const PerturbationExpansion& expansion, std::size_t l, std::size_t k,
                         double epsilon, double tolerance) {
    const auto b = f1_block(expansion, l, k, tolerance);
    return 2.0 * std::abs(epsilon) * std::abs(std::sqrt(b.block(0, 1) * b.block(1, 0)));
}

double crossing_alpha(const ResonatorSystem& system, std::size_t l, std::size_t k, int m, double lo,
                      double hi) {
    const std::size_t n = system.size();
    if (l >= 2 * n || k >= 2 * n) throw NotDegenerate("crossing_alpha: index out of range");
    const double Omega = system.frequency();
    auto omega_a0 = [&](double alpha, std::size_t j) {
        const Eigen::VectorXd w = static_frequencies(alpha, system);
        return j < n ? w(static_cast<Eigen::Index>(j)) : -w(static_cast<Eigen::Index>(j - n));
    };
    auto g = [&](double alpha) {
        return omega_a0(alpha, l) - omega_a0(alpha, k) - static_cast<double>(m) * Omega;
    };
    const double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0.0) == (ghi > 0.0)) {
        std::ostringstream msg;
        msg << "no crossing of eigenvalues " << l << " and " << k << " (m = " << m << ") on ["
            << lo << ", " << hi << "]";
        throw NotDegenerate(msg.str());
    }
    boost::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(52), iterations);
    return 0.5 * (bracket.first + bracket.second);
}

QuasifrequencySpectrum perturbative_spectrum(double alpha, const ResonatorSystem& system) {
    const auto e = m_first_order(alpha, system);
    const double Omega = e.Omega;
    const std::size_t n = e.size();

    // Cut the folding window in the middle of the widest empty arc.
    std::vector<double> phase(n);
    for (std::size_t j = 0; j < n; ++j) {
        phase[j] = std::fmod(e.folded[j].omega_A0, Omega);
        if (phase[j] < 0.0) phase[j] += Omega;
    }
    std::vector<double> sorted = phase;
    std::sort(sorted.begin(), sorted.end());
    double cut = sorted.back() + 0.5 * (sorted.front() + Omega - sorted.back());
    double widest = sorted.front() + Omega - sorted.back();
    for (std::size_t j = 1; j < n; ++j) {
        const double gap = sorted[j] - sorted[j - 1];
        if (gap > widest) {
            widest = gap;
            cut = sorted[j - 1] + 0.5 * gap;
        }
    }
    std::vector<int> m(n);
    for (std::size_t j = 0; j < n; ++j)
        m[j] = static_cast<int>(std::floor((e.folded[j].omega_A0 - cut) / Omega));

    Eigen::VectorXcd f0 = e.a0;
    for (std::size_t j = 0; j < n; ++j)
        f0(static_cast<Eigen::Index>(j)) -= kI * Omega * static_cast<double>(m[j]);
    Eigen::MatrixXcd f = f0.asDiagonal();
    if (e.epsilon != 0.0) f += e.epsilon * f1_with(e, m);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(f, false);
    if (solver.info() != Eigen::Success) throw EigenFailure("F0 + eps F1 eigenvalues did not converge");
    QuasifrequencySpectrum s;
    s.alpha = alpha;
    s.method = Method::perturbative;
    for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j)
        s.entries.push_back(fold(-kI * solver.eigenvalues()(j), Omega));
    s.sort();
    return s;
}

}  // namespace resona1d
