#include "resona1d/exact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resona1d/capacitance.hpp"
#include "resona1d/dtn.hpp"
#include "resona1d/errors.hpp"

namespace resona1d {

namespace {

void check_mode_collisions(cplx omega, double Omega, int K) {
    for (int n = -K; n <= K; ++n) {
        if (std::abs(omega + static_cast<double>(n) * Omega) < kModeCollisionGuard) {
            std::ostringstream msg;
            msg << "omega + n*Omega vanishes for n = " << n << " at omega = " << omega;
            throw ResonantModeCollision(msg.str());
        }
    }
}

// Labels eigenvectors by their dominant Fourier mode: greedy assignment of
// the largest |component| first, so each mode receives exactly one vector.
std::vector<Eigen::Index> dominant_mode_labels(const Eigen::MatrixXcd& vectors) {
    const Eigen::Index n = vectors.cols();
    struct Weight {
        double value;
        Eigen::Index vec;
        Eigen::Index row;
    };
    std::vector<Weight> weights;
    weights.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) weights.push_back({std::norm(vectors(r, c)), c, r});
    std::sort(weights.begin(), weights.end(), [](const Weight& a, const Weight& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.vec != b.vec) return a.vec < b.vec;
        return a.row < b.row;
    });
    std::vector<Eigen::Index> label(static_cast<std::size_t>(n), -1);
    std::vector<bool> row_taken(static_cast<std::size_t>(n), false);
    Eigen::Index assigned = 0;
    for (const auto& w : weights) {
        auto& l = label[static_cast<std::size_t>(w.vec)];
        if (l >= 0 || row_taken[static_cast<std::size_t>(w.row)]) continue;
        l = w.row;
        row_taken[static_cast<std::size_t>(w.row)] = true;
        if (++assigned == n) break;
    }
    return label;
}

double gershgorin_bound(const ResonatorChain& chain) {
    double bound = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i)
        bound = std::max(bound,
                         2.0 * (1.0 / chain.gap_before(i) + 1.0 / chain.gap(i)) / chain.length(i));
    return bound;
}

}  // namespace

InteriorMatrices interior_matrices(std::size_t i, cplx omega, const ResonatorSystem& system,
                                   const TruncationParams& trunc) {
    const double Omega = system.frequency();
    const int K = trunc.K;
    check_mode_collisions(omega, Omega, K);

    const auto r = system.modulation.inverse_rho_coefficients(i);
    const auto k = system.modulation.inverse_kappa_coefficients(i);
    const int M = system.modulation.cutoff();
    const double vr = system.material.vr();
    const Eigen::Index size = trunc.modes();

    InteriorMatrices out{Eigen::MatrixXcd::Zero(size, size), Eigen::MatrixXcd::Zero(size, size)};
    for (int n = -K; n <= K; ++n) {
        const cplx wn = omega + static_cast<double>(n) * Omega;
        const cplx kr2 = (wn / vr) * (wn / vr);
        for (int m = -M; m <= M; ++m) {
            const int col = n - m;
            if (col < -K || col > K) continue;
            const cplx wcol = omega + static_cast<double>(col) * Omega;
            out.a(trunc.index_of(n), trunc.index_of(col)) = r[m];
            out.b(trunc.index_of(n), trunc.index_of(col)) = (wcol / wn) * k[m] * kr2;
        }
    }
    return out;
}

InteriorEigenbasis interior_eigenbasis(std::size_t i, cplx omega, const ResonatorSystem& system,
                                       const TruncationParams& trunc) {
    const auto mats = interior_matrices(i, omega, system, trunc);
    const Eigen::MatrixXcd c = mats.a.partialPivLu().solve(mats.b);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c, true);
    if (solver.info() != Eigen::Success)
        throw EigenFailure("interior eigen-decomposition did not converge");

    const auto labels = dominant_mode_labels(solver.eigenvectors());
    const Eigen::Index size = trunc.modes();
    InteriorEigenbasis basis{Eigen::VectorXcd(size), Eigen::VectorXcd(size),
                             Eigen::MatrixXcd(size, size)};
    for (Eigen::Index col = 0; col < size; ++col) {
        const Eigen::Index slot = labels[static_cast<std::size_t>(col)];
        Eigen::VectorXcd v = solver.eigenvectors().col(col);
        v.normalize();
        const cplx pivot = v(slot);
        v *= std::abs(pivot) / pivot;
        basis.vectors.col(slot) = v;
        basis.eigenvalues(slot) = solver.eigenvalues()(col);
        basis.roots(slot) = std::sqrt(solver.eigenvalues()(col));
    }
    return basis;
}

AssembledSystem assemble_a_star(cplx omega, double alpha, const ResonatorSystem& system,
                                const TruncationParams& trunc) {
    const int K = trunc.K;
    const auto N = static_cast<Eigen::Index>(system.size());
    const Eigen::Index modes = trunc.modes();
    const Eigen::Index block = 2 * N;
    const double Omega = system.frequency();
    const double delta = system.material.delta();
    const double v0 = system.material.v0();
    const int M = system.modulation.cutoff();

    std::vector<InteriorEigenbasis> bases;
    std::vector<FourierSeries> rho_coeffs;
    bases.reserve(system.size());
    for (std::size_t i = 0; i < system.size(); ++i) {
        bases.push_back(interior_eigenbasis(i, omega, system, trunc));
        rho_coeffs.push_back(system.modulation.inverse_rho_coefficients(i));
    }

    // Per resonator and mode j the interior profile is spanned by
    // cos(lambda (x - x-)) and sin(lambda (x - x-)) / lambda, an invertible
    // recombination of e^{+-i lambda x} that stays well conditioned as
    // lambda -> 0 and depends on lambda^2 only. Rows: x-, x+; columns: the
    // two basis functions. Fluxes carry the outward sign (-d/dx at x-).
    std::vector<Eigen::Matrix2cd> traces(static_cast<std::size_t>(N * modes));
    std::vector<Eigen::Matrix2cd> fluxes(static_cast<std::size_t>(N * modes));
    for (Eigen::Index i = 0; i < N; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double ell = system.chain.length(ui);
        for (Eigen::Index s = 0; s < modes; ++s) {
            const cplx lam = bases[ui].roots(s);
            const cplx z = lam * ell;
            const cplx c = std::cos(z);
            const cplx sinc = std::abs(z) < 1e-4 ? ell * (1.0 - z * z / 6.0 + z * z * z * z / 120.0)
                                                 : std::sin(z) / lam;
            const cplx lam_sin = lam * std::sin(z);
            Eigen::Matrix2cd t, f;
            t << 1.0, 0.0, c, sinc;
            f << 0.0, -1.0, -lam_sin, c;
            traces[static_cast<std::size_t>(i * modes + s)] = t;
            fluxes[static_cast<std::size_t>(i * modes + s)] = f;
        }
    }

    AssembledSystem out{Eigen::MatrixXcd::Zero(block * modes, block * modes)};
    for (int n = K; n >= -K; --n) {
        const Eigen::Index row0 = trunc.index_of(n) * block;
        const cplx kn = (omega + static_cast<double>(n) * Omega) / v0;
        const Eigen::MatrixXcd t = dtn_matrix(kn, alpha, system.chain).entries;

        for (int j = K; j >= -K; --j) {
            const Eigen::Index sj = trunc.index_of(j);
            const Eigen::Index col0 = sj * block;
            Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(block, block);
            Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(block, block);
            for (Eigen::Index i = 0; i < N; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                const auto& f = bases[ui].vectors;
                cplx weight{0.0, 0.0};
                for (int m = -M; m <= M; ++m) {
                    const int mode = n - m;
                    if (mode < -K || mode > K) continue;
                    weight += rho_coeffs[ui][m] * f(trunc.index_of(mode), sj);
                }
                const auto idx = static_cast<std::size_t>(i * modes + sj);
                g.block<2, 2>(2 * i, 2 * i) = weight * fluxes[idx];
                v.block<2, 2>(2 * i, 2 * i) = f(trunc.index_of(n), sj) * traces[idx];
            }
            out.matrix.block(row0, col0, block, block) = g - delta * (t * v);
        }
    }
    return out;
}

cplx smallest_eigenvalue(cplx omega, double alpha, const ResonatorSystem& system,
                         const TruncationParams& trunc) {
    const auto a = assemble_a_star(omega, alpha, system, trunc);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a.matrix, false);
    if (solver.info() != Eigen::Success) throw EigenFailure("A* eigenvalues did not converge");
    const auto& ev = solver.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < ev.size(); ++k)
        if (std::abs(ev(k)) < std::abs(ev(best))) best = k;
    return ev(best);
}

double objective_f(cplx omega, double alpha, const ResonatorSystem& system,
                   const TruncationParams& trunc) {
    return std::abs(smallest_eigenvalue(omega, alpha, system, trunc));
}

double smallest_singular_value(cplx omega, double alpha, const ResonatorSystem& system,
                               const TruncationParams& trunc) {
    const auto a = assemble_a_star(omega, alpha, system, trunc);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a.matrix);
    return svd.singularValues().minCoeff();
}

QuasifrequencySpectrum ExactResult::spectrum() const {
    QuasifrequencySpectrum s;
    s.alpha = alpha;
    s.method = Method::exact;
    for (const auto& r : roots) s.entries.push_back(r.folded);
    s.sort();
    return s;
}

std::vector<std::array<cplx, 3>> static_seeds(double alpha, const ResonatorSystem& system,
                                              const MullerConfig& muller) {
    const double vr = system.material.vr();
    std::vector<std::array<cplx, 3>> seeds;
    for (double lambda : generalized_capacitance_eigenvalues(alpha, system.chain, system.material)) {
        const double unscaled = lambda / (vr * vr);
        seeds.push_back(seeds_from_static(unscaled, system.material.delta(), vr, +1, muller));
        seeds.push_back(seeds_from_static(unscaled, system.material.delta(), vr, -1, muller));
    }
    return seeds;
}

std::vector<std::array<cplx, 3>> spectrum_seeds(const QuasifrequencySpectrum& guess, double Omega,
                                                const MullerConfig& muller) {
    std::vector<std::array<cplx, 3>> seeds;
    for (cplx g : guess.entries) {
        const double h = muller.perturbation * std::max(std::abs(g), 0.5 * Omega);
        seeds.push_back({g, g + h, g - h});
    }
    return seeds;
}

ExactResult exact_quasifrequencies(double alpha, const ResonatorSystem& system,
                                   const std::vector<std::array<cplx, 3>>& seeds,
                                   const ExactOptions& options) {
    if (seeds.empty()) throw Error("exact_quasifrequencies: at least one seed triple is required");
    const double Omega = system.frequency();
    const double limit = options.low_frequency_factor * system.material.vr() *
                         std::sqrt(system.material.delta() * gershgorin_bound(system.chain));

    ExactResult result;
    result.alpha = alpha;
    auto objective = [&](cplx w) { return smallest_eigenvalue(w, alpha, system, options.truncation); };

    for (std::size_t s = 0; s < seeds.size(); ++s) {
        try {
            const auto found = find_root(objective, seeds[s], options.muller);
            if (std::abs(found.root) > limit) {
                std::ostringstream msg;
                msg << "root " << found.root << " lies outside the low-frequency window |omega| <= "
                    << limit;
                result.failures.push_back({s, msg.str()});
                continue;
            }
            ExactRoot root{found.root, fold(found.root, Omega), found.iterations, found.residual, s};
            const bool duplicate = std::any_of(
                result.roots.begin(), result.roots.end(), [&](const ExactRoot& other) {
                    return folded_distance(other.folded, root.folded, Omega) < options.dedup_radius;
                });
            if (!duplicate) result.roots.push_back(root);
        } catch (const Error& e) {
            result.failures.push_back({s, e.what()});
        }
    }
    std::sort(result.roots.begin(), result.roots.end(), [](const ExactRoot& a, const ExactRoot& b) {
        if (a.folded.real() != b.folded.real()) return a.folded.real() < b.folded.real();
        return a.folded.imag() < b.folded.imag();
    });
    return result;
}

ExactResult exact_quasifrequencies(double alpha, const ResonatorSystem& system,
                                   const ExactOptions& options) {
    return exact_quasifrequencies(alpha, system, static_seeds(alpha, system, options.muller),
                                  options);
}

}  // namespace resona1d
