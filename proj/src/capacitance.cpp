#include "resona1d/capacitance.hpp"

#include <algorithm>
#include <cmath>

#include "resona1d/errors.hpp"

namespace resona1d {

Eigen::MatrixXcd capacitance_matrix(double alpha, const ResonatorChain& chain) {
    const auto n = static_cast<Eigen::Index>(chain.size());
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        c(i, i) += 1.0 / chain.gap_before(ui) + 1.0 / chain.gap(ui);
        if (i + 1 < n) {
            c(i, i + 1) -= 1.0 / chain.gap(ui);
            c(i + 1, i) -= 1.0 / chain.gap(ui);
        }
    }
    const double wrap = chain.gap(chain.size() - 1);
    const cplx phase = std::exp(cplx{0.0, alpha * chain.period()});
    c(0, n - 1) -= 1.0 / (wrap * phase);
    c(n - 1, 0) -= phase / wrap;
    return c;
}

Eigen::MatrixXcd generalized_capacitance(double alpha, const ResonatorChain& chain,
                                         const MaterialConstants& material) {
    const auto n = static_cast<Eigen::Index>(chain.size());
    Eigen::VectorXd scale(n);
    const double v2 = material.vr() * material.vr();
    for (Eigen::Index i = 0; i < n; ++i) scale(i) = v2 / chain.length(static_cast<std::size_t>(i));
    return scale.asDiagonal() * capacitance_matrix(alpha, chain);
}

std::vector<double> generalized_capacitance_eigenvalues(double alpha, const ResonatorChain& chain,
                                                        const MaterialConstants& material) {
    const auto n = static_cast<Eigen::Index>(chain.size());
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i)
        d(i) = material.vr() / std::sqrt(chain.length(static_cast<std::size_t>(i)));
    const Eigen::MatrixXcd sym = d.asDiagonal() * capacitance_matrix(alpha, chain) * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw EigenFailure("capacitance eigen-decomposition failed");
    std::vector<double> out(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
    for (double& v : out) v = std::max(v, 0.0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> static_bands(double alpha, const ResonatorChain& chain,
                                 const MaterialConstants& material) {
    auto lambda = generalized_capacitance_eigenvalues(alpha, chain, material);
    for (double& v : lambda) v = std::sqrt(material.delta() * v);
    return lambda;
}

QuasifrequencySpectrum static_spectrum(double alpha, const ResonatorSystem& system) {
    QuasifrequencySpectrum s;
    s.alpha = alpha;
    s.method = Method::static_capacitance;
    const double Omega = system.frequency();
    for (double w : static_bands(alpha, system.chain, system.material)) {
        s.entries.emplace_back(fold(w, Omega), 0.0);
        s.entries.emplace_back(fold(-w, Omega), 0.0);
    }
    s.sort();
    return s;
}

}  // namespace resona1d
