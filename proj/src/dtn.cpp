#include "resona1d/dtn.hpp"

#include <cmath>
#include <sstream>

#include "resona1d/errors.hpp"

namespace resona1d {

namespace {

// k / sin(k ell) and k cos(k ell) / sin(k ell).
struct GapFactors {
    cplx k_over_sin;
    cplx k_cot;
};

GapFactors gap_factors(cplx k, double ell, double guard) {
    const cplx z = k * ell;
    if (std::abs(z) < 1e-6) {
        const cplx z2 = z * z;
        return {(1.0 + z2 / 6.0 + 7.0 * z2 * z2 / 360.0) / ell,
                (1.0 - z2 / 3.0 - z2 * z2 / 45.0) / ell};
    }
    const cplx s = std::sin(z);
    if (std::abs(s) < guard) {
        std::ostringstream msg;
        msg << "k*ell = " << z << " is within the singular-gap guard (|sin| = " << std::abs(s)
            << ")";
        throw SingularGap(msg.str());
    }
    return {k / s, k * std::cos(z) / s};
}

}  // namespace

Eigen::Matrix2cd block_a(cplx k, double ell, double guard) {
    const auto f = gap_factors(k, ell, guard);
    Eigen::Matrix2cd a;
    a << -f.k_cot, f.k_over_sin, f.k_over_sin, -f.k_cot;
    return a;
}

ExteriorCoefficients exterior_coefficients(cplx k, const ResonatorChain& chain, std::size_t gap,
                                           cplx f_plus, cplx f_minus_next, double guard) {
    const std::size_t n = chain.size();
    const double ell = chain.gap(gap);
    const double xa = chain.right(gap);
    const double xb = gap + 1 < n ? chain.left(gap + 1) : chain.left(0) + chain.period();
    const cplx s = std::sin(k * ell);
    if (k == cplx{0.0, 0.0} || std::abs(s) < guard) {
        std::ostringstream msg;
        msg << "exterior coefficients undefined at k = " << k << " on gap " << gap;
        throw SingularGap(msg.str());
    }
    const cplx i{0.0, 1.0};
    const cplx scale = -1.0 / (2.0 * i * s);
    return {scale * (std::exp(-i * k * xb) * f_plus - std::exp(-i * k * xa) * f_minus_next),
            scale * (-std::exp(i * k * xb) * f_plus + std::exp(i * k * xa) * f_minus_next)};
}

DtnMatrix dtn_matrix(cplx k, double alpha, const ResonatorChain& chain, double guard) {
    const auto n = static_cast<Eigen::Index>(chain.size());
    DtnMatrix t{Eigen::MatrixXcd::Zero(2 * n, 2 * n), k, alpha};

    for (Eigen::Index i = 0; i + 1 < n; ++i)
        t.entries.block<2, 2>(2 * i + 1, 2 * i + 1) += block_a(k, chain.gap(i), guard);

    // Wrap-around gap couples N+ to 1- of the next cell.
    const auto f = gap_factors(k, chain.gap(chain.size() - 1), guard);
    const cplx phase = std::exp(cplx{0.0, alpha * chain.period()});
    const Eigen::Index last = 2 * n - 1;
    t.entries(0, 0) += -f.k_cot;
    t.entries(0, last) += f.k_over_sin / phase;
    t.entries(last, 0) += f.k_over_sin * phase;
    t.entries(last, last) += -f.k_cot;
    return t;
}

}  // namespace resona1d
