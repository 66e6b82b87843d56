#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>
#include <vector>

#include "resona1d/model.hpp"
#include "resona1d/spectrum.hpp"

namespace resona1d {

/// Two A0 eigenvalues are degenerate when their folded frequencies differ by
/// less than this multiple of Omega.
inline constexpr double kDegeneracyTolerance = 1e-8;

/// omega_A0 = omega_0 + m * Omega with omega_0 in [-Omega/2, Omega/2).
struct FoldedEigenvalue {
    double omega_A0 = 0.0;
    double omega_0 = 0.0;
    int m = 0;
};

[[nodiscard]] FoldedEigenvalue folding_number(double omega_A0, double Omega);

/// First-order expansion M(t) = M0 + eps M1(t) + O(eps^2) with
/// M1(t) = M1^{(+1)} e^{i Omega t} + M1^{(-1)} e^{-i Omega t}, and the
/// diagonalised static system.
///
/// A0 = [[0, Id], [-M0, 0]] is diagonalised by P = [[S, S], [i S W, -i S W]]
/// where M0 = S W^2 S^{-1}. Diagonal entries of A0 are ordered
/// (i w_1, ..., i w_N, -i w_1, ..., -i w_N) with w ascending.
struct PerturbationExpansion {
    double alpha = 0.0;
    double Omega = 0.0;
    double epsilon = 0.0;

    Eigen::MatrixXcd l;  ///< (delta kappa_r / rho_r) diag(1/ell) C^alpha
    Eigen::MatrixXcd m0;
    Eigen::MatrixXcd m1_plus;
    Eigen::MatrixXcd m1_minus;

    Eigen::VectorXd frequencies;  ///< static w_i > 0, ascending
    Eigen::MatrixXcd p;
    Eigen::MatrixXcd p_inv;
    Eigen::VectorXcd a0;  ///< diagonal of P^{-1} A0 P
    std::vector<FoldedEigenvalue> folded;

    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(a0.size()); }

    /// Order-eps part of M at time t.
    [[nodiscard]] Eigen::MatrixXcd m1_at(double t) const;
    /// Fourier coefficient A1^{(m)} in the diagonal basis (zero for |m| > 1).
    [[nodiscard]] Eigen::MatrixXcd a1(int m) const;
    /// F0 = A0 - i Omega diag(m_j).
    [[nodiscard]] Eigen::MatrixXcd f0() const;
    /// Full F1 from the entry rules; off-block entries use the non-degenerate
    /// branch, which reduces continuously to the degenerate one.
    [[nodiscard]] Eigen::MatrixXcd f1() const;
};

/// Builds the expansion. Requires eps_rho_i = eps_kappa_i = eps for every
/// resonator (MixedAmplitudes otherwise) and a static operator without zero
/// frequency (DefectiveStaticOperator otherwise, e.g. at alpha = 0).
[[nodiscard]] PerturbationExpansion m_first_order(double alpha, const ResonatorSystem& system);

/// Static frequencies w_i(alpha) = sqrt of the eigenvalues of M0, ascending.
[[nodiscard]] Eigen::VectorXd static_frequencies(double alpha, const ResonatorSystem& system);

/// Index pairs (l, k), l < k, of A0 eigenvalues whose folded frequencies
/// coincide on the circle of circumference Omega within tolerance * Omega.
[[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> degenerate_pairs(
    const PerturbationExpansion& expansion, double tolerance = kDegeneracyTolerance);

struct F1Block {
    Eigen::Matrix2cd block;
    Eigen::Vector2cd eigenvalues;
    int folding_difference = 0;  ///< m_l - m_k
};

/// (F1)_{ab} = (A1^{(m_a - m_b)})_{ab} on the degenerate pair (l, k). The
/// folding difference is the integer nearest to (omega_A0_l - omega_A0_k) / Omega,
/// which is independent of where the folding window is cut.
[[nodiscard]] F1Block f1_block(const PerturbationExpansion& expansion, std::size_t l,
                               std::size_t k, double tolerance = kDegeneracyTolerance);

/// 2 eps |sqrt((F1)_12 (F1)_21)|.
[[nodiscard]] double gap_size_estimate(const PerturbationExpansion& expansion, std::size_t l,
                                       std::size_t k, double epsilon,
                                       double tolerance = kDegeneracyTolerance);

/// Quasi-momentum in [lo, hi] where omega_A0_l - omega_A0_k = m Omega.
/// Throws NotDegenerate when the difference does not change sign on [lo, hi].
[[nodiscard]] double crossing_alpha(const ResonatorSystem& system, std::size_t l, std::size_t k,
                                    int m, double lo, double hi);

/// First-order quasifrequencies: eigenvalues f of F0 + eps F1, omega = -i f,
/// folded. The folding window is cut in the widest empty arc of the static
/// spectrum so that near-degenerate pairs never straddle it.
[[nodiscard]] QuasifrequencySpectrum perturbative_spectrum(double alpha,
                                                           const ResonatorSystem& system);

}  // namespace resona1d
