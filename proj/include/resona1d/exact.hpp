#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "resona1d/model.hpp"
#include "resona1d/muller.hpp"
#include "resona1d/spectrum.hpp"

namespace resona1d {

/// |omega + n Omega| below this raises ResonantModeCollision.
inline constexpr double kModeCollisionGuard = 1e-12;

/// Fourier modes n = -K..K are retained.
struct TruncationParams {
    int K = 3;

    [[nodiscard]] int modes() const { return 2 * K + 1; }
    /// Row/column of mode n in the mode-indexed vectors (top entry is n = K).
    [[nodiscard]] Eigen::Index index_of(int n) const { return K - n; }
};

/// Banded Toeplitz matrix A_i of the r_{i,m} and matrix B_i of the gamma
/// coefficients, both (2K+1) x (2K+1) with rows n = K..-K.
struct InteriorMatrices {
    Eigen::MatrixXcd a;
    Eigen::MatrixXcd b;
};

/// Eigen-decomposition of C_i = A_i^{-1} B_i.
///
/// Eigenpairs are labelled by the Fourier mode carrying the largest share of
/// the eigenvector, so pair j continues the static mode j; each eigenvector
/// has unit norm and a real positive component at its label. Square roots use
/// the principal branch (Re >= 0); the assembled system depends on lambda^2
/// only, so the branch does not affect it.
struct InteriorEigenbasis {
    /// Eigenvalues lambda~_j, entry index_of(j).
    Eigen::VectorXcd eigenvalues;
    /// Square roots lambda_j.
    Eigen::VectorXcd roots;
    /// Column index_of(j) is f^{j}.
    Eigen::MatrixXcd vectors;
};

/// The 2N(2K+1) square system A*(omega, delta). Row block n (n = K..-K)
/// holds 2N boundary equations; column block j holds, per resonator i, the
/// coefficients of cos(lambda_j^i (x - x_i^-)) and sin(lambda_j^i (x - x_i^-)) / lambda_j^i,
/// an invertible recombination of the e^{+-i lambda x} amplitudes (a_j^i, b_j^i).
struct AssembledSystem {
    Eigen::MatrixXcd matrix;
};

[[nodiscard]] InteriorMatrices interior_matrices(std::size_t i, cplx omega,
                                                 const ResonatorSystem& system,
                                                 const TruncationParams& trunc);

[[nodiscard]] InteriorEigenbasis interior_eigenbasis(std::size_t i, cplx omega,
                                                     const ResonatorSystem& system,
                                                     const TruncationParams& trunc);

[[nodiscard]] AssembledSystem assemble_a_star(cplx omega, double alpha,
                                              const ResonatorSystem& system,
                                              const TruncationParams& trunc);

/// Eigenvalue of A*(omega) closest to zero; the Muller objective.
[[nodiscard]] cplx smallest_eigenvalue(cplx omega, double alpha, const ResonatorSystem& system,
                                       const TruncationParams& trunc);

/// f(omega) = min |lambda| over the spectrum of A*(omega, delta).
[[nodiscard]] double objective_f(cplx omega, double alpha, const ResonatorSystem& system,
                                 const TruncationParams& trunc);

/// Smallest singular value of A*(omega, delta) (diagnostic cross-check).
[[nodiscard]] double smallest_singular_value(cplx omega, double alpha,
                                             const ResonatorSystem& system,
                                             const TruncationParams& trunc);

struct ExactOptions {
    TruncationParams truncation;
    MullerConfig muller;
    /// Roots closer than this are merged.
    double dedup_radius = 1e-10;
    /// Roots with |omega| above factor * vr * sqrt(delta * Lambda) are
    /// discarded, Lambda being a Gershgorin bound on the spectrum of
    /// L^{-1} C^alpha.
    double low_frequency_factor = 10.0;
};

struct ExactRoot {
    cplx raw;     ///< converged root before folding
    cplx folded;  ///< real part folded into [-Omega/2, Omega/2)
    int iterations = 0;
    double residual = 0.0;
    std::size_t seed = 0;
};

struct SeedFailure {
    std::size_t seed = 0;
    std::string message;
};

struct ExactResult {
    double alpha = 0.0;
    std::vector<ExactRoot> roots;  ///< deduplicated, sorted by folded (Re, Im)
    std::vector<SeedFailure> failures;

    [[nodiscard]] QuasifrequencySpectrum spectrum() const;
};

/// Seed triples from the static capacitance bands: one triple per sign per band.
[[nodiscard]] std::vector<std::array<cplx, 3>> static_seeds(double alpha,
                                                           const ResonatorSystem& system,
                                                           const MullerConfig& muller = {});

/// Seed triples {g, g + h, g - h} around every entry g of an approximate
/// spectrum, h = perturbation * max(|g|, Omega / 2).
[[nodiscard]] std::vector<std::array<cplx, 3>> spectrum_seeds(const QuasifrequencySpectrum& guess,
                                                             double Omega,
                                                             const MullerConfig& muller = {});

[[nodiscard]] ExactResult exact_quasifrequencies(double alpha, const ResonatorSystem& system,
                                                 const std::vector<std::array<cplx, 3>>& seeds,
                                                 const ExactOptions& options = {});

/// exact_quasifrequencies seeded with static_seeds.
[[nodiscard]] ExactResult exact_quasifrequencies(double alpha, const ResonatorSystem& system,
                                                 const ExactOptions& options = {});

}  // namespace resona1d
