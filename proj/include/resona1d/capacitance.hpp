#pragma once

#include <Eigen/Dense>
#include <vector>

#include "resona1d/model.hpp"
#include "resona1d/spectrum.hpp"

namespace resona1d {

/// Quasi-periodic capacitance matrix C^alpha (N x N, Hermitian, PSD).
[[nodiscard]] Eigen::MatrixXcd capacitance_matrix(double alpha, const ResonatorChain& chain);

/// Generalised capacitance matrix V^2 L^{-1} C^alpha with V = v_r Id.
[[nodiscard]] Eigen::MatrixXcd generalized_capacitance(double alpha, const ResonatorChain& chain,
                                                       const MaterialConstants& material);

/// Eigenvalues of the generalised capacitance matrix, ascending.
///
/// Computed from the Hermitian matrix D C^alpha D, D = diag(v_i / sqrt(ell_i)),
/// which is similar to V^2 L^{-1} C^alpha; tiny negative round-off is clamped
/// to zero.
[[nodiscard]] std::vector<double> generalized_capacitance_eigenvalues(
    double alpha, const ResonatorChain& chain, const MaterialConstants& material);

/// Static subwavelength band functions sqrt(delta * lambda_i), ascending.
[[nodiscard]] std::vector<double> static_bands(double alpha, const ResonatorChain& chain,
                                               const MaterialConstants& material);

/// Static quasifrequencies +-omega_i folded into [-Omega/2, Omega/2).
[[nodiscard]] QuasifrequencySpectrum static_spectrum(double alpha, const ResonatorSystem& system);

}  // namespace resona1d
