#pragma once

#include <Eigen/Dense>
#include <complex>

#include "resona1d/model.hpp"
#include "resona1d/spectrum.hpp"

namespace resona1d {

using cplx_ld = std::complex<long double>;
using MatrixXcld = Eigen::Matrix<cplx_ld, Eigen::Dynamic, Eigen::Dynamic>;

/// Adaptive Runge-Kutta-Fehlberg 7(8) settings for the period map.
///
/// The period map is integrated in extended precision: at alpha = 0 the
/// monodromy has a Jordan block at mu = 1 and its eigenvalues react to an
/// integration error eta like sqrt(eta), so double-precision tolerances leave
/// visible imaginary parts in the zero band.
struct IntegratorSettings {
    long double relative_tolerance = 1e-16L;
    long double absolute_tolerance = 1e-18L;
    /// Initial step as a fraction of the period.
    double initial_step_fraction = 1e-3;
};

/// M^alpha(t) = (delta kappa_r / rho_r) W1(t) C^alpha W2(t) + W3(t).
[[nodiscard]] Eigen::MatrixXcd m_alpha_at(double t, double alpha, const ResonatorSystem& system);

/// Diagonal of W3(t): (sqrt(kappa_i)/2) d/dt (kappa_i' / kappa_i^{3/2}).
[[nodiscard]] Eigen::VectorXd w3_diagonal(double t, const ResonatorSystem& system);

/// Fundamental solution of y' = [[0, Id], [-M(t), 0]] y after one period.
struct Monodromy {
    MatrixXcld matrix;
    double period = 0.0;
    double alpha = 0.0;
    std::size_t steps = 0;

    [[nodiscard]] Eigen::MatrixXcd to_double() const { return matrix.cast<cplx>(); }
    [[nodiscard]] cplx determinant() const;
};

[[nodiscard]] Monodromy monodromy(double alpha, const ResonatorSystem& system,
                                  const IntegratorSettings& settings = {});

/// omega = -i log(mu) / T for every eigenvalue mu of X_T (principal log),
/// real parts folded into [-Omega/2, Omega/2), sorted by (Re, Im).
[[nodiscard]] QuasifrequencySpectrum quasifrequencies_from_monodromy(const Monodromy& mono,
                                                                     double Omega);

/// monodromy followed by quasifrequencies_from_monodromy.
[[nodiscard]] QuasifrequencySpectrum floquet_spectrum(double alpha, const ResonatorSystem& system,
                                                      const IntegratorSettings& settings = {});

}  // namespace resona1d
