#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

#include "resona1d/model.hpp"

namespace resona1d {

/// |sin(k ell)| below this is treated as a singular gap.
inline constexpr double kSingularGapGuard = 1e-10;

/// Plane-wave coefficients of the exterior solution v = a e^{ikx} + b e^{-ikx}
/// on one gap.
struct ExteriorCoefficients {
    cplx a;
    cplx b;
};

/// Dirichlet-to-Neumann matrix at wavenumber k and quasi-momentum alpha.
/// Rows and columns are ordered (0-, 0+, 1-, 1+, ..., (N-1)-, (N-1)+).
struct DtnMatrix {
    Eigen::MatrixXcd entries;
    cplx k;
    double alpha = 0.0;
};

/// 2x2 gap block [[-k cot(k ell), k / sin(k ell)], [k / sin(k ell), -k cot(k ell)]].
/// Small |k ell| uses the series expansion, so k = 0 gives
/// [[-1/ell, 1/ell], [1/ell, -1/ell]]. Throws SingularGap when k ell is
/// within the guard band of a non-zero multiple of pi.
[[nodiscard]] Eigen::Matrix2cd block_a(cplx k, double ell, double guard = kSingularGapGuard);

/// Exterior coefficients on the gap between the right end of resonator `gap`
/// and the left end of the next one (the next cell's first resonator for the
/// last gap; the caller supplies the quasi-periodic factor in `f_minus_next`).
[[nodiscard]] ExteriorCoefficients exterior_coefficients(cplx k, const ResonatorChain& chain,
                                                         std::size_t gap, cplx f_plus,
                                                         cplx f_minus_next,
                                                         double guard = kSingularGapGuard);

[[nodiscard]] DtnMatrix dtn_matrix(cplx k, double alpha, const ResonatorChain& chain,
                                   double guard = kSingularGapGuard);

}  // namespace resona1d
