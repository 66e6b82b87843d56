#pragma once

#include <array>
#include <complex>
#include <functional>

namespace resona1d {

struct MullerConfig {
    double tolerance = 1e-12;
    int max_iterations = 100;
    /// Relative offset used to derive companion seeds from a single guess.
    double perturbation = 1e-5;

    void validate() const;
};

struct MullerResult {
    std::complex<double> root;
    int iterations = 0;
    double residual = 0.0;
};

using ComplexObjective = std::function<std::complex<double>(std::complex<double>)>;

/// Muller's three-point method.
///
/// Converges when |objective(z)| <= config.tolerance. Evaluations that throw
/// DomainError are treated as off-domain: the iterate is nudged and
/// re-evaluated. Throws NoConvergence when the iteration budget is spent and
/// DegenerateParabola when the three objective values coincide even after
/// one re-perturbed restart.
[[nodiscard]] MullerResult find_root(const ComplexObjective& objective,
                                     const std::array<std::complex<double>, 3>& seeds,
                                     const MullerConfig& config = {});

/// Seeds around sign * vr * sqrt(lambda * delta): the base value and
/// base * (1 +- perturbation). A zero base uses absolute offsets
/// +-perturbation and 2 * perturbation * i.
[[nodiscard]] std::array<std::complex<double>, 3> seeds_from_static(double lambda, double delta,
                                                                   double vr, int sign,
                                                                   const MullerConfig& config = {});

}  // namespace resona1d
