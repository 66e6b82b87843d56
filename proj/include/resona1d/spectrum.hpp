#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace resona1d {

enum class Method { exact, floquet, static_capacitance, perturbative };

[[nodiscard]] std::string_view to_string(Method m);
/// Parses "exact", "floquet", "static" or "perturbative".
[[nodiscard]] Method parse_method(std::string_view name);

/// Folds a real frequency into the half-open window [-Omega/2, Omega/2).
/// Values already inside the window are returned unchanged.
[[nodiscard]] double fold(double omega, double Omega);

/// Folds the real part only.
[[nodiscard]] std::complex<double> fold(std::complex<double> omega, double Omega);

/// Distance between two folded frequencies measured on the circle of
/// circumference Omega for the real part.
[[nodiscard]] double folded_distance(std::complex<double> a, std::complex<double> b, double Omega);

/// Folded quasifrequencies at one quasi-momentum.
struct QuasifrequencySpectrum {
    double alpha = 0.0;
    std::vector<std::complex<double>> entries;
    Method method = Method::static_capacitance;

    /// Sorts entries by (Re, Im).
    void sort();
};

}  // namespace resona1d
