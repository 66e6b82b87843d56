#include "resona1d/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resona1d/errors.hpp"

namespace resona1d {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::floquet: return "floquet";
        case Method::static_capacitance: return "static";
        case Method::perturbative: return "perturbative";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "exact") return Method::exact;
    if (name == "floquet") return Method::floquet;
    if (name == "static") return Method::static_capacitance;
    if (name == "perturbative") return Method::perturbative;
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

double fold(double omega, double Omega) {
    const double half = 0.5 * Omega;
    if (omega >= -half && omega < half) return omega;
    double r = omega - Omega * std::floor((omega + half) / Omega);
    if (r >= half) r -= Omega;
    if (r < -half) r += Omega;
    return r;
}

std::complex<double> fold(std::complex<double> omega, double Omega) {
    return {fold(omega.real(), Omega), omega.imag()};
}

double folded_distance(std::complex<double> a, std::complex<double> b, double Omega) {
    double dr = std::abs(fold(a.real() - b.real(), Omega));
    return std::hypot(dr, a.imag() - b.imag());
}

void QuasifrequencySpectrum::sort() {
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
}

}  // namespace resona1d
