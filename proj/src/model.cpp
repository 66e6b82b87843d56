#include "resona1d/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "resona1d/errors.hpp"

namespace resona1d {

ResonatorChain::ResonatorChain(std::vector<double> lengths, std::vector<double> gaps)
    : lengths_(std::move(lengths)), gaps_(std::move(gaps)) {
    if (lengths_.empty()) throw ConfigError("chain: at least one resonator is required");
    if (lengths_.size() != gaps_.size())
        throw ConfigError("chain: lengths and gaps must have the same number of entries");
    double x = 0.0;
    left_.reserve(lengths_.size());
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
        if (!(lengths_[i] > 0.0) || !std::isfinite(lengths_[i]))
            throw ConfigError("chain: length " + std::to_string(i) + " must be positive");
        if (!(gaps_[i] > 0.0) || !std::isfinite(gaps_[i]))
            throw ConfigError("chain: gap " + std::to_string(i) + " must be positive");
        left_.push_back(x);
        x += lengths_[i] + gaps_[i];
    }
    period_ = x;
}

double ResonatorChain::gap_before(std::size_t i) const {
    return i == 0 ? gaps_.back() : gaps_[i - 1];
}

bool ResonatorChain::equidistant() const {
    for (double g : gaps_)
        if (std::abs(g - gaps_.front()) > 1e-12 * gaps_.front()) return false;
    return true;
}

MaterialConstants MaterialConstants::from_contrast(double delta, double v0, double vr) {
    MaterialConstants m;
    m.rho0 = 1.0;
    m.kappa0 = v0 * v0;
    m.rho_r = delta;
    m.kappa_r = delta * vr * vr;
    m.validate();
    return m;
}

double MaterialConstants::v0() const { return std::sqrt(kappa0 / rho0); }
double MaterialConstants::vr() const { return std::sqrt(kappa_r / rho_r); }

void MaterialConstants::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(rho0) || !positive(kappa0) || !positive(rho_r) || !positive(kappa_r))
        throw ConfigError("material: densities and bulk moduli must be positive");
}

FourierSeries::FourierSeries(std::vector<cplx> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.size() % 2 == 0) throw Error("FourierSeries needs 2M+1 coefficients");
}

cplx FourierSeries::operator[](int m) const {
    const int M = cutoff();
    if (m < -M || m > M) return {0.0, 0.0};
    return coeffs_[static_cast<std::size_t>(m + M)];
}

cplx FourierSeries::evaluate(double omega_t) const {
    const int M = cutoff();
    cplx sum{0.0, 0.0};
    for (int m = -M; m <= M; ++m) sum += (*this)[m] * std::exp(cplx{0.0, m * omega_t});
    return sum;
}

Modulation::Modulation(double omega, std::vector<double> eps_rho, std::vector<double> eps_kappa,
                       std::vector<double> phi_rho, std::vector<double> phi_kappa)
    : omega_(omega),
      eps_rho_(std::move(eps_rho)),
      eps_kappa_(std::move(eps_kappa)),
      phi_rho_(std::move(phi_rho)),
      phi_kappa_(std::move(phi_kappa)) {
    if (!(omega_ > 0.0) || !std::isfinite(omega_))
        throw ConfigError("modulation: Omega must be positive");
    const std::size_t n = eps_rho_.size();
    if (eps_kappa_.size() != n || phi_rho_.size() != n || phi_kappa_.size() != n)
        throw ConfigError("modulation: amplitude and phase arrays must have equal length");
    for (std::size_t i = 0; i < n; ++i) {
        if (eps_rho_[i] < 0.0 || eps_rho_[i] >= 1.0)
            throw ConfigError("modulation: eps_rho[" + std::to_string(i) + "] must lie in [0,1)");
        if (eps_kappa_[i] < 0.0 || eps_kappa_[i] >= 1.0)
            throw ConfigError("modulation: eps_kappa[" + std::to_string(i) + "] must lie in [0,1)");
        if (!std::isfinite(phi_rho_[i]) || !std::isfinite(phi_kappa_[i]))
            throw ConfigError("modulation: phases must be finite");
    }
}

Modulation Modulation::none(double omega, std::size_t n) {
    std::vector<double> zeros(n, 0.0);
    return {omega, zeros, zeros, zeros, zeros};
}

double Modulation::period() const { return 2.0 * std::numbers::pi / omega_; }

bool Modulation::is_static() const {
    for (std::size_t i = 0; i < size(); ++i)
        if (eps_rho_[i] != 0.0 || eps_kappa_[i] != 0.0) return false;
    return true;
}

double Modulation::rho_at(std::size_t i, double t) const {
    return 1.0 / (1.0 + eps_rho_[i] * std::cos(omega_ * t + phi_rho_[i]));
}

double Modulation::kappa_at(std::size_t i, double t) const {
    return 1.0 / (1.0 + eps_kappa_[i] * std::cos(omega_ * t + phi_kappa_[i]));
}

KappaDerivatives Modulation::kappa_derivatives_at(std::size_t i, double t) const {
    // kappa = 1/g with g = 1 + eps cos(theta).
    const double theta = omega_ * t + phi_kappa_[i];
    const double eps = eps_kappa_[i];
    const double g = 1.0 + eps * std::cos(theta);
    const double g1 = -eps * omega_ * std::sin(theta);
    const double g2 = -eps * omega_ * omega_ * std::cos(theta);
    KappaDerivatives d;
    d.value = 1.0 / g;
    d.first = -g1 / (g * g);
    d.second = -g2 / (g * g) + 2.0 * g1 * g1 / (g * g * g);
    return d;
}

namespace {

FourierSeries cosine_reciprocal(double eps, double phi) {
    const cplx half = 0.5 * eps * std::exp(cplx{0.0, phi});
    return FourierSeries({std::conj(half), cplx{1.0, 0.0}, half});
}

}  // namespace

FourierSeries Modulation::inverse_rho_coefficients(std::size_t i) const {
    return cosine_reciprocal(eps_rho_[i], phi_rho_[i]);
}

FourierSeries Modulation::inverse_kappa_coefficients(std::size_t i) const {
    return cosine_reciprocal(eps_kappa_[i], phi_kappa_[i]);
}

ResonatorSystem::ResonatorSystem(ResonatorChain c, MaterialConstants m, Modulation mod)
    : chain(std::move(c)), material(m), modulation(std::move(mod)) {
    material.validate();
    if (modulation.size() != chain.size())
        throw ConfigError("modulation arrays must have one entry per resonator");
}

}  // namespace resona1d
