#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace resona1d {

using cplx = std::complex<double>;

/// Geometry of the N resonators inside one period cell.
///
/// Built from resonator lengths and the gaps that follow each resonator; the
/// last gap wraps around to the first resonator of the next cell. The left
/// end of the first resonator sits at x = 0. Resonator indices are 0-based.
class ResonatorChain {
public:
    ResonatorChain(std::vector<double> lengths, std::vector<double> gaps);

    [[nodiscard]] std::size_t size() const { return lengths_.size(); }
    [[nodiscard]] double period() const { return period_; }

    /// Length of resonator i.
    [[nodiscard]] double length(std::size_t i) const { return lengths_[i]; }
    /// Gap between resonator i and i+1; gap(N-1) is the wrap-around gap.
    [[nodiscard]] double gap(std::size_t i) const { return gaps_[i]; }
    /// Gap to the left of resonator i (the wrap-around gap for i = 0).
    [[nodiscard]] double gap_before(std::size_t i) const;

    [[nodiscard]] double left(std::size_t i) const { return left_[i]; }
    [[nodiscard]] double right(std::size_t i) const { return left_[i] + lengths_[i]; }

    [[nodiscard]] const std::vector<double>& lengths() const { return lengths_; }
    [[nodiscard]] const std::vector<double>& gaps() const { return gaps_; }

    /// True when every gap has the same length (up to 1e-12 relative).
    [[nodiscard]] bool equidistant() const;

private:
    std::vector<double> lengths_;
    std::vector<double> gaps_;
    std::vector<double> left_;
    double period_ = 0.0;
};

/// Background and resonator material constants.
struct MaterialConstants {
    double rho0 = 1.0;
    double kappa0 = 1.0;
    double rho_r = 1.0;
    double kappa_r = 1.0;

    /// Normalised constants with rho0 = 1 reproducing the given contrast and
    /// wave speeds.
    static MaterialConstants from_contrast(double delta, double v0, double vr);

    [[nodiscard]] double delta() const { return rho_r / rho0; }
    [[nodiscard]] double v0() const;
    [[nodiscard]] double vr() const;
    /// delta * kappa_r / rho_r, the prefactor of C^alpha in the
    /// capacitance ODE.
    [[nodiscard]] double stiffness_scale() const { return delta() * kappa_r / rho_r; }

    void validate() const;
};

/// Fourier coefficients c_m, m = -M..M, of a band-limited periodic signal.
class FourierSeries {
public:
    FourierSeries() = default;
    explicit FourierSeries(std::vector<cplx> coefficients);

    [[nodiscard]] int cutoff() const { return static_cast<int>(coeffs_.size() / 2); }
    /// Coefficient of exp(i m Omega t); zero outside -M..M.
    [[nodiscard]] cplx operator[](int m) const;
    [[nodiscard]] cplx evaluate(double omega_t) const;

private:
    std::vector<cplx> coeffs_;
};

/// Values of kappa_i and its first two time derivatives.
struct KappaDerivatives {
    double value = 1.0;
    double first = 0.0;
    double second = 0.0;
};

/// Cosine time modulation of rho_i and kappa_i:
///   rho_i(t)   = 1 / (1 + eps_rho_i   cos(Omega t + phi_rho_i))
///   kappa_i(t) = 1 / (1 + eps_kappa_i cos(Omega t + phi_kappa_i))
/// Amplitudes equal to zero give the static problem.
class Modulation {
public:
    Modulation(double omega, std::vector<double> eps_rho, std::vector<double> eps_kappa,
               std::vector<double> phi_rho, std::vector<double> phi_kappa);

    /// Unmodulated chain of n resonators (Omega still sets the folding window).
    static Modulation none(double omega, std::size_t n);

    [[nodiscard]] std::size_t size() const { return eps_rho_.size(); }
    [[nodiscard]] double frequency() const { return omega_; }
    [[nodiscard]] double period() const;
    [[nodiscard]] int cutoff() const { return 1; }
    [[nodiscard]] bool is_static() const;

    [[nodiscard]] double eps_rho(std::size_t i) const { return eps_rho_[i]; }
    [[nodiscard]] double eps_kappa(std::size_t i) const { return eps_kappa_[i]; }
    [[nodiscard]] double phi_rho(std::size_t i) const { return phi_rho_[i]; }
    [[nodiscard]] double phi_kappa(std::size_t i) const { return phi_kappa_[i]; }

    [[nodiscard]] double rho_at(std::size_t i, double t) const;
    [[nodiscard]] double kappa_at(std::size_t i, double t) const;
    [[nodiscard]] KappaDerivatives kappa_derivatives_at(std::size_t i, double t) const;

    /// Fourier coefficients r_{i,m} of 1/rho_i(t).
    [[nodiscard]] FourierSeries inverse_rho_coefficients(std::size_t i) const;
    /// Fourier coefficients k_{i,m} of 1/kappa_i(t).
    [[nodiscard]] FourierSeries inverse_kappa_coefficients(std::size_t i) const;

private:
    double omega_;
    std::vector<double> eps_rho_;
    std::vector<double> eps_kappa_;
    std::vector<double> phi_rho_;
    std::vector<double> phi_kappa_;
};

/// Everything needed to pose the problem at a given quasi-momentum.
struct ResonatorSystem {
    ResonatorChain chain;
    MaterialConstants material;
    Modulation modulation;

    ResonatorSystem(ResonatorChain c, MaterialConstants m, Modulation mod);

    [[nodiscard]] std::size_t size() const { return chain.size(); }
    [[nodiscard]] double frequency() const { return modulation.frequency(); }
};

}  // namespace resona1d
