#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resona1d/exact.hpp"
#include "resona1d/floquet.hpp"
#include "resona1d/model.hpp"
#include "resona1d/spectrum.hpp"

namespace resona1d {

/// `count` equispaced quasi-momenta from -pi/L to pi/L; count must be odd and
/// at least 3 so that the grid is symmetric and contains alpha = 0.
[[nodiscard]] std::vector<double> alpha_grid(double period, std::size_t count);

/// Worker count for sweeps: RESONA1D_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
[[nodiscard]] unsigned sweep_threads();

struct SweepOptions {
    std::size_t grid = 101;
    ExactOptions exact;
    IntegratorSettings integrator;
    /// 0 selects sweep_threads().
    unsigned threads = 0;
};

/// Spectra on the alpha grid and their continuation into bands.
struct BandStructure {
    Method method = Method::static_capacitance;
    double Omega = 0.0;
    std::vector<double> grid;
    /// Empty optional marks a grid point whose solver failed.
    std::vector<std::optional<QuasifrequencySpectrum>> spectra;
    std::vector<std::string> failures;  ///< one message per grid point, empty when fine
    /// bands[b][g]: value of band b at grid point g (missing when unmatched).
    std::vector<std::vector<std::optional<cplx>>> bands;

    [[nodiscard]] std::size_t missing() const;
};

/// Spectrum of one method at one quasi-momentum. The exact route is seeded
/// from the Floquet spectrum.
[[nodiscard]] QuasifrequencySpectrum compute_spectrum(double alpha, const ResonatorSystem& system,
                                                      Method method,
                                                      const SweepOptions& options = {});

[[nodiscard]] BandStructure band_sweep(const ResonatorSystem& system, Method method,
                                       const SweepOptions& options = {});

/// Greedy nearest-neighbour continuation of folded spectra across the grid:
/// all (band, entry) distances between consecutive points are sorted and
/// matched smallest first; equal distances prefer entries whose Im has the
/// same sign as the band's last value.
[[nodiscard]] std::vector<std::vector<std::optional<cplx>>> continue_bands(
    const std::vector<std::optional<QuasifrequencySpectrum>>& spectra, double Omega);

struct KGap {
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    std::size_t index_lo = 0;
    std::size_t index_hi = 0;
    double max_im = 0.0;
    double re_center = 0.0;  ///< folded real part averaged over the interval
    bool paired = true;      ///< every growing mode had a decaying partner
};

/// Maximal runs of grid points carrying a mode with |Im omega| > tolerance_im,
/// one run per cluster of such modes in Re omega. Runs are linked between
/// neighbouring points when their Re centres lie within link_distance.
[[nodiscard]] std::vector<KGap> detect_k_gaps(const BandStructure& bands,
                                              double tolerance_im = 1e-9,
                                              double link_distance = -1.0);

struct BandGap {
    double lo = 0.0;
    double hi = 0.0;
    /// The gap continues across the folding boundary: it is [lo, Omega/2) joined
    /// with [-Omega/2, hi).
    bool wrap = false;

    [[nodiscard]] double width(double Omega) const { return wrap ? hi - lo + Omega : hi - lo; }
};

/// Re omega intervals of the folding window reached by no band, wider than
/// resolution. Each band covers the segments between its consecutive values.
[[nodiscard]] std::vector<BandGap> detect_band_gaps(const BandStructure& bands,
                                                    double resolution = 1e-6);

struct DegeneratePoint {
    double alpha = 0.0;
    cplx omega;
    std::size_t band_a = 0;
    std::size_t band_b = 0;
};

/// Grid points where two real bands coincide within tolerance.
[[nodiscard]] std::vector<DegeneratePoint> detect_degenerate_points(const BandStructure& bands,
                                                                    double tolerance = 1e-8);

/// k-gap alpha-length on each side of alpha = 0 for one Re omega cluster.
struct KGapAsymmetry {
    double re_center = 0.0;
    double length_negative = 0.0;  ///< alpha < 0
    double length_positive = 0.0;  ///< alpha > 0
};

struct ReciprocityReport {
    /// max over alpha, i of |omega_i^alpha - omega_i^{-alpha}| after matching.
    double deviation = 0.0;
    double worst_alpha = 0.0;
    std::vector<KGapAsymmetry> k_gap_sizes;
    /// max |length_negative - length_positive| over the table.
    double k_gap_asymmetry = 0.0;
};

/// Compares the spectrum at every alpha with the one at -alpha (greedy
/// nearest matching, wrap-aware in Re). k-gaps are grouped by Re centre
/// within link_distance and their alpha-lengths (points times grid spacing)
/// split at alpha = 0.
[[nodiscard]] ReciprocityReport reciprocity_report(const BandStructure& bands,
                                                   double tolerance_im = 1e-9,
                                                   double link_distance = -1.0);

struct ComparisonReport {
    double err_abs = 0.0;
    double worst_alpha = 0.0;
    std::vector<double> grid;
    std::vector<double> point_error;       ///< per grid point, max over roots
    std::vector<std::size_t> roots_found;  ///< exact roots per grid point
    std::size_t expected_roots = 0;        ///< 2N per grid point
    std::vector<ExactResult> exact;
    std::vector<QuasifrequencySpectrum> capacitance;
};

/// err_abs = max over alpha and converged exact roots of the wrap-aware
/// distance to the nearest capacitance (Floquet) quasifrequency.
[[nodiscard]] ComparisonReport compare_exact_vs_capacitance(const ResonatorSystem& system,
                                                            const SweepOptions& options = {});

}  // namespace resona1d
