#include "resona1d/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <thread>

#include "resona1d/capacitance.hpp"
#include "resona1d/errors.hpp"
#include "resona1d/perturbation.hpp"

namespace resona1d {

namespace {

constexpr double kDefaultLinkFraction = 0.05;

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = sweep_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

double circular(double a, double b, double Omega) {
    const double d = std::fmod(std::abs(a - b), Omega);
    return std::min(d, Omega - d);
}

double link_or_default(double link, double Omega) {
    return link > 0.0 ? link : kDefaultLinkFraction * Omega;
}

// Greedy matching of two entry lists; returns (index in a, index in b, distance).
struct Match {
    std::size_t a;
    std::size_t b;
    double distance;
};

std::vector<Match> greedy_match(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                double Omega, const std::function<bool(std::size_t, std::size_t)>& prefer) {
    std::vector<Match> all;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) all.push_back({i, j, folded_distance(a[i], b[j], Omega)});
    std::stable_sort(all.begin(), all.end(), [&](const Match& x, const Match& y) {
        if (x.distance != y.distance) return x.distance < y.distance;
        const bool px = prefer(x.a, x.b), py = prefer(y.a, y.b);
        if (px != py) return px;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
    std::vector<Match> out;
    for (const auto& m : all) {
        if (used_a[m.a] || used_b[m.b]) continue;
        used_a[m.a] = used_b[m.b] = true;
        out.push_back(m);
    }
    return out;
}

}  // namespace

std::vector<double> alpha_grid(double period, std::size_t count) {
    if (count < 3 || count % 2 == 0) throw ConfigError("alpha grid count must be odd and at least 3");
    if (!(period > 0.0)) throw ConfigError("alpha grid needs a positive period");
    std::vector<double> grid(count);
    const double half = std::numbers::pi / period;
    const std::size_t mid = count / 2;
    for (std::size_t j = 0; j < count; ++j) {
        // Built from the centre outwards so that grid[mid + k] == -grid[mid - k] exactly.
        const double offset = half * static_cast<double>(j > mid ? j - mid : mid - j) /
                              static_cast<double>(mid);
        grid[j] = j >= mid ? offset : -offset;
    }
    return grid;
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("RESONA1D_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t BandStructure::missing() const {
    return static_cast<std::size_t>(
        std::count_if(spectra.begin(), spectra.end(), [](const auto& s) { return !s.has_value(); }));
}

QuasifrequencySpectrum compute_spectrum(double alpha, const ResonatorSystem& system, Method method,
                                        const SweepOptions& options) {
    switch (method) {
        case Method::static_capacitance:
            return static_spectrum(alpha, system);
        case Method::floquet:
            return floquet_spectrum(alpha, system, options.integrator);
        case Method::perturbative:
            return perturbative_spectrum(alpha, system);
        case Method::exact: {
            const auto guess = floquet_spectrum(alpha, system, options.integrator);
            const auto seeds = spectrum_seeds(guess, system.frequency(), options.exact.muller);
            return exact_quasifrequencies(alpha, system, seeds, options.exact).spectrum();
        }
    }
    throw Error("unknown method");
}

std::vector<std::vector<std::optional<cplx>>> continue_bands(
    const std::vector<std::optional<QuasifrequencySpectrum>>& spectra, double Omega) {
    std::size_t count = 0;
    for (const auto& s : spectra)
        if (s) count = std::max(count, s->entries.size());
    std::vector<std::vector<std::optional<cplx>>> bands(count,
                                                        std::vector<std::optional<cplx>>(spectra.size()));
    std::vector<std::optional<cplx>> last(count);
    for (std::size_t g = 0; g < spectra.size(); ++g) {
        if (!spectra[g]) continue;
        const auto& entries = spectra[g]->entries;
        std::vector<std::size_t> active;
        std::vector<cplx> previous;
        for (std::size_t b = 0; b < count; ++b)
            if (last[b]) {
                active.push_back(b);
                previous.push_back(*last[b]);
            }
        std::vector<bool> taken(entries.size(), false);
        if (!active.empty()) {
            auto prefer = [&](std::size_t a, std::size_t e) {
                return (previous[a].imag() >= 0.0) == (entries[e].imag() >= 0.0);
            };
            for (const auto& m : greedy_match(previous, entries, Omega, prefer)) {
                bands[active[m.a]][g] = entries[m.b];
                last[active[m.a]] = entries[m.b];
                taken[m.b] = true;
            }
        }
        // Entries left over start bands that have no history yet.
        std::size_t next_free = 0;
        for (std::size_t e = 0; e < entries.size(); ++e) {
            if (taken[e]) continue;
            while (next_free < count && last[next_free]) ++next_free;
            if (next_free == count) break;
            bands[next_free][g] = entries[e];
            last[next_free] = entries[e];
        }
    }
    return bands;
}

BandStructure band_sweep(const ResonatorSystem& system, Method method, const SweepOptions& options) {
    BandStructure out;
    out.method = method;
    out.Omega = system.frequency();
    out.grid = alpha_grid(system.chain.period(), options.grid);
    out.spectra.resize(out.grid.size());
    out.failures.resize(out.grid.size());
    parallel_for(out.grid.size(), options.threads, [&](std::size_t g) {
        try {
            out.spectra[g] = compute_spectrum(out.grid[g], system, method, options);
        } catch (const Error& e) {
            out.failures[g] = e.what();
        }
    });
    out.bands = continue_bands(out.spectra, out.Omega);
    return out;
}

std::vector<KGap> detect_k_gaps(const BandStructure& bands, double tolerance_im, double link_distance) {
    const double Omega = bands.Omega;
    const double link = link_or_default(link_distance, Omega);
    struct Open {
        KGap gap;
        double last_re;
        double re_sum;
        std::size_t points;
    };
    std::vector<KGap> done;
    std::vector<Open> open;
    for (std::size_t g = 0; g < bands.grid.size(); ++g) {
        // Re centres of growing/decaying clusters at this point.
        struct Cluster {
            double re;
            double max_im;
            bool has_pos;
            bool has_neg;
        };
        std::vector<Cluster> clusters;
        if (bands.spectra[g]) {
            for (cplx w : bands.spectra[g]->entries) {
                if (std::abs(w.imag()) <= tolerance_im) continue;
                auto it = std::find_if(clusters.begin(), clusters.end(),
                                       [&](const Cluster& c) { return circular(c.re, w.real(), Omega) < link; });
                if (it == clusters.end()) {
                    clusters.push_back({w.real(), std::abs(w.imag()), w.imag() > 0.0, w.imag() < 0.0});
                } else {
                    it->max_im = std::max(it->max_im, std::abs(w.imag()));
                    it->has_pos = it->has_pos || w.imag() > 0.0;
                    it->has_neg = it->has_neg || w.imag() < 0.0;
                }
            }
        }
        std::vector<bool> used(clusters.size(), false);
        std::vector<Open> still_open;
        for (auto& o : open) {
            std::size_t best = clusters.size();
            double best_d = link;
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                const double d = circular(o.last_re, clusters[c].re, Omega);
                if (!used[c] && d < best_d) {
                    best = c;
                    best_d = d;
                }
            }
            if (best == clusters.size()) {
                o.gap.re_center = o.re_sum / static_cast<double>(o.points);
                done.push_back(o.gap);
                continue;
            }
            used[best] = true;
            const auto& c = clusters[best];
            o.gap.alpha_hi = bands.grid[g];
            o.gap.index_hi = g;
            o.gap.max_im = std::max(o.gap.max_im, c.max_im);
            o.gap.paired = o.gap.paired && c.has_pos && c.has_neg;
            o.last_re = c.re;
            o.re_sum += c.re;
            ++o.points;
            still_open.push_back(o);
        }
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            if (used[c]) continue;
            KGap gap{bands.grid[g], bands.grid[g], g, g, clusters[c].max_im, clusters[c].re,
                     clusters[c].has_pos && clusters[c].has_neg};
            still_open.push_back({gap, clusters[c].re, clusters[c].re, 1});
        }
        open = std::move(still_open);
    }
    for (auto& o : open) {
        o.gap.re_center = o.re_sum / static_cast<double>(o.points);
        done.push_back(o.gap);
    }
    std::sort(done.begin(), done.end(), [](const KGap& a, const KGap& b) {
        if (a.index_lo != b.index_lo) return a.index_lo < b.index_lo;
        return a.re_center < b.re_center;
    });
    return done;
}

std::vector<BandGap> detect_band_gaps(const BandStructure& bands, double resolution) {
    const double Omega = bands.Omega;
    const double lo_edge = -0.5 * Omega;
    const double hi_edge = 0.5 * Omega;
    std::vector<std::pair<double, double>> covered;
    auto add = [&](double a, double b) {
        if (a > b) std::swap(a, b);
        // Two values on the circle: take the shorter arc.
        if (b - a <= 0.5 * Omega) {
            covered.emplace_back(a, b);
        } else {
            covered.emplace_back(lo_edge, a);
            covered.emplace_back(b, hi_edge);
        }
    };
    double max_step = 0.0;
    for (const auto& band : bands.bands) {
        std::optional<double> prev;
        for (const auto& v : band) {
            if (!v) {
                prev.reset();
                continue;
            }
            if (prev) {
                add(*prev, v->real());
                max_step = std::max(max_step, folded_distance(*prev, v->real(), Omega));
            } else {
                add(v->real(), v->real());
            }
            prev = v->real();
        }
    }
    // Two bands meeting at a mirror point (0 or the window edge) may be
    // continued as a bounce rather than a crossing. Swapped arcs no longer
    // than the largest band step are below the grid resolution and count as
    // covered too.
    const std::size_t nb = bands.bands.size();
    for (std::size_t g = 0; g + 1 < bands.grid.size(); ++g) {
        for (std::size_t a = 0; a < nb; ++a) {
            for (std::size_t b = 0; b < nb; ++b) {
                if (a == b) continue;
                const auto& x = bands.bands[a][g];
                const auto& y = bands.bands[b][g + 1];
                if (!x || !y) continue;
                if (folded_distance(x->real(), y->real(), Omega) <= max_step) add(x->real(), y->real());
            }
        }
    }
    std::sort(covered.begin(), covered.end());
    std::vector<std::pair<double, double>> holes;
    double cursor = lo_edge;
    for (const auto& [a, b] : covered) {
        if (a > cursor) holes.emplace_back(cursor, a);
        cursor = std::max(cursor, b);
    }
    if (cursor < hi_edge) holes.emplace_back(cursor, hi_edge);

    std::vector<BandGap> gaps;
    for (const auto& [a, b] : holes) gaps.push_back({a, b, false});
    // Join the pieces touching both window edges into one wrapped gap.
    if (gaps.size() >= 2 && gaps.front().lo == lo_edge && gaps.back().hi == hi_edge) {
        BandGap wrapped{gaps.back().lo, gaps.front().hi, true};
        gaps.erase(gaps.begin());
        gaps.pop_back();
        gaps.push_back(wrapped);
    } else if (gaps.size() == 1 && gaps.front().lo == lo_edge && gaps.front().hi == hi_edge) {
        gaps.front().wrap = true;
        gaps.front().lo = lo_edge;
        gaps.front().hi = lo_edge;
    } else {
        for (auto& g : gaps)
            if (g.lo == lo_edge || g.hi == hi_edge) g.wrap = true;
    }
    std::vector<BandGap> out;
    for (const auto& g : gaps)
        if (g.width(Omega) > resolution) out.push_back(g);
    return out;
}

std::vector<DegeneratePoint> detect_degenerate_points(const BandStructure& bands, double tolerance) {
    std::vector<DegeneratePoint> out;
    for (std::size_t g = 0; g < bands.grid.size(); ++g) {
        for (std::size_t a = 0; a < bands.bands.size(); ++a) {
            const auto& va = bands.bands[a][g];
            if (!va || std::abs(va->imag()) > tolerance) continue;
            for (std::size_t b = a + 1; b < bands.bands.size(); ++b) {
                const auto& vb = bands.bands[b][g];
                if (!vb || std::abs(vb->imag()) > tolerance) continue;
                if (folded_distance(*va, *vb, bands.Omega) < tolerance)
                    out.push_back({bands.grid[g], *va, a, b});
            }
        }
    }
    return out;
}

ReciprocityReport reciprocity_report(const BandStructure& bands, double tolerance_im,
                                     double link_distance) {
    ReciprocityReport report;
    const std::size_t n = bands.grid.size();
    const double Omega = bands.Omega;
    for (std::size_t g = 0; g < n; ++g) {
        const std::size_t mirror = n - 1 - g;
        if (!bands.spectra[g] || !bands.spectra[mirror]) continue;
        const auto& a = bands.spectra[g]->entries;
        const auto& b = bands.spectra[mirror]->entries;
        for (const auto& m : greedy_match(a, b, Omega, [](std::size_t, std::size_t) { return false; })) {
            if (m.distance > report.deviation) {
                report.deviation = m.distance;
                report.worst_alpha = bands.grid[g];
            }
        }
    }

    const double link = link_or_default(link_distance, Omega);
    const double spacing = n > 1 ? bands.grid[1] - bands.grid[0] : 0.0;
    for (const auto& gap : detect_k_gaps(bands, tolerance_im, link)) {
        auto it = std::find_if(report.k_gap_sizes.begin(), report.k_gap_sizes.end(),
                               [&](const KGapAsymmetry& k) { return circular(k.re_center, gap.re_center, Omega) < link; });
        if (it == report.k_gap_sizes.end()) {
            report.k_gap_sizes.push_back({gap.re_center, 0.0, 0.0});
            it = std::prev(report.k_gap_sizes.end());
        }
        for (std::size_t g = gap.index_lo; g <= gap.index_hi; ++g) {
            if (bands.grid[g] < 0.0) it->length_negative += spacing;
            else if (bands.grid[g] > 0.0) it->length_positive += spacing;
        }
    }
    std::sort(report.k_gap_sizes.begin(), report.k_gap_sizes.end(),
              [](const KGapAsymmetry& a, const KGapAsymmetry& b) { return a.re_center < b.re_center; });
    for (const auto& k : report.k_gap_sizes)
        report.k_gap_asymmetry = std::max(report.k_gap_asymmetry, std::abs(k.length_negative - k.length_positive));
    return report;
}

ComparisonReport compare_exact_vs_capacitance(const ResonatorSystem& system, const SweepOptions& options) {
    ComparisonReport report;
    report.grid = alpha_grid(system.chain.period(), options.grid);
    const std::size_t n = report.grid.size();
    report.point_error.assign(n, 0.0);
    report.roots_found.assign(n, 0);
    report.expected_roots = 2 * system.size();
    report.exact.resize(n);
    report.capacitance.resize(n);
    const double Omega = system.frequency();
    parallel_for(n, options.threads, [&](std::size_t g) {
        const double alpha = report.grid[g];
        report.capacitance[g] = floquet_spectrum(alpha, system, options.integrator);
        const auto seeds = spectrum_seeds(report.capacitance[g], Omega, options.exact.muller);
        report.exact[g] = exact_quasifrequencies(alpha, system, seeds, options.exact);
        report.roots_found[g] = report.exact[g].roots.size();
        for (const auto& r : report.exact[g].roots) {
            double best = std::numeric_limits<double>::infinity();
            for (cplx w : report.capacitance[g].entries) best = std::min(best, folded_distance(r.folded, w, Omega));
            report.point_error[g] = std::max(report.point_error[g], best);
        }
    });
    for (std::size_t g = 0; g < n; ++g) {
        if (report.point_error[g] > report.err_abs) {
            report.err_abs = report.point_error[g];
            report.worst_alpha = report.grid[g];
        }
    }
    return report;
}

}  // namespace resona1d
