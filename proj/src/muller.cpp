#include "resona1d/muller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resona1d/errors.hpp"

namespace resona1d {

using cplx = std::complex<double>;

void MullerConfig::validate() const {
    if (!(tolerance > 0.0)) throw ConfigError("muller: tolerance must be positive");
    if (max_iterations < 3) throw ConfigError("muller: max_iterations must be at least 3");
    if (!(perturbation > 0.0)) throw ConfigError("muller: perturbation must be positive");
}

namespace {

constexpr int kMaxDomainRetries = 8;

struct Sample {
    cplx z;
    cplx f;
};

// Evaluates the objective, stepping off excluded points of its domain.
Sample evaluate(const ComplexObjective& objective, cplx z, double scale) {
    for (int attempt = 0; attempt <= kMaxDomainRetries; ++attempt) {
        try {
            return {z, objective(z)};
        } catch (const DomainError&) {
            if (attempt == kMaxDomainRetries) throw;
            const double step = scale * (attempt + 1);
            z += cplx{step, 0.5 * step};
        }
    }
    throw NoConvergence("unreachable");
}

struct Iteration {
    MullerResult result;
    bool converged = false;
};

Iteration iterate(const ComplexObjective& objective, std::array<cplx, 3> seeds,
                  const MullerConfig& config) {
    const double nudge_scale = [&] {
        double m = 0.0;
        for (auto s : seeds) m = std::max(m, std::abs(s));
        return config.perturbation * std::max(m, 1e-3);
    }();

    Sample p0 = evaluate(objective, seeds[0], nudge_scale);
    Sample p1 = evaluate(objective, seeds[1], nudge_scale);
    Sample p2 = evaluate(objective, seeds[2], nudge_scale);

    for (const Sample* s : {&p0, &p1, &p2})
        if (std::abs(s->f) <= config.tolerance) return {{s->z, 0, std::abs(s->f)}, true};

    for (int it = 1; it <= config.max_iterations; ++it) {
        if (p0.f == p1.f && p1.f == p2.f) throw DegenerateParabola("objective values coincide");

        const cplx h1 = p1.z - p0.z;
        const cplx h2 = p2.z - p1.z;
        const cplx d1 = (p1.f - p0.f) / h1;
        const cplx d2 = (p2.f - p1.f) / h2;
        const cplx a = (d2 - d1) / (h2 + h1);
        const cplx b = a * h2 + d2;
        const cplx disc = std::sqrt(b * b - 4.0 * a * p2.f);
        const cplx plus = b + disc;
        const cplx minus = b - disc;
        const cplx denom = std::abs(plus) >= std::abs(minus) ? plus : minus;

        cplx dz;
        if (denom == cplx{0.0, 0.0}) {
            dz = cplx{nudge_scale, nudge_scale};
        } else {
            dz = -2.0 * p2.f / denom;
        }
        if (!std::isfinite(dz.real()) || !std::isfinite(dz.imag()))
            throw NoConvergence("Muller step is not finite");

        Sample next = evaluate(objective, p2.z + dz, nudge_scale);
        p0 = p1;
        p1 = p2;
        p2 = next;
        if (std::abs(p2.f) <= config.tolerance) return {{p2.z, it, std::abs(p2.f)}, true};
        if (p2.z == p1.z) break;
    }
    return {{p2.z, config.max_iterations, std::abs(p2.f)}, false};
}

}  // namespace

MullerResult find_root(const ComplexObjective& objective, const std::array<cplx, 3>& seeds,
                       const MullerConfig& config) {
    config.validate();
    if (seeds[0] == seeds[1] || seeds[1] == seeds[2] || seeds[0] == seeds[2])
        throw Error("Muller seeds must be pairwise distinct");

    auto guarded = [&](const std::array<cplx, 3>& start) {
        try {
            return iterate(objective, start, config);
        } catch (const DomainError& e) {
            throw NoConvergence(std::string("objective undefined near the iterates: ") + e.what());
        }
    };

    Iteration run;
    try {
        run = guarded(seeds);
    } catch (const DegenerateParabola&) {
        // One restart with the seeds spread in the complex plane.
        std::array<cplx, 3> spread = seeds;
        const double scale = config.perturbation * std::max(std::abs(seeds[2]), 1e-3);
        spread[1] += cplx{0.0, 3.0 * scale};
        spread[2] -= cplx{2.0 * scale, 1.0 * scale};
        run = guarded(spread);
    }

    if (!run.converged) {
        std::ostringstream msg;
        msg << "Muller did not converge: last iterate " << run.result.root << " with |f| = "
            << run.result.residual;
        throw NoConvergence(msg.str());
    }
    return run.result;
}

std::array<cplx, 3> seeds_from_static(double lambda, double delta, double vr, int sign,
                                      const MullerConfig& config) {
    if (lambda < 0.0) throw Error("seeds_from_static: lambda must be non-negative");
    const double s = sign < 0 ? -1.0 : 1.0;
    const double base = s * vr * std::sqrt(lambda * delta);
    const double p = config.perturbation;
    if (base == 0.0) return {cplx{s * p, 0.0}, cplx{-s * p, 0.0}, cplx{0.0, 2.0 * s * p}};
    return {cplx{base, 0.0}, cplx{base * (1.0 + p), 0.0}, cplx{base * (1.0 - p), 0.0}};
}

}  // namespace resona1d
