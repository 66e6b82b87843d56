#include "resona1d/cli.hpp"

#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "resona1d/capacitance.hpp"
#include "resona1d/errors.hpp"
#include "resona1d/exact.hpp"
#include "resona1d/floquet.hpp"
#include "resona1d/perturbation.hpp"

namespace resona1d {

using json = nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) field_error(path + key, "missing");
    return *it;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) field_error(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) field_error(field, "must be finite");
    return x;
}

std::vector<double> number_array(const json& v, const std::string& field) {
    if (!v.is_array()) field_error(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    if (!obj.is_object()) field_error(path.empty() ? "<root>" : path.substr(0, path.size() - 1), "expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) field_error(path + key, "unknown field");
}

std::vector<double> optional_array(const json& obj, const std::string& key, const std::string& path,
                                   std::size_t n) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::vector<double>(n, 0.0);
    auto v = number_array(*it, path + key);
    if (v.size() != n)
        field_error(path + key, "has " + std::to_string(v.size()) + " entries, expected " + std::to_string(n));
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const RunConfig& c) {
    json j;
    j["chain"] = {{"lengths", c.lengths}, {"gaps", c.gaps}};
    j["material"] = {{"delta", c.delta}, {"v0", c.v0}, {"vr", c.vr}};
    j["modulation"] = {{"Omega", c.Omega},         {"eps_rho", c.eps_rho},   {"eps_kappa", c.eps_kappa},
                       {"phi_rho", c.phi_rho},     {"phi_kappa", c.phi_kappa}};
    j["truncation_K"] = c.truncation_K;
    j["alpha_grid"] = c.alpha_grid;
    j["method"] = std::string(to_string(c.method));
    j["tolerances"] = {{"muller", c.tolerances.muller},
                       {"im", c.tolerances.im},
                       {"degeneracy", c.tolerances.degeneracy},
                       {"integrator_relative", c.tolerances.integrator_relative},
                       {"integrator_absolute", c.tolerances.integrator_absolute}};
    j["seed_perturbation"] = c.seed_perturbation;
    return j;
}

void validate(const RunConfig& c) {
    const std::size_t n = c.lengths.size();
    if (n == 0) field_error("chain.lengths", "must not be empty");
    if (c.gaps.size() != n)
        field_error("chain.gaps", "has " + std::to_string(c.gaps.size()) + " entries, expected " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!(c.lengths[i] > 0.0)) field_error("chain.lengths[" + std::to_string(i) + "]", "must be positive");
        if (!(c.gaps[i] > 0.0)) field_error("chain.gaps[" + std::to_string(i) + "]", "must be positive");
    }
    if (!(c.delta > 0.0)) field_error("material.delta", "must be positive");
    if (!(c.v0 > 0.0)) field_error("material.v0", "must be positive");
    if (!(c.vr > 0.0)) field_error("material.vr", "must be positive");
    if (!(c.Omega > 0.0)) field_error("modulation.Omega", "must be positive");
    const std::pair<const char*, const std::vector<double>*> arrays[] = {
        {"eps_rho", &c.eps_rho}, {"eps_kappa", &c.eps_kappa}, {"phi_rho", &c.phi_rho}, {"phi_kappa", &c.phi_kappa}};
    for (const auto& [name, values] : arrays) {
        if (values->size() != n)
            field_error(std::string("modulation.") + name,
                        "has " + std::to_string(values->size()) + " entries, expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(c.eps_rho[i] >= 0.0 && c.eps_rho[i] < 1.0))
            field_error("modulation.eps_rho[" + std::to_string(i) + "]", "must lie in [0, 1)");
        if (!(c.eps_kappa[i] >= 0.0 && c.eps_kappa[i] < 1.0))
            field_error("modulation.eps_kappa[" + std::to_string(i) + "]", "must lie in [0, 1)");
    }
    if (c.truncation_K < 1) field_error("truncation_K", "must be at least 1");
    if (c.alpha_grid < 3 || c.alpha_grid % 2 == 0) field_error("alpha_grid", "must be odd and at least 3");
    if (!(c.tolerances.muller > 0.0)) field_error("tolerances.muller", "must be positive");
    if (!(c.tolerances.im > 0.0)) field_error("tolerances.im", "must be positive");
    if (!(c.tolerances.degeneracy > 0.0)) field_error("tolerances.degeneracy", "must be positive");
    if (!(c.tolerances.integrator_relative > 0.0)) field_error("tolerances.integrator_relative", "must be positive");
    if (!(c.tolerances.integrator_absolute > 0.0)) field_error("tolerances.integrator_absolute", "must be positive");
    if (!(c.seed_perturbation > 0.0)) field_error("seed_perturbation", "must be positive");
}

void write_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

std::filesystem::path prepare_out(const CommandOptions& options, const std::string& file) {
    std::filesystem::create_directories(options.out_dir);
    return options.out_dir / file;
}

void report_missing(const BandStructure& bands, std::ostream& err) {
    for (std::size_t g = 0; g < bands.grid.size(); ++g)
        if (!bands.spectra[g])
            err << "warning: alpha = " << format_double(bands.grid[g]) << " skipped: " << bands.failures[g] << '\n';
}

int write_sweep(const std::string& file, const RunConfig& config, Method method, const CommandOptions& options,
                std::ostream& log, std::ostream& err) {
    const auto bands = band_sweep(config.system(), method, config.sweep_options());
    report_missing(bands, err);
    const auto path = prepare_out(options, file);
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_band_csv(out, bands);
    log << "wrote " << path.string() << " (" << bands.grid.size() << " alpha points, " << bands.missing()
        << " missing)\n";
    return bands.missing() == bands.grid.size() ? kExitSolver : kExitOk;
}

json k_gaps_json(const std::vector<KGap>& gaps) {
    json arr = json::array();
    for (const auto& k : gaps)
        arr.push_back({{"alpha_lo", k.alpha_lo}, {"alpha_hi", k.alpha_hi}, {"max_im", k.max_im},
                       {"re_center", k.re_center}, {"paired", k.paired}});
    return arr;
}

json band_gaps_json(const std::vector<BandGap>& gaps) {
    json arr = json::array();
    for (const auto& g : gaps) arr.push_back({{"lo", g.lo}, {"hi", g.hi}, {"wrap", g.wrap}});
    return arr;
}

json reciprocity_json(const ReciprocityReport& r) {
    json sizes = json::array();
    for (const auto& k : r.k_gap_sizes)
        sizes.push_back({{"re_center", k.re_center},
                         {"length_negative", k.length_negative},
                         {"length_positive", k.length_positive}});
    return {{"deviation", r.deviation},
            {"worst_alpha", r.worst_alpha},
            {"k_gap_asymmetry", r.k_gap_asymmetry},
            {"k_gap_sizes", sizes}};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

int run_perturbation(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const auto system = config.system();
    const std::size_t n = system.size();
    const double Omega = system.frequency();
    const auto grid = alpha_grid(system.chain.period(), config.alpha_grid);

    std::vector<Eigen::VectorXd> w(grid.size());
    double w_max = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        w[g] = static_frequencies(grid[g], system);
        w_max = std::max(w_max, w[g].maxCoeff());
    }
    auto omega_a0 = [&](std::size_t g, std::size_t j) {
        return j < n ? w[g](static_cast<Eigen::Index>(j)) : -w[g](static_cast<Eigen::Index>(j - n));
    };
    const int m_max = static_cast<int>(std::ceil(2.0 * w_max / Omega));

    json gaps = json::array();
    for (std::size_t l = 0; l < 2 * n; ++l) {
        for (std::size_t k = l + 1; k < 2 * n; ++k) {
            for (int m = -m_max; m <= m_max; ++m) {
                for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
                    if (grid[g] == 0.0 || grid[g + 1] == 0.0) continue;
                    const double d0 = omega_a0(g, l) - omega_a0(g, k) - m * Omega;
                    const double d1 = omega_a0(g + 1, l) - omega_a0(g + 1, k) - m * Omega;
                    if ((d0 > 0.0) == (d1 > 0.0)) continue;
                    const double alpha = crossing_alpha(system, l, k, m, grid[g], grid[g + 1]);
                    const auto expansion = m_first_order(alpha, system);
                    const auto block = f1_block(expansion, l, k, config.tolerances.degeneracy);
                    const double estimate =
                        gap_size_estimate(expansion, l, k, expansion.epsilon, config.tolerances.degeneracy);
                    const double w0 = expansion.folded[l].omega_0;
                    // The two Floquet quasifrequencies closest to the degenerate point.
                    auto fl = floquet_spectrum(alpha, system, config.sweep_options().integrator).entries;
                    std::sort(fl.begin(), fl.end(), [&](cplx a, cplx b) {
                        return folded_distance(a, w0, Omega) < folded_distance(b, w0, Omega);
                    });
                    const double measured = fl.size() >= 2 ? folded_distance(fl[0], fl[1], Omega) : 0.0;
                    gaps.push_back({{"alpha", alpha},
                                    {"pair", {l, k}},
                                    {"folding_difference", block.folding_difference},
                                    {"omega_0", w0},
                                    {"f1_block",
                                     {complex_json(block.block(0, 0)), complex_json(block.block(0, 1)),
                                      complex_json(block.block(1, 0)), complex_json(block.block(1, 1))}},
                                    {"f1_eigenvalues", {complex_json(block.eigenvalues(0)), complex_json(block.eigenvalues(1))}},
                                    {"gap_estimate", estimate},
                                    {"measured_splitting", measured}});
                }
            }
        }
    }
    const json doc = {{"config_hash", config_hash(config)}, {"gaps", gaps}};
    const auto path = prepare_out(options, "perturbation.json");
    write_json(path, doc);
    log << "wrote " << path.string() << " (" << gaps.size() << " degenerate points)\n";
    return kExitOk;
}

double time_exact(const ResonatorSystem& system, const SweepOptions& options, const std::vector<double>& alphas) {
    const auto t0 = std::chrono::steady_clock::now();
    for (double a : alphas) (void)exact_quasifrequencies(a, system, options.exact);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double time_capacitance(const ResonatorSystem& system, const SweepOptions& options, const std::vector<double>& alphas) {
    const auto t0 = std::chrono::steady_clock::now();
    for (double a : alphas) (void)floquet_spectrum(a, system, options.integrator);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_bench(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    struct Row {
        std::string sweep;
        std::string route;
        std::size_t N;
        int K;
        double seconds;
    };
    std::vector<Row> rows;
    const auto base = config.system();
    auto alphas_for = [](double period) {
        const double z = std::numbers::pi / period;
        return std::vector<double>{0.25 * z, 0.5 * z, -0.75 * z};
    };

    // Truncation sweep on the configured chain.
    for (int K = 1; K <= 4; ++K) {
        auto opts = config.sweep_options();
        opts.exact.truncation.K = K;
        rows.push_back({"K", "exact", base.size(), K, time_exact(base, opts, alphas_for(base.chain.period()))});
    }
    // Chain-size sweep: copies of the first resonator with phases pi / i.
    for (std::size_t N = 1; N <= 4; ++N) {
        std::vector<double> lengths(N, config.lengths[0]), gaps(N, config.gaps[0]);
        std::vector<double> er(N, config.eps_rho[0]), ek(N, config.eps_kappa[0]), phi(N);
        for (std::size_t i = 0; i < N; ++i) phi[i] = std::numbers::pi / static_cast<double>(i + 1);
        ResonatorSystem sys(ResonatorChain(lengths, gaps), base.material, Modulation(config.Omega, er, ek, phi, phi));
        const auto alphas = alphas_for(sys.chain.period());
        const auto opts = config.sweep_options();
        rows.push_back({"N", "exact", N, config.truncation_K, time_exact(sys, opts, alphas)});
        rows.push_back({"N", "capacitance", N, 0, time_capacitance(sys, opts, alphas)});
    }

    const auto path = prepare_out(options, "bench.csv");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "sweep,route,N,K,seconds\n";
    log << "sweep route        N  K  seconds\n";
    for (const auto& r : rows) {
        out << r.sweep << ',' << r.route << ',' << r.N << ',' << r.K << ',' << format_double(r.seconds) << '\n';
        char line[96];
        std::snprintf(line, sizeof line, "%-5s %-12s %zu  %d  %.4f\n", r.sweep.c_str(), r.route.c_str(), r.N, r.K, r.seconds);
        log << line;
    }
    log << "wrote " << path.string() << '\n';
    return kExitOk;
}

}  // namespace

ResonatorSystem RunConfig::system() const {
    return ResonatorSystem(ResonatorChain(lengths, gaps), MaterialConstants::from_contrast(delta, v0, vr),
                           Modulation(Omega, eps_rho, eps_kappa, phi_rho, phi_kappa));
}

SweepOptions RunConfig::sweep_options() const {
    SweepOptions o;
    o.grid = alpha_grid;
    o.exact.truncation.K = truncation_K;
    o.exact.muller.tolerance = tolerances.muller;
    o.exact.muller.perturbation = seed_perturbation;
    o.integrator.relative_tolerance = tolerances.integrator_relative;
    o.integrator.absolute_tolerance = tolerances.integrator_absolute;
    return o;
}

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc,
               {"name", "description", "chain", "material", "modulation", "truncation_K", "alpha_grid", "method",
                "tolerances", "seed_perturbation"},
               "");
    RunConfig c;
    const auto& chain = require(doc, "chain", "");
    check_keys(chain, {"lengths", "gaps"}, "chain.");
    c.lengths = number_array(require(chain, "lengths", "chain."), "chain.lengths");
    c.gaps = number_array(require(chain, "gaps", "chain."), "chain.gaps");
    const std::size_t n = c.lengths.size();

    const auto& material = require(doc, "material", "");
    check_keys(material, {"delta", "v0", "vr"}, "material.");
    c.delta = number(require(material, "delta", "material."), "material.delta");
    if (material.contains("v0")) c.v0 = number(material["v0"], "material.v0");
    if (material.contains("vr")) c.vr = number(material["vr"], "material.vr");

    const auto& mod = require(doc, "modulation", "");
    check_keys(mod, {"Omega", "eps_rho", "eps_kappa", "phi_rho", "phi_kappa"}, "modulation.");
    c.Omega = number(require(mod, "Omega", "modulation."), "modulation.Omega");
    c.eps_rho = optional_array(mod, "eps_rho", "modulation.", n);
    c.eps_kappa = optional_array(mod, "eps_kappa", "modulation.", n);
    c.phi_rho = optional_array(mod, "phi_rho", "modulation.", n);
    c.phi_kappa = optional_array(mod, "phi_kappa", "modulation.", n);

    if (doc.contains("truncation_K")) {
        const auto& k = doc["truncation_K"];
        if (!k.is_number_integer()) field_error("truncation_K", "expected an integer");
        c.truncation_K = k.get<int>();
    }
    if (doc.contains("alpha_grid")) {
        const auto& g = doc["alpha_grid"];
        if (!g.is_number_integer() || g.get<long long>() < 0) field_error("alpha_grid", "expected a positive integer");
        c.alpha_grid = g.get<std::size_t>();
    }
    if (doc.contains("method")) {
        if (!doc["method"].is_string()) field_error("method", "expected a string");
        try {
            c.method = parse_method(doc["method"].get<std::string>());
        } catch (const ConfigError& e) {
            field_error("method", e.what());
        }
    }
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        check_keys(t, {"muller", "im", "degeneracy", "integrator_relative", "integrator_absolute"}, "tolerances.");
        if (t.contains("muller")) c.tolerances.muller = number(t["muller"], "tolerances.muller");
        if (t.contains("im")) c.tolerances.im = number(t["im"], "tolerances.im");
        if (t.contains("degeneracy")) c.tolerances.degeneracy = number(t["degeneracy"], "tolerances.degeneracy");
        if (t.contains("integrator_relative"))
            c.tolerances.integrator_relative = number(t["integrator_relative"], "tolerances.integrator_relative");
        if (t.contains("integrator_absolute"))
            c.tolerances.integrator_absolute = number(t["integrator_absolute"], "tolerances.integrator_absolute");
    }
    if (doc.contains("seed_perturbation")) c.seed_perturbation = number(doc["seed_perturbation"], "seed_perturbation");

    validate(c);
    return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::string canonical_json(const RunConfig& config) { return to_json(config).dump(); }

std::string config_hash(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_json(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

void write_band_csv(std::ostream& out, const BandStructure& bands) {
    out << "alpha,band,re_omega,im_omega,method\n";
    const std::string method(to_string(bands.method));
    for (std::size_t g = 0; g < bands.grid.size(); ++g) {
        for (std::size_t b = 0; b < bands.bands.size(); ++b) {
            const auto& v = bands.bands[b][g];
            if (!v) continue;
            out << format_double(bands.grid[g]) << ',' << b << ',' << format_double(v->real()) << ','
                << format_double(v->imag()) << ',' << method << '\n';
        }
    }
}

RunConfig apply_overrides(RunConfig config, const CommandOptions& options) {
    if (options.method) config.method = *options.method;
    if (options.grid) config.alpha_grid = *options.grid;
    if (options.K) config.truncation_K = *options.K;
    validate(config);
    return config;
}

int run_command(const std::string& command, const RunConfig& config, const CommandOptions& options,
                std::ostream& log, std::ostream& err) {
    try {
        if (command == "static-bands")
            return write_sweep("static-bands.csv", config, Method::static_capacitance, options, log, err);
        if (command == "bands") return write_sweep("bands.csv", config, config.method, options, log, err);
        if (command == "exact") return write_sweep("exact.csv", config, Method::exact, options, log, err);
        if (command == "compare") {
            const auto report = compare_exact_vs_capacitance(config.system(), config.sweep_options());
            for (std::size_t g = 0; g < report.grid.size(); ++g)
                if (report.roots_found[g] < report.expected_roots)
                    err << "warning: alpha = " << format_double(report.grid[g]) << ": " << report.roots_found[g]
                        << " of " << report.expected_roots << " exact roots found\n";
            const json doc = {{"config_hash", config_hash(config)}, {"err_abs", report.err_abs}};
            const auto path = prepare_out(options, "compare.json");
            write_json(path, doc);
            log << "err_abs = " << format_double(report.err_abs) << " (worst alpha "
                << format_double(report.worst_alpha) << ")\nwrote " << path.string() << '\n';
            return kExitOk;
        }
        if (command == "gaps") {
            const auto bands = band_sweep(config.system(), config.method, config.sweep_options());
            report_missing(bands, err);
            const json doc = {{"config_hash", config_hash(config)},
                              {"gaps", band_gaps_json(detect_band_gaps(bands))},
                              {"k_gaps", k_gaps_json(detect_k_gaps(bands, config.tolerances.im))},
                              {"reciprocity", reciprocity_json(reciprocity_report(bands, config.tolerances.im))}};
            const auto path = prepare_out(options, "gaps.json");
            write_json(path, doc);
            log << "wrote " << path.string() << '\n';
            return kExitOk;
        }
        if (command == "perturbation") return run_perturbation(config, options, log);
        if (command == "bench") return run_bench(config, options, log);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << command << " failed: " << e.what() << '\n';
        return kExitSolver;
    }
    err << "error: unknown command '" << command << "'\n";
    return kExitConfig;
}

}  // namespace resona1d
