#ifndef QSPT_RUN_HPP
#define QSPT_RUN_HPP

// Batch orchestration behind the qspt command line: configuration, runs,
// presets, mode comparison and the built-in invariant self-test.

#include <qspt/analysis.hpp>
#include <qspt/atomic.hpp>
#include <qspt/dressed.hpp>
#include <qspt/io.hpp>
#include <qspt/keyvalue.hpp>
#include <qspt/propagation.hpp>

#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#define QSPT_VERSION "0.1.0"

namespace qspt {

struct GridSpec {
    std::size_t zeta_points = 33;
    std::size_t tau_points = 513;
    double tau_span = 4.0 * std::numbers::pi;
};

struct RunConfig {
    std::string species_file; ///< empty: built-in sodium
    FrequencyConvention convention = FrequencyConvention::cyclic;
    SublevelSelection sublevels;
    double density = 4e12;
    double temperature = 1e-6;
    double length_scaled = std::numbers::pi;
    complex alpha{0.5, 0.0};
    complex beta{0.0, std::sqrt(0.75)};
    complex alpha_bar{0.0, std::sqrt(0.75)};
    complex beta_bar{0.5, 0.0};
    double carrier_over_delta0 = 287360.0;
    complex input_eta{0.01, 0.0};
    GridSpec grid;
    PropagationMode mode = PropagationMode::numeric_linear;
    std::string output_dir = "qspt_out";
    std::uint64_t seed = 20100101;
    double adiabaticity_floor = 5.0;
    double rtol = 1e-9;
    double atol = 1e-14;
    std::string name = "custom";

    void validate() const
    {
        if (grid.zeta_points < 2 || grid.tau_points < 2)
            throw Error(ErrorCode::ConfigError, "zeta_points and tau_points must be >= 2");
        if (!(grid.tau_span > 0.0))
            throw Error(ErrorCode::ConfigError, "tau_span must be > 0");
        if (!(length_scaled > 0.0))
            throw Error(ErrorCode::ConfigError, "length_scaled must be > 0");
        if (!(rtol > 0.0) || !(atol > 0.0))
            throw Error(ErrorCode::ConfigError, "rtol and atol must be > 0");
        if (output_dir.empty())
            throw Error(ErrorCode::ConfigError, "output_dir must not be empty");
    }
};

/// Keys that a run configuration must set.
inline const std::vector<std::string>& required_run_keys()
{
    static const std::vector<std::string> keys = {"density",  "temperature", "length_scaled",
                                                  "alpha",    "beta",        "alpha_bar",
                                                  "beta_bar", "carrier_over_delta0", "input_eta"};
    return keys;
}

inline RunConfig parse_run_config(const KeyValueFile& kv)
{
    if (kv.empty())
        throw Error(ErrorCode::ConfigError, kv.source() + ": configuration is empty");
    for (const auto& k : required_run_keys())
        if (!kv.has(k))
            throw Error(ErrorCode::ConfigError, kv.source() + ": missing required key '" + k + "'");

    RunConfig c;
    c.name = kv.get_string("name").value_or(c.name);
    if (auto s = kv.get_string("species_file")) {
        const std::filesystem::path p(*s);
        const auto base = std::filesystem::path(kv.source()).parent_path();
        c.species_file = p.is_relative() && !base.empty() ? (base / p).string() : p.string();
    }
    if (auto s = kv.get_string("frequency_convention")) {
        try {
            c.convention = parse_frequency_convention(*s);
        } catch (const Error& e) {
            kv.fail(kv.line_of("frequency_convention"), e.what());
        }
    }
    c.sublevels.excited_F = static_cast<int>(kv.get_int("excited_F").value_or(c.sublevels.excited_F));
    c.sublevels.M_lower = static_cast<int>(kv.get_int("M_lower").value_or(c.sublevels.M_lower));
    c.sublevels.M_upper = static_cast<int>(kv.get_int("M_upper").value_or(c.sublevels.M_upper));
    c.density = *kv.get_double("density");
    c.temperature = *kv.get_double("temperature");
    c.length_scaled = *kv.get_double("length_scaled");
    c.alpha = *kv.get_complex("alpha");
    c.beta = *kv.get_complex("beta");
    c.alpha_bar = *kv.get_complex("alpha_bar");
    c.beta_bar = *kv.get_complex("beta_bar");
    c.carrier_over_delta0 = *kv.get_double("carrier_over_delta0");
    c.input_eta = *kv.get_complex("input_eta");
    auto count = [&](const char* key, std::size_t fallback) {
        const auto v = kv.get_int(key);
        if (!v)
            return fallback;
        if (*v < 2)
            kv.fail(kv.line_of(key), std::string(key) + " must be >= 2");
        return static_cast<std::size_t>(*v);
    };
    c.grid.zeta_points = count("zeta_points", c.grid.zeta_points);
    c.grid.tau_points = count("tau_points", c.grid.tau_points);
    c.grid.tau_span = kv.get_double("tau_span").value_or(c.grid.tau_span);
    if (auto s = kv.get_string("mode")) {
        try {
            c.mode = parse_propagation_mode(*s);
        } catch (const Error& e) {
            kv.fail(kv.line_of("mode"), e.what());
        }
    }
    c.output_dir = kv.get_string("output_dir").value_or(c.output_dir);
    if (auto v = kv.get_int("seed"))
        c.seed = static_cast<std::uint64_t>(*v);
    c.adiabaticity_floor = kv.get_double("adiabaticity_floor").value_or(c.adiabaticity_floor);
    c.rtol = kv.get_double("rtol").value_or(c.rtol);
    c.atol = kv.get_double("atol").value_or(c.atol);
    for (const auto& k : kv.unused_keys())
        kv.fail(kv.line_of(k), "unknown key '" + k + "'");
    try {
        c.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, kv.source() + ": " + e.what());
    }
    return c;
}

inline RunConfig load_run_config(const std::string& path)
{
    return parse_run_config(KeyValueFile::load(path));
}

/// Pulse-train scenario: sodium, rho = 4e12 cm^-3, T = 1 uK, zeta_max = pi,
/// alpha = beta_bar = 0.5, beta = alpha_bar = i sqrt(0.75), omega = 287360 delta0,
/// observed over four periods.
inline RunConfig fig3_config()
{
    RunConfig c;
    c.name = "fig3";
    c.grid.tau_span = 8.0 * std::numbers::pi;
    c.grid.tau_points = 1025;
    return c;
}

inline AtomSpecies resolve_species(const RunConfig& c)
{
    if (c.species_file.empty())
        return sodium_preset(c.convention, c.sublevels);
    const auto kv = KeyValueFile::load(c.species_file);
    if (kv.has("excited_F") || kv.has("M_lower") || kv.has("M_upper"))
        return species_from_keyvalue(kv, c.convention);
    // run-level sublevel selection applies when the species file has none
    std::string text = io::read_file(c.species_file);
    text += "\nexcited_F = " + std::to_string(c.sublevels.excited_F);
    text += "\nM_lower = " + std::to_string(c.sublevels.M_lower);
    text += "\nM_upper = " + std::to_string(c.sublevels.M_upper) + "\n";
    return species_from_keyvalue(KeyValueFile::parse(text, c.species_file), c.convention);
}

/// Physical scenario for a configuration. Any inconsistency surfaces as a
/// ConfigError, since it is a property of the input rather than of the run.
inline MediumScenario build_scenario(const RunConfig& c)
{
    try {
        c.validate();
        MediumScenario ms;
        ms.species = resolve_species(c);
        ms.density = c.density;
        ms.temperature = c.temperature;
        ms.length_scaled = c.length_scaled;
        ms.alpha = c.alpha;
        ms.beta = c.beta;
        ms.alpha_bar = c.alpha_bar;
        ms.beta_bar = c.beta_bar;
        ms.carrier_omega = c.carrier_over_delta0 * ms.species.delta0;
        ms.input_eta = c.input_eta;
        ms.scale.adiabaticity_floor = c.adiabaticity_floor;
        ms.validate();
        (void)ms.scaled();
        return ms;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError)
            throw;
        throw Error(ErrorCode::ConfigError, e.what());
    }
}

inline std::filesystem::path resolve_output_dir(const RunConfig& c, const std::optional<std::string>& cli_override = {})
{
    if (cli_override)
        return *cli_override;
    if (const char* env = std::getenv("QSPT_OUTPUT_DIR"); env && *env)
        return env;
    return c.output_dir;
}

// ---------------------------------------------------------------------------
// Manifest

inline nlohmann::ordered_json c2j(complex z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); }

inline nlohmann::ordered_json manifest_for(const RunConfig& c, const MediumScenario& ms)
{
    using nlohmann::ordered_json;
    const ScaledProblem sp = ms.scaled();
    const DressedPair dp = dress(sp);
    const auto w = thermal_weights(ms.species.delta0, ms.temperature);
    ordered_json m;
    m["software"] = {{"name", "qspt"}, {"version", QSPT_VERSION}};
    m["run"] = {{"name", c.name}, {"mode", std::string(to_string(c.mode))}, {"seed", c.seed}};
    m["conventions"] = {{"frequency_convention", std::string(to_string(c.convention))},
                        {"units", "CGS-Gaussian"},
                        {"tau", "retarded, delta0 (t - z/c)"},
                        {"zeta", "delta0 z / c"},
                        {"adiabaticity_floor", c.adiabaticity_floor}};
    m["constants_cgs"] = {{"hbar_erg_s", cgs::hbar},
                          {"electron_charge_statC", cgs::electron_charge},
                          {"electron_mass_g", cgs::electron_mass},
                          {"boltzmann_erg_per_K", cgs::boltzmann},
                          {"speed_of_light_cm_per_s", cgs::speed_of_light}};
    const auto& s = ms.species;
    m["species"] = {{"label", s.label},
                    {"source", c.species_file.empty() ? std::string("built-in") : c.species_file},
                    {"delta0_rad_per_s", s.delta0},
                    {"omega1_rad_per_s", s.omega1},
                    {"omega2_rad_per_s", s.omega2},
                    {"d1_statC_cm", s.d1},
                    {"d2_statC_cm", s.d2},
                    {"f1", s.f1 ? ordered_json(*s.f1) : ordered_json()},
                    {"f2", s.f2 ? ordered_json(*s.f2) : ordered_json()},
                    {"F_lower", s.ground_F_lower},
                    {"F_upper", s.ground_F_upper},
                    {"excited_F", c.sublevels.excited_F},
                    {"M_lower", c.sublevels.M_lower},
                    {"M_upper", c.sublevels.M_upper}};
    m["medium"] = {{"density_cm3", ms.density},
                   {"temperature_K", ms.temperature},
                   {"length_scaled", ms.length_scaled},
                   {"length_cm", ms.length_scaled * cgs::speed_of_light / s.delta0},
                   {"alpha", c2j(ms.alpha)},
                   {"beta", c2j(ms.beta)},
                   {"alpha_bar", c2j(ms.alpha_bar)},
                   {"beta_bar", c2j(ms.beta_bar)},
                   {"thermal_weights", {w.lower, w.upper}},
                   {"carrier_rad_per_s", ms.carrier_omega},
                   {"carrier_over_delta0", c.carrier_over_delta0},
                   {"input_eta", c2j(ms.input_eta)},
                   {"input_field_statV_per_cm", c2j(field_for_eta(s, ms.input_eta))}};
    m["scaled"] = {{"det1", sp.det1},
                   {"det2", sp.det2},
                   {"xi1", c2j(sp.xi1)},
                   {"xi2", c2j(sp.xi2)},
                   {"eta", c2j(sp.eta)},
                   {"omega_scaled", sp.omega_scaled},
                   {"gain_prefactor_K", gain_prefactor(ms)},
                   {"gain_coefficient_g", c2j(gain_coefficient(ms, dp))}};
    m["dressed_front"] = {{"p", dp.p},
                          {"q", dp.q},
                          {"lambda1", dp.lambda1},
                          {"lambda2", dp.lambda2},
                          {"bracket", c2j(dp.bracket)},
                          {"within_validity", dp.within_validity}};
    m["grid"] = {{"zeta_points", c.grid.zeta_points},
                 {"tau_points", c.grid.tau_points},
                 {"tau_span", c.grid.tau_span}};
    m["integrator"] = {{"scheme", "Dormand-Prince 5(4)"}, {"rtol", c.rtol}, {"atol", c.atol}};
    return m;
}

// ---------------------------------------------------------------------------
// Runs

struct RunResult {
    std::filesystem::path output_dir;
    std::vector<std::string> files;
    IntensityField field;
    std::optional<PulseMetrics> metrics;
    std::string metrics_status = "ok";
};

inline PropagationGrid grid_for(const RunConfig& c)
{
    return PropagationGrid::uniform(c.length_scaled, c.grid.zeta_points, 0.0, c.grid.tau_span, c.grid.tau_points);
}

inline PropagationOptions options_for(const RunConfig& c)
{
    PropagationOptions o;
    o.integrator.rtol = c.rtol;
    o.integrator.atol = c.atol;
    return o;
}

namespace detail {

inline void write_outputs(const std::filesystem::path& dir, const std::map<std::string, std::string>& files,
                          std::vector<std::string>& written)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, content] : files) {
        io::write_file_atomic(dir / name, content);
        written.push_back((dir / name).string());
    }
}

inline std::string dressed_csv(const DressedPair& dp)
{
    io::CsvWriter csv({"quantity", "re", "im"});
    auto put = [&](const std::string& name, complex v) {
        csv.row_strings(std::vector<std::string>{name, io::format_double(v.real()), io::format_double(v.imag())});
    };
    put("p", dp.p);
    put("q", dp.q);
    put("lambda1", dp.lambda1);
    put("lambda2", dp.lambda2);
    put("A1(lambda1)", dp.a1_l1);
    put("A2(lambda1)", dp.a2_l1);
    put("A1(lambda2)", dp.a1_l2);
    put("A2(lambda2)", dp.a2_l2);
    put("b(lambda1)", dp.b_l1);
    put("b(lambda2)", dp.b_l2);
    put("bracket", dp.bracket);
    return csv.str();
}

} // namespace detail

/// Propagates the configured scenario and writes intensity.csv, metrics.csv,
/// dressed.csv, pulse_train.svg and manifest.json. Nothing is written unless
/// the whole computation succeeds.
inline RunResult run_scenario(const RunConfig& c, const std::optional<std::string>& out_override = {})
{
    const MediumScenario ms = build_scenario(c);
    const PropagationGrid grid = grid_for(c);
    RunResult res;
    res.output_dir = resolve_output_dir(c, out_override);
    res.field = propagate_numeric(ms, grid, c.mode, options_for(c));

    const std::size_t last = grid.zeta.size() - 1;
    std::vector<double> ri(grid.tau.size());
    for (std::size_t it = 0; it < grid.tau.size(); ++it) {
        const double front = res.field.at(0, it);
        ri[it] = front > 0.0 ? res.field.at(last, it) / front : 1.0;
    }
    const auto [lo, hi] = std::minmax_element(ri.begin(), ri.end());
    const double depth = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
    try {
        res.metrics = pulse_metrics(grid.tau, ri, ms.species.delta0);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoModulation && e.code() != ErrorCode::InsufficientSamples)
            throw;
        res.metrics_status = std::string(to_string(e.code()));
    }

    std::map<std::string, std::string> files;
    {
        io::CsvWriter csv({"zeta", "tau", "intensity"});
        for (std::size_t iz = 0; iz < grid.zeta.size(); ++iz)
            for (std::size_t it = 0; it < grid.tau.size(); ++it)
                csv.row({grid.zeta[iz], grid.tau[it], res.field.at(iz, it)});
        files["intensity.csv"] = csv.str();
    }
    {
        io::CsvWriter csv({"zeta", "status", "repetition_period_scaled", "repetition_rate_hz", "fwhm_scaled",
                           "fwhm_seconds", "modulation_depth", "peak_gain"});
        std::vector<std::string> cells{io::format_double(grid.zeta[last]), res.metrics_status};
        if (res.metrics) {
            const auto& m = *res.metrics;
            for (double v : {m.repetition_period_scaled, m.repetition_rate_hz, m.fwhm_scaled, m.fwhm_seconds,
                             m.modulation_depth, m.peak_gain})
                cells.push_back(io::format_double(v));
        } else {
            cells.insert(cells.end(), {"", "", "", ""});
            cells.push_back(io::format_double(depth));
            cells.push_back(io::format_double(*hi));
        }
        csv.row_strings(cells);
        files["metrics.csv"] = csv.str();
    }
    files["dressed.csv"] = detail::dressed_csv(ms.front_pair());
    files["manifest.json"] = manifest_for(c, ms).dump(2) + "\n";

    // Plots are a convenience; a failure here must not cost the numeric outputs.
    try {
        const std::vector<io::Series> series{{"zeta = " + io::format_double(grid.zeta[last]), grid.tau, ri}};
        files["pulse_train.svg"] =
            io::svg_line_chart("Relative intensity at the medium exit", "retarded time delta0 (t - z/c)",
                               "|eta(z,t)|^2 / |eta(0,t)|^2", series);
    } catch (...) {
    }

    detail::write_outputs(res.output_dir, files, res.files);
    return res;
}

struct ScanResult {
    std::filesystem::path output_dir;
    std::vector<std::string> files;
    std::vector<BracketRow> rows;
};

/// Bracket and characteristic-value gap over eta in [0, 1] (101 rows) for the
/// sodium detunings det1 = 9, det2 = 10.
inline ScanResult run_fig2(const std::optional<std::string>& out_override = {},
                           FrequencyConvention conv = FrequencyConvention::cyclic)
{
    RunConfig c = fig3_config();
    c.name = "fig2";
    c.convention = conv;
    const AtomSpecies na = sodium_preset(conv);
    const ScaledProblem sp = scale_for_eta(na, 0.0, c.carrier_over_delta0 * na.delta0);
    ScanResult res;
    res.output_dir = resolve_output_dir(c, out_override);
    const auto etas = linspace(0.0, 1.0, 101);
    res.rows = bracket_scan(sp, etas);

    std::map<std::string, std::string> files;
    io::CsvWriter csv({"eta", "bracket_abs", "bracket_re", "bracket_im", "lambda1_minus_lambda2", "p", "q"});
    std::vector<double> xs, ys;
    for (const auto& r : res.rows) {
        csv.row({r.eta, r.bracket_abs, r.bracket.real(), r.bracket.imag(), r.lambda_gap, r.p, r.q});
        xs.push_back(r.eta);
        ys.push_back(r.bracket_abs);
    }
    files["bracket_scan.csv"] = csv.str();
    nlohmann::ordered_json m;
    m["software"] = {{"name", "qspt"}, {"version", QSPT_VERSION}};
    m["run"] = {{"name", "fig2"}, {"rows", res.rows.size()}};
    m["conventions"] = {{"frequency_convention", std::string(to_string(conv))}};
    m["scaled"] = {{"det1", sp.det1}, {"det2", sp.det2}, {"arm_ratio_d1_over_d2", sp.arm_ratio},
                   {"omega_scaled", sp.omega_scaled}};
    m["species"] = {{"label", na.label}, {"delta0_rad_per_s", na.delta0}, {"d1_statC_cm", na.d1},
                    {"d2_statC_cm", na.d2}};
    files["manifest.json"] = m.dump(2) + "\n";
    try {
        const std::vector<io::Series> series{{"|[A2, A1]|", xs, ys}};
        files["bracket.svg"] = io::svg_line_chart("Superposition bracket vs field strength", "eta", "|[A2, A1]|", series);
    } catch (...) {
    }
    detail::write_outputs(res.output_dir, files, res.files);
    return res;
}

// ---------------------------------------------------------------------------
// Mode comparison

struct Deviation {
    std::string pair;
    double max_relative = 0.0;
    double mean_relative = 0.0;
};

inline Deviation field_deviation(std::string name, const IntensityField& a, const IntensityField& b)
{
    if (a.values.size() != b.values.size())
        throw Error(ErrorCode::GridError, "fields live on different grids");
    Deviation d{std::move(name), 0.0, 0.0};
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double scale = std::max(std::abs(a.values[i]), std::abs(b.values[i]));
        const double rel = scale > 0.0 ? std::abs(a.values[i] - b.values[i]) / scale : 0.0;
        d.max_relative = std::max(d.max_relative, rel);
        d.mean_relative += rel;
    }
    if (!a.values.empty())
        d.mean_relative /= static_cast<double>(a.values.size());
    return d;
}

struct ModeComparison {
    std::vector<Deviation> deviations;
    std::filesystem::path output_dir;
    std::vector<std::string> files;
};

/// Runs all three modes on the configured grid and reports pairwise relative
/// deviations; writes compare.csv when `write` is set.
inline ModeComparison compare_modes(const RunConfig& c, bool write = true,
                                    const std::optional<std::string>& out_override = {})
{
    const MediumScenario ms = build_scenario(c);
    const PropagationGrid grid = grid_for(c);
    const auto opt = options_for(c);
    const auto analytic = propagate_numeric(ms, grid, PropagationMode::analytic, opt);
    const auto linear = propagate_numeric(ms, grid, PropagationMode::numeric_linear, opt);
    const auto nonlinear = propagate_numeric(ms, grid, PropagationMode::numeric_nonlinear, opt);
    ModeComparison cmp;
    cmp.deviations.push_back(field_deviation("analytic_vs_numeric_linear", analytic, linear));
    cmp.deviations.push_back(field_deviation("analytic_vs_numeric_nonlinear", analytic, nonlinear));
    cmp.deviations.push_back(field_deviation("numeric_linear_vs_numeric_nonlinear", linear, nonlinear));
    if (write) {
        cmp.output_dir = resolve_output_dir(c, out_override);
        io::CsvWriter csv({"pair", "max_relative_deviation", "mean_relative_deviation"});
        for (const auto& d : cmp.deviations)
            csv.row_strings(std::vector<std::string>{d.pair, io::format_double(d.max_relative),
                                                     io::format_double(d.mean_relative)});
        detail::write_outputs(cmp.output_dir, {{"compare.csv", csv.str()}}, cmp.files);
    }
    return cmp;
}

// ---------------------------------------------------------------------------
// Self-test

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Random far-detuned problem with independent complex couplings.
inline ScaledProblem random_scaled_problem(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> det(5.5, 40.0);
    std::uniform_real_distribution<double> mag(0.0, 1.5);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    std::bernoulli_distribution below(0.5);
    ScaledProblem sp;
    const double d = det(rng);
    // carrier above both lines: det2 = det1 + 1; below: det1 = det2 - 1 with det2 < -floor
    sp.det1 = below(rng) ? -d - 1.0 : d;
    sp.det2 = sp.det1 + 1.0;
    sp.xi1 = std::polar(mag(rng), ang(rng));
    sp.xi2 = std::polar(mag(rng), ang(rng));
    sp.eta = 0.5 * (sp.xi1 + sp.xi2);
    sp.omega_scaled = 287360.0;
    return sp;
}

inline std::vector<SelftestCheck> run_selftest(std::uint64_t seed)
{
    std::vector<SelftestCheck> checks;
    auto add = [&](std::string name, bool ok, std::string detail) {
        checks.push_back({std::move(name), ok, std::move(detail)});
    };
    std::mt19937_64 rng(seed);

    {
        double worst_vieta = 0.0, worst_residual = 0.0, worst_norm = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const ScaledProblem sp = random_scaled_problem(rng);
            const DressedPair dp = dress(sp);
            worst_vieta = std::max({worst_vieta, std::abs(dp.lambda1 + dp.lambda2 - dp.p) / std::max(1.0, std::abs(dp.p)),
                                    std::abs(dp.lambda1 * dp.lambda2 - dp.q) / std::max(1e-300, std::abs(dp.q))});
            worst_residual = std::max({worst_residual,
                                       stationary_residual(sp, dp.lambda1, {dp.a1_l1, dp.a2_l1}) / (1.0 + std::abs(dp.lambda1)),
                                       stationary_residual(sp, dp.lambda2, {dp.a1_l2, dp.a2_l2}) / (1.0 + std::abs(dp.lambda2))});
            worst_norm = std::max({worst_norm, std::abs(std::norm(dp.a1_l1) + std::norm(dp.a2_l1) - 1.0),
                                   std::abs(std::norm(dp.a1_l2) + std::norm(dp.a2_l2) - 1.0)});
        }
        add("vieta identities (1e4 random problems)", worst_vieta <= 1e-12, "worst " + io::format_double(worst_vieta));
        add("stationary residual", worst_residual <= 1e-10, "worst " + io::format_double(worst_residual));
        add("amplitude normalization", worst_norm <= 1e-12, "worst " + io::format_double(worst_norm));
    }
    {
        bool ok = true;
        for (int F = 0; F <= 4; ++F)
            for (int Fp = std::max(0, F - 1); Fp <= F + 1; ++Fp)
                for (int M = -F; M <= F; ++M) {
                    const int Mp = M + 1;
                    if (std::abs(Mp) > Fp || (F == 0 && Fp == 0))
                        continue;
                    ok = ok && dipole_plus(Fp, Mp, F, M, 1.0) == dipole_minus(F, M, Fp, Mp, 1.0);
                }
        add("dipole conjugation identity", ok, "F <= 4");
    }
    {
        double worst = 0.0;
        std::uniform_real_distribution<double> fd(0.01, 1.0), wd(1e14, 1e16);
        for (int i = 0; i < 1000; ++i) {
            const double f = fd(rng), w = wd(rng);
            const int F = i % 5;
            const double back = oscillator_strength_from_reduced_dipole(reduced_dipole_from_oscillator_strength(f, w, F), w, F);
            worst = std::max(worst, std::abs(back - f) / f);
        }
        add("oscillator strength round trip", worst <= 1e-12, "worst " + io::format_double(worst));
    }
    {
        double worst = 0.0;
        bool bounded = true;
        std::uniform_real_distribution<double> td(0.0, 0.5);
        const double delta0 = sodium_preset().delta0;
        for (int i = 0; i < 1000; ++i) {
            const auto w = thermal_weights(delta0, td(rng));
            worst = std::max(worst, std::abs(w.lower + w.upper - 1.0));
            bounded = bounded && w.lower >= 0.0 && w.lower <= 1.0 && w.upper >= 0.0 && w.upper <= 1.0;
        }
        add("thermal weights sum to one", worst <= 1e-15 && bounded, "worst " + io::format_double(worst));
    }
    {
        const RunConfig c = fig3_config();
        const MediumScenario ms = build_scenario(c);
        const DressedPair dp = ms.front_pair();
        const complex g = gain_coefficient(ms, dp);
        const double period = 2.0 * std::numbers::pi / std::abs(dp.gap());
        double mean = 0.0;
        const int n = 4096;
        for (int i = 0; i < n; ++i)
            mean += log_gain_exponent(g, dp.gap(), ms.length_scaled, period * i / n);
        mean /= n;
        add("zero-mean exponent over one period", std::abs(mean) <= 1e-10, "mean " + io::format_double(mean));
    }
    return checks;
}

} // namespace qspt

#endif
