// qspt: batch front end for pulse-train runs, presets and self-checks.
//
//   qspt run <config>
//   qspt preset fig2|fig3 [--out DIR]
//   qspt compare <config>
//   qspt selftest [--seed N]
//
// Exit status: 0 success, 2 configuration error, 3 computation error.

#include <qspt/run.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int exit_config = 2;
constexpr int exit_compute = 3;

void print_metrics(const qspt::RunResult& r)
{
    if (!r.metrics) {
        std::cout << "metrics: " << r.metrics_status << "\n";
        return;
    }
    const auto& m = *r.metrics;
    std::printf("period (scaled)   %.9g\n", m.repetition_period_scaled);
    std::printf("repetition rate   %.9g Hz\n", m.repetition_rate_hz);
    std::printf("FWHM              %.6g (scaled)  %.6g s\n", m.fwhm_scaled, m.fwhm_seconds);
    std::printf("modulation depth  %.6g\n", m.modulation_depth);
    std::printf("peak gain         %.6g\n", m.peak_gain);
}

void print_files(const std::vector<std::string>& files)
{
    for (const auto& f : files)
        std::cout << "wrote " << f << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pulse-train generation in a coherently prepared Lambda medium"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "propagate a scenario from a key-value config");
    run->add_option("config", run_config, "configuration file")->required();

    std::string preset_name;
    std::optional<std::string> preset_out;
    auto* preset = app.add_subcommand("preset", "run a built-in scenario");
    preset->add_option("name", preset_name, "fig2 or fig3")->required()->check(CLI::IsMember({"fig2", "fig3"}));
    preset->add_option("--out", preset_out, "output directory");

    std::string compare_config;
    auto* compare = app.add_subcommand("compare", "compare analytic, linear and nonlinear propagation");
    compare->add_option("config", compare_config, "configuration file")->required();

    std::uint64_t seed = qspt::RunConfig{}.seed;
    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant checks");
    selftest->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    try {
        if (*run) {
            const auto r = qspt::run_scenario(qspt::load_run_config(run_config));
            print_metrics(r);
            print_files(r.files);
        } else if (*preset) {
            if (preset_name == "fig2") {
                const auto r = qspt::run_fig2(preset_out);
                std::cout << r.rows.size() << " rows\n";
                print_files(r.files);
            } else {
                const auto r = qspt::run_scenario(qspt::fig3_config(), preset_out);
                print_metrics(r);
                print_files(r.files);
            }
        } else if (*compare) {
            const auto cmp = qspt::compare_modes(qspt::load_run_config(compare_config));
            for (const auto& d : cmp.deviations)
                std::printf("%-40s max %.3e  mean %.3e\n", d.pair.c_str(), d.max_relative, d.mean_relative);
            print_files(cmp.files);
        } else if (*selftest) {
            bool ok = true;
            for (const auto& c : qspt::run_selftest(seed)) {
                std::printf("[%s] %s (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
                ok = ok && c.passed;
            }
            return ok ? 0 : exit_compute;
        }
    } catch (const qspt::Error& e) {
        std::cerr << "qspt: " << e.what() << "\n";
        return e.code() == qspt::ErrorCode::ConfigError ? exit_config : exit_compute;
    } catch (const std::exception& e) {
        std::cerr << "qspt: " << e.what() << "\n";
        return exit_compute;
    }
    return 0;
}
