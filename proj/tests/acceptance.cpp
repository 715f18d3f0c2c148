// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <qspt/qspt.hpp>
#include <qspt/run.hpp>

#include <Eigen/Eigenvalues>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qspt;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool passed = true;
    std::string detail;

    void check(bool ok, const std::string& what)
    {
        if (!ok) {
            passed = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

MediumScenario fig3_scenario(FrequencyConvention conv = FrequencyConvention::cyclic)
{
    RunConfig c = fig3_config();
    c.convention = conv;
    return build_scenario(c);
}

ScaledProblem fig2_problem(complex eta)
{
    const auto na = sodium_preset();
    return scale_for_eta(na, eta, 287360.0 * na.delta0);
}

Outcome zero_field_spectrum()
{
    Outcome o;
    const DressedPair dp = dress(fig2_problem(0.0));
    const double gap_error = std::abs(std::abs(dp.lambda1 - dp.lambda2) - 1.0);
    const double bracket_error = std::abs(std::abs(dp.bracket) - 1.0);
    o.check(gap_error <= 1e-12, "| |l1-l2| - 1 | = " + num(gap_error));
    o.check(bracket_error <= 1e-12, "| |bracket| - 1 | = " + num(bracket_error));
    if (o.passed)
        o.detail = "|l1-l2| - 1 = " + num(gap_error) + ", |bracket| - 1 = " + num(bracket_error);
    return o;
}

Outcome eigen_oracle()
{
    Outcome o;
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> mag(6.0, 60.0), re(-0.7, 0.7);
    std::bernoulli_distribution side(0.5);
    double worst_vec = 0.0, worst_lambda = 0.0, worst_vieta = 0.0;
    for (int i = 0; i < 10000; ++i) {
        ScaledProblem sp;
        const double d = mag(rng);
        sp.det1 = side(rng) ? d : -d - 1.0;
        sp.det2 = sp.det1 + 1.0;
        sp.xi1 = {re(rng), re(rng)};
        sp.xi2 = {re(rng), re(rng)};
        const DressedPair dp = dress(sp);

        Eigen::Matrix2cd m;
        m << std::norm(sp.xi1) / sp.det1, sp.xi1 * std::conj(sp.xi2) / sp.det2, sp.xi2 * std::conj(sp.xi1) / sp.det1,
            1.0 + std::norm(sp.xi2) / sp.det2;
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
        int hi = es.eigenvalues()(0).real() >= es.eigenvalues()(1).real() ? 0 : 1;
        const double ref_l[2] = {es.eigenvalues()(hi).real(), es.eigenvalues()(1 - hi).real()};
        const complex got[2][2] = {{dp.a1_l1, dp.a2_l1}, {dp.a1_l2, dp.a2_l2}};
        const double got_l[2] = {dp.lambda1, dp.lambda2};
        for (int k = 0; k < 2; ++k) {
            Eigen::Vector2cd v = es.eigenvectors().col(k == 0 ? hi : 1 - hi).normalized();
            v *= std::conj(v(1)) / std::abs(v(1));
            worst_vec = std::max({worst_vec, std::abs(v(0) - got[k][0]), std::abs(v(1) - got[k][1])});
            worst_lambda = std::max(worst_lambda, std::abs(ref_l[k] - got_l[k]) / (1.0 + std::abs(ref_l[k])));
        }
        worst_vieta = std::max({worst_vieta, std::abs(dp.lambda1 + dp.lambda2 - dp.p) / std::abs(dp.p),
                                std::abs(dp.lambda1 * dp.lambda2 - dp.q) / std::abs(dp.q)});
    }
    o.check(worst_lambda <= 1e-10, "lambda deviation " + num(worst_lambda));
    o.check(worst_vec <= 1e-10, "vector deviation " + num(worst_vec));
    o.check(worst_vieta <= 1e-12, "Vieta residual " + num(worst_vieta));
    if (o.passed)
        o.detail = "10000 problems: lambda " + num(worst_lambda) + ", vectors " + num(worst_vec) + ", Vieta " +
                   num(worst_vieta);
    return o;
}

std::vector<std::vector<double>> read_csv_numbers(const fs::path& p)
{
    std::istringstream in(io::read_file(p));
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        for (std::string cell; std::getline(cells, cell, ',');)
            row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

Outcome fig2_reproduction()
{
    Outcome o;
    const auto rows = bracket_scan(fig2_problem(0.0), linspace(0.0, 1.0, 101));
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : rows) {
        lo = std::min(lo, r.bracket_abs);
        hi = std::max(hi, r.bracket_abs);
    }
    const double variation = (hi - lo) / hi;
    o.check(rows.size() == 101, "row count " + std::to_string(rows.size()));
    o.check(variation < 0.1, "relative variation " + num(variation));

    const fs::path baseline = fs::path(QSPT_SOURCE_DIR) / "tests" / "baseline" / "bracket_scan.csv";
    double worst = 0.0;
    try {
        const auto ref = read_csv_numbers(baseline);
        o.check(ref.size() == rows.size(), "baseline row count");
        for (std::size_t i = 0; i < std::min(ref.size(), rows.size()); ++i) {
            const auto& r = rows[i];
            const double got[] = {r.eta, r.bracket_abs, r.bracket.real(), r.bracket.imag(), r.lambda_gap, r.p, r.q};
            for (std::size_t k = 0; k < 7 && k < ref[i].size(); ++k)
                worst = std::max(worst, std::abs(got[k] - ref[i][k]) / (std::abs(ref[i][k]) + 1e-15));
        }
        o.check(worst <= 1e-12, "baseline deviation " + num(worst));
    } catch (const Error& e) {
        o.check(false, e.what());
    }
    if (o.passed)
        o.detail = "|bracket| variation " + num(variation) + " over eta in [0, 1]; baseline deviation " + num(worst);
    return o;
}

Outcome analytic_numeric()
{
    Outcome o;
    const MediumScenario ms = fig3_scenario();
    const RunConfig c;
    const auto grid = PropagationGrid::uniform(pi, c.grid.zeta_points, 0.0, 4.0 * pi, c.grid.tau_points);
    const auto analytic = propagate_analytic(ms, grid);
    const auto linear = propagate_numeric(ms, grid, PropagationMode::numeric_linear);
    const auto d = field_deviation("analytic_vs_numeric_linear", analytic, linear);
    o.check(d.max_relative <= 1e-3, "max relative deviation " + num(d.max_relative));
    if (o.passed)
        o.detail = "max relative deviation " + num(d.max_relative) + " on " + std::to_string(grid.zeta.size()) + "x" +
                   std::to_string(grid.tau.size());
    return o;
}

Outcome repetition_rate()
{
    Outcome o;
    MediumScenario ms = fig3_scenario();
    const auto tr = relative_trace(ms, ms.length_scaled);
    const auto m = pulse_metrics(tr.tau, tr.values, ms.species.delta0);
    const double expected = 2.0 * pi / std::abs(tr.gap);
    const double period_error = std::abs(m.repetition_period_scaled / expected - 1.0);
    const double rate_error = std::abs(m.repetition_rate_hz / 1771.6e6 - 1.0);
    o.check(period_error < 5e-3, "period error " + num(period_error));
    o.check(rate_error < 5e-3, "rate " + num(m.repetition_rate_hz) + " Hz");

    double lo = INFINITY, hi = 0.0;
    for (double eta : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1})
        for (double det : {6.0, 8.0, 10.0, 14.0, 20.0}) {
            MediumScenario local = ms;
            local.input_eta = eta;
            local.carrier_omega = ms.species.omega1 + det * ms.species.delta0;
            const auto t = relative_trace(local, local.length_scaled);
            const double period = pulse_metrics(t.tau, t.values, local.species.delta0).repetition_period_scaled;
            lo = std::min(lo, period);
            hi = std::max(hi, period);
        }
    const double drift = (hi - lo) / lo;
    o.check(drift < 5e-3, "period drift " + num(drift));
    if (o.passed) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "period %.6f (2pi/|gap| %.6f), rate %.4f MHz, drift %s", m.repetition_period_scaled,
                      expected, m.repetition_rate_hz / 1e6, num(drift).c_str());
        o.detail = buf;
    }
    return o;
}

Outcome pulse_duration()
{
    Outcome o;
    std::string detail;
    for (auto conv : {FrequencyConvention::cyclic, FrequencyConvention::angular}) {
        const MediumScenario ms = fig3_scenario(conv);
        const auto tr = relative_trace(ms, ms.length_scaled);
        const auto m = pulse_metrics(tr.tau, tr.values, ms.species.delta0);
        const double ps = m.fwhm_seconds * 1e12;
        o.check(ps >= 10.0 && ps <= 1000.0, std::string(to_string(conv)) + " FWHM " + num(ps) + " ps");
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%s %.1f ps", detail.empty() ? "" : ", ", std::string(to_string(conv)).c_str(),
                      ps);
        detail += buf;
    }
    if (o.passed)
        o.detail = "FWHM " + detail;
    return o;
}

Outcome reality_and_boundary()
{
    Outcome o;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const MediumScenario base = fig3_scenario();
    double worst_imag = 0.0;
    for (int i = 0; i < 1000; ++i) {
        MediumScenario ms = base;
        const double t1 = 2.0 * pi * u(rng), t2 = 2.0 * pi * u(rng);
        ms.alpha = std::cos(t1);
        ms.beta = complex(0.0, std::sin(t1));
        ms.alpha_bar = complex(0.0, std::cos(t2));
        ms.beta_bar = std::sin(t2);
        ms.density = std::pow(10.0, 10.0 + 3.0 * u(rng));
        ms.temperature = std::pow(10.0, -6.0 + 8.0 * u(rng));
        ms.input_eta = 1e-3 + 0.2 * u(rng);
        ms.carrier_omega = ms.species.omega1 + (6.0 + 30.0 * u(rng)) * ms.species.delta0;
        const DressedPair dp = ms.front_pair();
        const complex e = radiation_prepared_exponent(ms, dp, 4.0 * u(rng), 10.0 * u(rng));
        worst_imag = std::max(worst_imag, std::abs(e.imag()));
        if (relative_intensity_radiation_prepared(ms, dp, 0.0, 10.0 * u(rng)) != 1.0)
            o.check(false, "RI(z = 0) != 1");
    }
    o.check(worst_imag <= 1e-12, "imaginary part " + num(worst_imag));

    const DressedPair dp = base.front_pair();
    const double front = std::norm(base.input_eta);
    double worst_linear = 0.0;
    for (double tau : {0.1, 1.7, 4.0})
        for (double factor : {0.1, 2.0, 7.5}) {
            MediumScenario ms = base;
            ms.density *= factor;
            const double ref = factor * std::log(analytic_intensity(base, dp, pi, tau) / front);
            const double got = std::log(analytic_intensity(ms, dp, pi, tau) / front);
            worst_linear = std::max(worst_linear, std::abs(got - ref) / std::abs(ref));
        }
    o.check(worst_linear <= 1e-12, "ln RI nonlinearity in density " + num(worst_linear));
    if (o.passed)
        o.detail = "max |Im exponent| " + num(worst_imag) + ", RI(z = 0) = 1 exactly, ln RI vs density " +
                   num(worst_linear);
    return o;
}

Outcome angular_momentum()
{
    Outcome o;
    std::size_t entries = 0;
    for (int F_from = 0; F_from <= 4; ++F_from)
        for (int F_to = std::max(0, F_from - 1); F_to <= F_from + 1; ++F_to)
            for (int M = -F_from; M <= F_from; ++M) {
                if (std::abs(M - 1) > F_to || (F_to == 0 && F_from == 0))
                    continue;
                // integer brute force of the tabulated prefactors
                long long num = 0, den = 1;
                if (F_to == F_from) {
                    num = static_cast<long long>(F_from - M + 1) * (F_from + M);
                    den = static_cast<long long>(F_from) * (F_from + 1) * (2 * F_from + 1);
                } else if (F_to == F_from + 1) {
                    num = static_cast<long long>(F_to - M + 1) * (F_to - M);
                    den = static_cast<long long>(F_to) * (2 * F_to - 1) * (2 * F_to + 1);
                } else {
                    num = static_cast<long long>(F_from + M + 1) * (F_from + M);
                    den = static_cast<long long>(F_from) * (2 * F_from - 1) * (2 * F_from + 1);
                }
                const double expected = std::sqrt(static_cast<double>(num) / static_cast<double>(den));
                const double got = dipole_minus(F_to, M - 1, F_from, M, 1.0);
                if (std::abs(got - expected) > 1e-15)
                    o.check(false, "table mismatch at F " + std::to_string(F_to) + " <- " + std::to_string(F_from));
                if (dipole_plus(F_from, M, F_to, M - 1, 1.0) != dipole_minus(F_to, M - 1, F_from, M, 1.0))
                    o.check(false, "conjugation identity");
                ++entries;
            }
    double worst = 0.0;
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> f(1e-3, 1.0), w(1e13, 1e16);
    for (int i = 0; i < 1000; ++i) {
        const double fi = f(rng), wi = w(rng);
        const double back =
            oscillator_strength_from_reduced_dipole(reduced_dipole_from_oscillator_strength(fi, wi, i % 5), wi, i % 5);
        worst = std::max(worst, std::abs(back / fi - 1.0));
    }
    o.check(worst <= 1e-12, "oscillator-strength round trip " + num(worst));
    if (o.passed)
        o.detail = std::to_string(entries) + " table entries, round trip " + num(worst);
    return o;
}

Outcome determinism()
{
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "qspt_acceptance_determinism";
    fs::remove_all(root);
    for (const char* sub : {"a", "b"}) {
        const std::string cmd = std::string("\"" QSPT_BINARY "\" preset fig3 --out \"") + (root / sub).string() +
                                "\" > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            o.check(false, std::string("preset fig3 run ") + sub + " failed");
            return o;
        }
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        if (entry.path().extension() != ".csv")
            continue;
        ++files;
        const fs::path other = root / "b" / entry.path().filename();
        if (!fs::exists(other) || io::read_file(entry.path()) != io::read_file(other))
            o.check(false, entry.path().filename().string() + " differs");
    }
    o.check(files >= 3, "expected the intensity, metrics and dressed CSVs");
    fs::remove_all(root);
    if (o.passed)
        o.detail = std::to_string(files) + " CSV files byte-identical";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"zero-field spectrum", zero_field_spectrum},
        {"eigen-oracle equivalence", eigen_oracle},
        {"bracket scan flatness", fig2_reproduction},
        {"analytic-numeric equivalence", analytic_numeric},
        {"repetition-rate law", repetition_rate},
        {"pulse-duration order", pulse_duration},
        {"reality and boundary invariants", reality_and_boundary},
        {"angular-momentum suite", angular_momentum},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu. %s (%.0f ms): %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), ms,
                    o.detail.c_str());
        failures += o.passed ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
