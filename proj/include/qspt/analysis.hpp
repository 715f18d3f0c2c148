#ifndef QSPT_ANALYSIS_HPP
#define QSPT_ANALYSIS_HPP

// Pulse-train observables and parameter scans.

#include <qspt/dressed.hpp>
#include <qspt/error.hpp>
#include <qspt/propagation.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace qspt {

struct PulseMetrics {
    double repetition_period_scaled = 0.0;
    double repetition_rate_hz = 0.0;
    double fwhm_scaled = 0.0;
    double fwhm_seconds = 0.0;
    double modulation_depth = 0.0;
    double peak_gain = 0.0;
    std::size_t pulses = 0; ///< complete pulses used for the averages
};

/// Minimum (max - min) / max below which a trace counts as unmodulated.
inline constexpr double no_modulation_depth = 1e-6;
inline constexpr std::size_t min_samples_per_period = 64;

namespace detail {

/// Abscissa where the linear interpolant between samples i and i+1 crosses level.
inline double crossing(std::span<const double> x, std::span<const double> y, std::size_t i, double level)
{
    const double dy = y[i + 1] - y[i];
    if (dy == 0.0)
        return x[i];
    return x[i] + (level - y[i]) * (x[i + 1] - x[i]) / dy;
}

/// Vertex of the parabola through samples i-1, i, i+1; falls back to x[i]
/// when the three points are collinear.
inline double refine_peak(std::span<const double> x, std::span<const double> y, std::size_t i)
{
    if (i == 0 || i + 1 >= x.size())
        return x[i];
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curvature = (d1 - d0) / (x2 - x0);
    if (curvature >= 0.0)
        return x1;
    const double vertex = 0.5 * (x0 + x1) - d0 / (2.0 * curvature);
    return std::clamp(vertex, x0, x2);
}

} // namespace detail

/// Metrics of a sampled relative-intensity trace at fixed depth. Pulses are
/// the runs of samples above the half level (min + max) / 2; runs touching
/// either end of the trace are incomplete and ignored. The period is the mean
/// spacing of consecutive peaks, each peak taken at the leftmost maximum of
/// its run and refined by a parabola through its neighbours. Times convert
/// to seconds through t = tau / delta0.
inline PulseMetrics pulse_metrics(std::span<const double> tau, std::span<const double> trace, double delta0)
{
    if (tau.size() != trace.size())
        throw Error(ErrorCode::GridError, "trace and abscissa sizes differ");
    if (tau.size() < 2 * min_samples_per_period)
        throw Error(ErrorCode::InsufficientSamples, "trace too short");
    for (std::size_t i = 1; i < tau.size(); ++i)
        if (!(tau[i] > tau[i - 1]))
            throw Error(ErrorCode::GridError, "trace abscissae must be strictly increasing");

    const auto [lo_it, hi_it] = std::minmax_element(trace.begin(), trace.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    PulseMetrics m;
    m.modulation_depth = hi > 0.0 ? (hi - lo) / hi : 0.0;
    m.peak_gain = hi;
    if (m.modulation_depth < no_modulation_depth)
        throw Error(ErrorCode::NoModulation, "modulation depth below threshold");

    const double half = 0.5 * (lo + hi);
    const std::size_t n = trace.size();
    std::vector<double> peaks;
    std::vector<double> widths;
    std::size_t i = 0;
    while (i < n) {
        if (trace[i] < half) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < n && trace[i] >= half)
            ++i;
        const std::size_t stop = i; // one past the run
        if (start == 0 || stop == n)
            continue;
        std::size_t best = start;
        for (std::size_t k = start + 1; k < stop; ++k)
            if (trace[k] > trace[best])
                best = k;
        peaks.push_back(detail::refine_peak(tau, trace, best));
        const double left = detail::crossing(tau, trace, start - 1, half);
        const double right = detail::crossing(tau, trace, stop - 1, half);
        widths.push_back(right - left);
    }
    if (peaks.size() < 2)
        throw Error(ErrorCode::InsufficientSamples, "fewer than two complete pulses in the trace");

    double spacing = 0.0;
    for (std::size_t k = 1; k < peaks.size(); ++k)
        spacing += peaks[k] - peaks[k - 1];
    m.repetition_period_scaled = spacing / static_cast<double>(peaks.size() - 1);
    double width = 0.0;
    for (double w : widths)
        width += w;
    m.fwhm_scaled = width / static_cast<double>(widths.size());
    m.pulses = peaks.size();

    const double mean_step = (tau.back() - tau.front()) / static_cast<double>(n - 1);
    if (tau.back() - tau.front() < 2.0 * m.repetition_period_scaled)
        throw Error(ErrorCode::InsufficientSamples, "trace covers fewer than two periods");
    if (m.repetition_period_scaled / mean_step < static_cast<double>(min_samples_per_period))
        throw Error(ErrorCode::InsufficientSamples, "fewer than 64 samples per period");

    m.repetition_rate_hz = delta0 / m.repetition_period_scaled;
    m.fwhm_seconds = m.fwhm_scaled / delta0;
    return m;
}

// ---------------------------------------------------------------------------
// Scans

struct BracketRow {
    double eta = 0.0;
    double bracket_abs = 0.0;
    complex bracket;
    double lambda_gap = 0.0; ///< lambda1 - lambda2
    double p = 1.0;
    double q = 0.0;
};

/// One dressed pair per field strength, detunings and arm ratio taken from
/// the template.
inline std::vector<BracketRow> bracket_scan(const ScaledProblem& sp_template, std::span<const double> eta_values)
{
    std::vector<BracketRow> rows;
    rows.reserve(eta_values.size());
    for (double eta : eta_values) {
        if (!(eta >= 0.0))
            throw Error(ErrorCode::NonPositiveInput, "eta must be >= 0");
        const DressedPair dp = dress(sp_template.with_eta(eta));
        rows.push_back({eta, std::abs(dp.bracket), dp.bracket, dp.lambda1 - dp.lambda2, dp.p, dp.q});
    }
    return rows;
}

/// Uniformly spaced values lo, ..., hi (inclusive).
inline std::vector<double> linspace(double lo, double hi, std::size_t count)
{
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
}

struct TraceOptions {
    double periods = 4.0;
    std::size_t samples_per_period = 256;
    double tau_start = 0.0;
};

struct RelativeTrace {
    std::vector<double> tau;
    std::vector<double> values;
    double gap = -1.0;
};

/// Closed-form relative intensity at depth zeta over whole periods of the
/// input-front modulation.
inline RelativeTrace relative_trace(const MediumScenario& ms, double zeta, const TraceOptions& opt = {})
{
    const DressedPair dp = ms.front_pair();
    const complex g = gain_coefficient(ms, dp);
    const double period = 2.0 * std::numbers::pi / std::abs(dp.gap());
    const auto count = static_cast<std::size_t>(std::ceil(opt.periods * static_cast<double>(opt.samples_per_period))) + 1;
    RelativeTrace tr;
    tr.gap = dp.gap();
    tr.tau = linspace(opt.tau_start, opt.tau_start + opt.periods * period, count);
    tr.values.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        tr.values[i] = std::exp(log_gain_exponent(g, dp.gap(), zeta, tr.tau[i]));
    return tr;
}

struct DetuningRow {
    double carrier_omega = 0.0;
    double det1 = 0.0;
    double det2 = 0.0;
    double modulation_depth = 0.0;
    std::optional<PulseMetrics> metrics; ///< empty when the trace shows no modulation
};

/// Pulse metrics at the medium exit for each carrier frequency (rad/s).
inline std::vector<DetuningRow> detuning_scan(const MediumScenario& ms, std::span<const double> carrier_values,
                                              const TraceOptions& opt = {})
{
    std::vector<DetuningRow> rows;
    rows.reserve(carrier_values.size());
    for (double carrier : carrier_values) {
        MediumScenario local = ms;
        local.carrier_omega = carrier;
        const ScaledProblem sp = local.scaled();
        DetuningRow row{carrier, sp.det1, sp.det2, 0.0, std::nullopt};
        const RelativeTrace tr = relative_trace(local, local.length_scaled, opt);
        try {
            row.metrics = pulse_metrics(tr.tau, tr.values, local.species.delta0);
            row.modulation_depth = row.metrics->modulation_depth;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoModulation)
                throw;
            const auto [lo, hi] = std::minmax_element(tr.values.begin(), tr.values.end());
            row.modulation_depth = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace qspt

#endif
