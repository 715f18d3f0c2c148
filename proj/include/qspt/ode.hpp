#ifndef QSPT_ODE_HPP
#define QSPT_ODE_HPP

// Dormand-Prince 5(4) embedded pair with adaptive step control for scalar
// ODEs y' = f(x, y).

#include <qspt/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace qspt::ode {

struct Options {
    double rtol = 1e-9;
    double atol = 1e-14;
    /// First trial step as a fraction of the integration span.
    double initial_step_fraction = 1e-3;
    std::size_t max_steps = 1'000'000;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

namespace dp45 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
// b - b*, the 5th-minus-4th order weights
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
} // namespace dp45

/// Integrates from xs.front() with y(xs.front()) = y0 and returns y at every
/// abscissa in xs (strictly increasing). The step size is carried across
/// output points; steps are clipped to land on each output exactly.
template <class F>
std::vector<double> integrate(F&& f, double y0, std::span<const double> xs, const Options& opt = {},
                              Stats* stats = nullptr)
{
    std::vector<double> out;
    if (xs.empty())
        return out;
    out.reserve(xs.size());
    out.push_back(y0);
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw Error(ErrorCode::GridError, "integration abscissae must be strictly increasing");
    if (xs.size() == 1)
        return out;

    using namespace dp45;
    Stats local;
    double x = xs.front();
    double y = y0;
    double h_prop = (xs.back() - xs.front()) * opt.initial_step_fraction;
    double k1 = f(x, y);
    ++local.evaluations;
    std::size_t steps = 0;

    for (std::size_t target = 1; target < xs.size(); ++target) {
        const double x_end = xs[target];
        while (x < x_end) {
            if (++steps > opt.max_steps)
                throw Error(ErrorCode::IntegrationFailure, "step limit exceeded");
            const bool clipped = x + h_prop >= x_end;
            const double h = clipped ? x_end - x : h_prop;
            const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
            if (h_prop < h_min)
                throw Error(ErrorCode::IntegrationFailure,
                            "step size underflow at x = " + std::to_string(x));

            const double k2 = f(x + c2 * h, y + h * a21 * k1);
            const double k3 = f(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
            const double k4 = f(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const double k5 = f(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const double k6 = f(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const double y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const double k7 = f(x + h, y_new);
            local.evaluations += 6;

            const double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double scale = opt.atol + opt.rtol * std::max(std::abs(y), std::abs(y_new));
            const double ratio = std::abs(err) / scale;

            if (ratio <= 1.0 && std::isfinite(y_new)) {
                x = clipped ? x_end : x + h;
                y = y_new;
                k1 = k7; // FSAL
                ++local.accepted;
                const double grow = ratio == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(ratio, -0.2));
                // a step shortened to hit an output point says nothing against h_prop
                h_prop = clipped ? std::max(h_prop, h * grow) : h * grow;
            } else {
                ++local.rejected;
                const double shrink = std::isfinite(ratio) ? std::max(0.2, 0.9 * std::pow(ratio, -0.2)) : 0.2;
                h_prop = h * shrink;
            }
        }
        out.push_back(y);
    }
    if (stats)
        *stats = local;
    return out;
}

} // namespace qspt::ode

#endif
