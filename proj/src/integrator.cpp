#include "pps/integrator.hpp"

#include "pps/error.hpp"

#include <algorithm>
#include <cmath>

namespace pps {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

RadialState axpy(const RadialState& y, double h,
                 std::initializer_list<std::pair<double, const RadialState*>> terms) {
    RadialState out = y;
    for (const auto& [coef, k] : terms) {
        if (coef == 0.0) continue;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * coef * (*k)[i];
    }
    return out;
}

}  // namespace

SegmentResult integrate_segment(const ComplexRhs& rhs, Complex a, Complex b, RadialState y0,
                                const StepControl& control) {
    const Complex span = b - a;
    auto f = [&](double t, const RadialState& y) {
        RadialState d = rhs(a + t * span, y);
        for (auto& v : d) v *= span;
        return d;
    };

    SegmentResult result;
    result.end = y0;
    if (span == Complex{0.0, 0.0}) return result;

    RadialState y = y0;
    double t = 0.0;
    double h = 1e-3;
    RadialState k1 = f(t, y);

    while (t < 1.0) {
        if (result.steps + result.rejected >= control.max_steps) {
            throw ContourViolation("step budget exhausted along contour segment");
        }
        const bool last = t + h >= 1.0;
        if (last) h = 1.0 - t;
        if (!last && h < control.min_step_fraction) {
            throw ContourViolation("step size underflow along contour segment");
        }

        const RadialState k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
        const RadialState k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const RadialState k4 = f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const RadialState k5 =
            f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const RadialState k6 = f(
            t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const RadialState y_new =
            axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const RadialState k7 = f(t + h, y_new);

        double err = 0.0;
        double abs_err = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const Complex local = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
            const double scale =
                control.atol + control.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(local) / scale);
            abs_err = std::max(abs_err, std::abs(local));
        }
        if (!std::isfinite(err)) {
            h *= 0.2;
            ++result.rejected;
            continue;
        }

        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err <= 1.0) {
            t = last ? 1.0 : t + h;
            y = y_new;
            k1 = k7;
            result.error_estimate += abs_err;
            ++result.steps;
            h *= std::min(factor, 5.0);
        } else {
            h *= std::min(factor, 1.0);
            ++result.rejected;
        }
    }
    result.end = y;
    return result;
}

}  // namespace pps
