#pragma once

#include "pps/constants.hpp"

#include <array>
#include <cstddef>
#include <functional>

namespace pps {

using RadialState = std::array<Complex, 2>;

/// dy/dr for a complex-valued system evaluated at a complex point r.
using ComplexRhs = std::function<RadialState(Complex r, const RadialState& y)>;

struct SegmentResult {
    RadialState end;
    double error_estimate = 0.0;  ///< sum of accepted local error estimates (absolute)
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

struct StepControl {
    double rtol = 1e-10;
    double atol = 1e-300;
    double min_step_fraction = 1e-13;  ///< of the segment length
    std::size_t max_steps = 2'000'000;
};

/// Dormand-Prince 5(4) along the straight segment from a to b in the complex
/// plane, with the parameterisation r(t) = a + t (b - a), t in [0, 1].
/// Throws ContourViolation on step underflow or when the step budget runs out.
SegmentResult integrate_segment(const ComplexRhs& rhs, Complex a, Complex b, RadialState y0,
                                const StepControl& control);

}  // namespace pps
