#pragma once

#include "pps/constants.hpp"

#include <optional>
#include <string_view>

namespace pps {

/// One bound state: principal quantum number and effective coupling.
/// alpha_eff = 0 is accepted as the free-pair limit.
struct StateSpec {
    int n = 1;
    double alpha_eff = 0.0;
};

/// Throws InvalidInput unless n >= 1 and 0 <= alpha_eff < 1.
void validate(const StateSpec& spec);

/// Closed-form spectrum, principal square root:
///   Omega_n = sqrt[(n^4 + 3 a^2 n^2 / 4 - i a^3 n / 4) / (n^4 + a^2 n^2)].
ComplexOmega omega_exact(const StateSpec& spec);

/// The two small terms of the power expansion of omega_exact:
/// binding = a^2 / (8 n^2) and decay = a^3 / (8 n^3), both positive.
struct ExpansionTerms {
    double binding = 0.0;
    double decay = 0.0;
};

ExpansionTerms expansion_terms(const StateSpec& spec);

/// Omega ~ 1 - a^2/(8 n^2) - i a^3/(8 n^3).
ComplexOmega omega_approx(const StateSpec& spec);

/// tau_n ~ 4 n^3 hbar / (m_e c^2 a^3), in seconds.
/// Throws InvalidInput for alpha_eff = 0 (no decay).
double decay_time_approx(const StateSpec& spec, const PhysicalConstants& consts);

/// theta = a sqrt(1 - Omega^2) / Omega on the principal branch.
/// Throws SingularInput for Omega = 0.
Complex heun_theta(Complex omega, double alpha);

/// Quantization condition F(Omega) = sigma + (n + 1 + (eps + ups)/2) theta with
/// sigma = -a^2/2, eps = -i a, ups = -2. Zero on the closed-form spectrum.
Complex quantization_residual(ComplexOmega omega, const StateSpec& spec);

/// dF/dOmega, analytic.
Complex quantization_residual_derivative(ComplexOmega omega, const StateSpec& spec);

/// Complex Newton iteration on F, seeded with omega_approx by default.
/// Converged when |F| < 1e-13 or the step drops below 1e-15. Throws
/// ConvergenceFailure (with the iterate trace) after 50 iterations, or if the
/// only point found has |F| >= 1e-9.
ComplexOmega solve_quantization(const StateSpec& spec, std::optional<ComplexOmega> omega0 = {});

enum class Method { exact, approx, newton, truncation, shooting };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

}  // namespace pps
