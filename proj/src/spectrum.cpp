#include "pps/spectrum.hpp"

#include "pps/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pps {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_nonzero(Complex omega) {
    if (omega == Complex{0.0, 0.0}) throw SingularInput("omega = 0 is a pole of theta");
}

}  // namespace

void validate(const StateSpec& spec) {
    if (spec.n < 1) throw InvalidInput("principal quantum number must satisfy n >= 1");
    if (!std::isfinite(spec.alpha_eff) || spec.alpha_eff < 0.0 || spec.alpha_eff >= 1.0) {
        throw InvalidInput("effective coupling must satisfy 0 <= alpha < 1");
    }
}

ComplexOmega omega_exact(const StateSpec& spec) {
    validate(spec);
    if (spec.alpha_eff == 0.0) return ComplexOmega{1.0, 0.0};

    // The radicand equals 1 - q with q = a^2 / (4 n (n - i a)); forming
    // 1 - Omega = q / (1 + sqrt(1 - q)) keeps the tiny deficit accurate.
    const double a = spec.alpha_eff;
    const double n = spec.n;
    const Complex q = (a * a) / (4.0 * n * (n - kI * a));
    const Complex root = std::sqrt(1.0 - q);
    return ComplexOmega{1.0 - q / (1.0 + root)};
}

ExpansionTerms expansion_terms(const StateSpec& spec) {
    validate(spec);
    const double a = spec.alpha_eff;
    const double n = spec.n;
    return {(a * a / 8.0) / (n * n), (a * a * a / 8.0) / (n * n * n)};
}

ComplexOmega omega_approx(const StateSpec& spec) {
    const ExpansionTerms t = expansion_terms(spec);
    return ComplexOmega{1.0 - t.binding, -t.decay};
}

double decay_time_approx(const StateSpec& spec, const PhysicalConstants& consts) {
    validate(spec);
    if (spec.alpha_eff == 0.0) throw InvalidInput("decay time diverges at alpha = 0");
    const double a = spec.alpha_eff;
    const double ground = 4.0 * consts.hbar_ev_s / (consts.electron_rest_energy_ev * a * a * a);
    const double n = spec.n;
    return (n * n * n) * ground;
}

Complex heun_theta(Complex omega, double alpha) {
    require_nonzero(omega);
    return alpha * std::sqrt((1.0 - omega) * (1.0 + omega)) / omega;
}

Complex quantization_residual(ComplexOmega omega, const StateSpec& spec) {
    validate(spec);
    require_nonzero(omega.value);
    const double a = spec.alpha_eff;
    const Complex sigma = -0.5 * a * a;
    const Complex eps = -kI * a;
    const Complex ups = -2.0;
    const Complex theta = heun_theta(omega.value, a);
    return sigma + (static_cast<double>(spec.n) + 1.0 + 0.5 * (eps + ups)) * theta;
}

Complex quantization_residual_derivative(ComplexOmega omega, const StateSpec& spec) {
    validate(spec);
    require_nonzero(omega.value);
    const double a = spec.alpha_eff;
    const Complex z = omega.value;
    const Complex root = std::sqrt((1.0 - z) * (1.0 + z));
    if (root == Complex{0.0, 0.0}) throw SingularInput("dF/dOmega diverges at Omega^2 = 1");
    // d/dz [a sqrt(1 - z^2) / z] = -a / (z^2 sqrt(1 - z^2))
    const Complex dtheta = -a / (z * z * root);
    return (static_cast<double>(spec.n) - 0.5 * kI * a) * dtheta;
}

ComplexOmega solve_quantization(const StateSpec& spec, std::optional<ComplexOmega> omega0) {
    validate(spec);
    constexpr int kMaxIterations = 50;
    constexpr double kResidualTol = 1e-13;
    constexpr double kStepTol = 1e-15;
    constexpr double kAcceptTol = 1e-9;

    Complex z = omega0 ? omega0->value : omega_approx(spec).value;
    std::vector<Complex> trace{z};

    for (int it = 0; it < kMaxIterations; ++it) {
        const Complex f = quantization_residual(ComplexOmega{z}, spec);
        if (std::abs(f) < kResidualTol) break;
        const Complex df = quantization_residual_derivative(ComplexOmega{z}, spec);
        const Complex step = f / df;
        z -= step;
        trace.push_back(z);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == Complex{0.0, 0.0}) {
            throw ConvergenceFailure("Newton iterate left the finite plane", trace);
        }
        if (std::abs(step) < kStepTol) break;
        if (it + 1 == kMaxIterations) {
            throw ConvergenceFailure("Newton iteration did not converge in 50 steps", trace);
        }
    }

    if (z.real() <= 0.0) throw ConvergenceFailure("Newton root is off the principal branch", trace);
    const double final_residual = std::abs(quantization_residual(ComplexOmega{z}, spec));
    if (final_residual >= kAcceptTol) {
        throw ConvergenceFailure("Newton stopped with |F| = " + std::to_string(final_residual), trace);
    }
    return ComplexOmega{z};
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::approx: return "approx";
        case Method::newton: return "newton";
        case Method::truncation: return "truncation";
        case Method::shooting: return "shooting";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view s) {
    for (Method m : {Method::exact, Method::approx, Method::newton, Method::truncation,
                     Method::shooting}) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

}  // namespace pps
