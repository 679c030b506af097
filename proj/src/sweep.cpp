#include "pps/sweep.hpp"

#include "pps/error.hpp"
#include "pps/radial.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace pps {

namespace {

// Runs fn(i) for i in [0, count) on a small worker pool. Results land at their
// index; the first failure by index is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn fn) {
    std::vector<std::optional<T>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, count);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

void check_grid(std::span<const int> n_values, std::span<const double> alphas) {
    if (n_values.empty()) throw InvalidInput("n range is empty");
    if (alphas.empty()) throw InvalidInput("coupling list is empty");
    for (double a : alphas) {
        if (!(a >= 0.0 && a < 1.0)) throw InvalidInput("each coupling must lie in [0, 1)");
    }
    for (int n : n_values) validate(StateSpec{n, alphas.front()});
}

}  // namespace

SpectrumRow make_row(const StateSpec& spec, ComplexOmega omega, Method method,
                     const PhysicalConstants& consts) {
    const Observables obs = omega_to_observables(omega, consts);
    SpectrumRow row;
    row.n = spec.n;
    row.alpha_eff = spec.alpha_eff;
    row.re_omega = omega.re();
    row.im_omega = omega.im();
    row.annihilation_energy_ev = obs.annihilation_energy_ev;
    row.binding_energy_ev = obs.binding_energy_ev;
    row.decay_time_s = obs.proper_decay_time_s;
    row.method = method;
    return row;
}

ComplexOmega solve_state(const StateSpec& spec, Method method, const SolveOptions& options) {
    switch (method) {
        case Method::exact: return omega_exact(spec);
        case Method::approx: return omega_approx(spec);
        case Method::newton: return solve_quantization(spec);
        case Method::truncation: {
            const TruncationResult t = solve_by_truncation(spec, std::nullopt, options.sign);
            if (!t.report.converged) {
                throw ConvergenceFailure("truncation secant stalled without a root",
                                         {t.omega.value});
            }
            return t.omega;
        }
        case Method::shooting: {
            ShootingOptions so;
            so.tol = options.tol;
            so.sign = options.sign;
            return shooting_solve(spec, std::nullopt, so).omega;
        }
    }
    throw InvalidInput("unknown method");
}

std::vector<SpectrumRow> sweep(std::span<const int> n_values, std::span<const double> alphas,
                               Method method, const PhysicalConstants& consts,
                               const SolveOptions& options) {
    check_grid(n_values, alphas);
    const std::size_t count = n_values.size() * alphas.size();
    return parallel_map<SpectrumRow>(count, [&](std::size_t i) {
        const StateSpec spec{n_values[i % n_values.size()], alphas[i / n_values.size()]};
        return make_row(spec, solve_state(spec, method, options), method, consts);
    });
}

VerifyRow verify_state(const StateSpec& spec, const SolveOptions& options) {
    validate(spec);
    VerifyRow row;
    row.n = spec.n;
    row.alpha_eff = spec.alpha_eff;
    row.exact = omega_exact(spec);
    row.residual_abs = std::abs(quantization_residual(row.exact, spec));
    row.termination_defect = termination_defect_extended(
        transform_ode(row.exact, spec.alpha_eff, options.sign), spec.n);

    try {
        const ComplexOmega z = solve_quantization(spec);
        row.newton_converged = true;
        row.newton_deviation = std::abs(z.value - row.exact.value);
    } catch (const Error& e) {
        row.failures.push_back(std::string("newton: ") + e.what());
    }

    try {
        const TruncationResult t = solve_by_truncation(spec, std::nullopt, options.sign);
        row.truncation_converged = t.report.converged;
        row.truncation_omega = t.omega;
        row.truncation_deviation = t.report.distance_to_exact;
        row.truncation_next2_defect = t.report.next2_defect;
        if (!t.report.converged) row.failures.push_back("truncation: secant stalled");
    } catch (const Error& e) {
        row.failures.push_back(std::string("truncation: ") + e.what());
    }

    try {
        ShootingOptions so;
        so.tol = options.tol;
        so.sign = options.sign;
        const ShootingResult s = shooting_solve(spec, std::nullopt, so);
        row.shooting_converged = s.report.converged;
        row.shooting_omega = s.omega;
        row.shooting_deviation = s.report.deviation_from_exact;
        row.shooting_mismatch = s.report.mismatch;
    } catch (const Error& e) {
        row.failures.push_back(std::string("shooting: ") + e.what());
    }
    return row;
}

std::vector<VerifyRow> verify(std::span<const int> n_values, std::span<const double> alphas,
                              const SolveOptions& options) {
    check_grid(n_values, alphas);
    const std::size_t count = n_values.size() * alphas.size();
    return parallel_map<VerifyRow>(count, [&](std::size_t i) {
        return verify_state({n_values[i % n_values.size()], alphas[i / n_values.size()]}, options);
    });
}

}  // namespace pps
