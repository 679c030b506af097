#pragma once

#include "pps/constants.hpp"
#include "pps/frobenius.hpp"
#include "pps/spectrum.hpp"

#include <optional>
#include <span>
#include <vector>

namespace pps {

struct SpectrumRow {
    int n = 1;
    double alpha_eff = 0.0;
    double re_omega = 1.0;
    double im_omega = 0.0;
    double annihilation_energy_ev = 0.0;
    double binding_energy_ev = 0.0;
    std::optional<double> decay_time_s;  ///< empty = infinite lifetime
    Method method = Method::exact;
};

SpectrumRow make_row(const StateSpec& spec, ComplexOmega omega, Method method,
                     const PhysicalConstants& consts);

struct SolveOptions {
    double tol = 1e-10;  ///< shooting integrator tolerance
    PotentialSign sign = PotentialSign::attractive;
};

/// Omega for one state by the chosen method. Truncation that stalls without
/// converging is reported as ConvergenceFailure.
ComplexOmega solve_state(const StateSpec& spec, Method method, const SolveOptions& options = {});

/// One row per (alpha, n), alpha-major in the given order. Grid points are
/// evaluated concurrently; the output order does not depend on scheduling.
/// Throws InvalidInput for empty ranges or a coupling outside [0, 1).
std::vector<SpectrumRow> sweep(std::span<const int> n_values, std::span<const double> alphas,
                               Method method, const PhysicalConstants& consts,
                               const SolveOptions& options = {});

/// Cross-check of the three eigenvalue routes for one state.
struct VerifyRow {
    int n = 1;
    double alpha_eff = 0.0;
    ComplexOmega exact;
    double residual_abs = 0.0;        ///< |F(omega_exact)|
    double termination_defect = 0.0;  ///< regular series at omega_exact, degree n

    bool newton_converged = false;
    std::optional<double> newton_deviation;

    bool truncation_converged = false;
    std::optional<ComplexOmega> truncation_omega;
    std::optional<double> truncation_deviation;
    std::optional<double> truncation_next2_defect;

    bool shooting_converged = false;
    std::optional<ComplexOmega> shooting_omega;
    std::optional<double> shooting_deviation;
    std::optional<double> shooting_mismatch;

    std::vector<std::string> failures;

    bool all_converged() const { return newton_converged && truncation_converged && shooting_converged; }
};

VerifyRow verify_state(const StateSpec& spec, const SolveOptions& options = {});

std::vector<VerifyRow> verify(std::span<const int> n_values, std::span<const double> alphas,
                              const SolveOptions& options = {});

}  // namespace pps
