#pragma once

#include "pps/constants.hpp"
#include "pps/frobenius.hpp"
#include "pps/integrator.hpp"
#include "pps/spectrum.hpp"

#include <optional>
#include <vector>

namespace pps {

/// Second-order radial problem in natural units (hbar = m_e = c = 1):
///   zeta'' = (lambda'/lambda) zeta' - ((lambda^2 - B^2)/4) zeta,
///   lambda = w - g / r, B = 2, w = 2 Omega.
struct RadialProblem {
    double alpha = 0.0;
    PotentialSign sign = PotentialSign::attractive;
    double coupling = 0.0;  ///< signed g
    ComplexOmega omega;
    Complex w{2.0, 0.0};
    double b = 2.0;
    Complex kappa{0.0, 0.0};  ///< sqrt(B^2 - w^2)/2, Re > 0
    Complex r_star{0.0, 0.0};  ///< zero of lambda, g / w
    double dip = 0.0;          ///< contour offset delta = max(a^2, 10 |Im r*|)
    double origin_guard = 0.0;  ///< rhs refuses |r| below this
};

/// Throws InvalidInput when Re kappa <= 0 (no decaying solution) or alpha is
/// out of range, SingularInput for Omega = 0.
RadialProblem make_problem(ComplexOmega omega, double alpha,
                           PotentialSign sign = PotentialSign::attractive);

/// w - g / r. Throws SingularInput at r = 0.
Complex lambda_of_r(Complex r, const RadialProblem& prob);

/// (zeta', zeta''). Throws NearSingularity within origin_guard of 0 or within
/// dip/2 of r*.
RadialState ode_rhs(Complex r, const RadialState& state, const RadialProblem& prob);

/// Regular solution zeta = exp(-kappa r) r^(i g/2) xi(z(r)) and its derivative
/// at a real r0. Throws InvalidSeed unless r0 < 0.5 |r*|.
RadialState seed_near_origin(double r0, const RadialProblem& prob, const FrobeniusSeries& series);

/// Piecewise-linear path through the complex r-plane.
struct Contour {
    std::vector<Complex> nodes;
};

struct ContourOptions {
    int n = 1;               ///< sets r_max = 60n/a
    double dip_scale = 1.0;  ///< multiplies delta
};

/// r0 = 0.1 |r*|, a dip of depth delta over Re r in [0.5 |r*|, 2 |r*|] on the
/// side away from r*, back to the real axis, then out to r_max = 60 n / a.
/// The node r_match = 2 / a is always present; it lies inside the first radial node for every n.
Contour default_contour(const RadialProblem& prob, const ContourOptions& options = {});

double matching_radius(const RadialProblem& prob);
double outer_radius(const RadialProblem& prob, int n = 1);

/// Contour restricted to [start, r] where r is a real node of the contour.
Contour contour_until(const Contour& contour, double r_end);

/// Splits every segment into `pieces` equal parts (dense sampling).
Contour refine(const Contour& contour, int pieces);

struct RadialSample {
    Complex r;
    Complex zeta_a;
    Complex dzeta_a;
    Complex zeta_b;
    Complex zeta_c;
    Complex zeta_d;
    /// Relative residuals of the four first-order equations (filled by
    /// reconstruct_spinors).
    std::array<double, 4> residuals{};
};

struct RadialSolution {
    std::vector<RadialSample> samples;
    double error_estimate = 0.0;
    std::size_t steps = 0;
};

/// Integrates from the first contour node with the given seed, sampling at
/// every node. tol must be >= 1e-12.
RadialSolution integrate(const RadialProblem& prob, const Contour& contour, const RadialState& seed,
                         double tol = 1e-10);

/// Fills zeta_b = B zeta_a / lambda, zeta_c = 0, zeta_d = 2 zeta_a' / lambda and
/// the four residuals of the k = 0, equal-mass first-order set.
RadialSolution reconstruct_spinors(RadialSolution sol, const RadialProblem& prob);

struct ShootingOptions {
    double tol = 1e-10;
    double dip_scale = 1.0;
    PotentialSign sign = PotentialSign::attractive;
    int max_iterations = 50;
    double target = 1e-10;
    /// Scales both seeds; used to check normalisation independence.
    Complex outer_seed_scale{1.0, 0.0};
    Complex inner_seed_scale{1.0, 0.0};
};

struct MatchPoint {
    RadialState outward;
    RadialState inward;
    double r_match = 0.0;
    Complex mismatch;  ///< normalised Wronskian
};

MatchPoint shoot(ComplexOmega omega, const StateSpec& spec, const ShootingOptions& options = {});

/// Normalised Wronskian (zeta_out zeta_in' - zeta_out' zeta_in) / |zeta_out zeta_in|
/// at r_match; zero at an eigenvalue.
Complex shooting_mismatch(ComplexOmega omega, const StateSpec& spec,
                          const ShootingOptions& options = {});

struct ShootingReport {
    bool converged = false;
    int iterations = 0;
    double mismatch = 0.0;
    double deviation_from_exact = 0.0;
    std::optional<double> deviation_from_truncation;
};

struct ShootingResult {
    ComplexOmega omega;
    ShootingReport report;
};

/// Secant iteration on the normalised Wronskian from omega_exact until
/// |W| < options.target. Throws ConvergenceFailure with the iterate trace.
ShootingResult shooting_solve(const StateSpec& spec, std::optional<ComplexOmega> omega0 = {},
                              const ShootingOptions& options = {});

/// Outward solution up to r_match joined to the rescaled inward solution
/// beyond it, with spinors reconstructed. Samples every node of the refined
/// contour.
RadialSolution eigenfunction(ComplexOmega omega, const StateSpec& spec,
                             const ShootingOptions& options = {}, int pieces = 8);

}  // namespace pps
