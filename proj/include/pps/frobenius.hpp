#pragma once

#include "pps/constants.hpp"
#include "pps/spectrum.hpp"

#include <array>
#include <optional>
#include <vector>

namespace pps {

/// Sign convention for the Coulomb term in lambda(r) = w - g / r.
///   attractive: g = -alpha (opposite charges); the bound-state branch.
///   as_written: g = +alpha, the potential exactly as V = alpha / r.
enum class PotentialSign { attractive, as_written };

double signed_coupling(double alpha, PotentialSign sign);

/// Confluent Heun parameter quintuple (theta, eps, ups, sigma, rho).
struct HeunParams {
    Complex theta;
    Complex eps;
    Complex ups;
    Complex sigma;
    Complex rho;
};

HeunParams heun_params(ComplexOmega omega, double alpha);

/// Cleared polynomial form P2(z) xi'' + P1(z) xi' + P0(z) xi = 0 of the radial
/// equation after peeling off exp(-kappa r) r^(i g/2) and substituting
/// z = -w r / g (natural units, w = 2 Omega, kappa = sqrt(1 - Omega^2)).
///
/// With s = i g / 2 and theta_g = g kappa / Omega, the coefficients are
///   P2 = z (z + 1)
///   P1 = theta_g z^2 + (2 s + theta_g) z + (2 s + 1)
///   P0 = (theta_g s + g^2/2) z + (theta_g s + g^2/2 - s + theta_g / 2)
/// Singular points: z = 0 (r = 0) and z = -1 (lambda = 0).
struct TransformedODE {
    /// Ascending powers of z.
    std::array<Complex, 3> p2{};
    std::array<Complex, 3> p1{};
    std::array<Complex, 3> p0{};
    Complex z_singular{-1.0, 0.0};

    double coupling = 0.0;  ///< signed g
    Complex omega{1.0, 0.0};
    Complex w{2.0, 0.0};
    Complex kappa{0.0, 0.0};
    Complex exponent{0.0, 0.0};  ///< s = i g / 2 in r^s

    /// z = -w r / g. Only meaningful for g != 0.
    Complex z_of_r(Complex r) const;
    Complex dz_dr() const;
};

/// Throws SingularInput for Omega = 0. alpha = 0 yields the free equation
/// (P1 = P0 = 0 after scaling, bounded solution xi = const); z is then r itself.
TransformedODE transform_ode(ComplexOmega omega, double alpha,
                             PotentialSign sign = PotentialSign::attractive);

enum class Branch { regular, secondary };

struct FrobeniusSeries {
    Complex exponent{0.0, 0.0};
    std::vector<Complex> coefficients;  ///< c_0 = 1
    /// max(|c_{n+1}|, |c_{n+2}|) / max_k |c_k| for the targeted degree n.
    std::optional<double> termination_defect;
    std::optional<int> target_degree;
    /// Radius of convergence in z (distance to the nearest other singular point).
    double radius = 1.0;
};

/// Series z^rho sum c_k z^k about z = 0 from the recurrence generated by the
/// cleared coefficients. Needs at least 4 terms. Throws DegenerateExponent for
/// the secondary branch when its exponent coincides with the regular one.
FrobeniusSeries frobenius_series(const TransformedODE& ode, Branch branch, int terms = 64,
                                 std::optional<int> target_degree = {});

/// Termination defect measured with quad-precision recurrence.
double termination_defect_extended(const TransformedODE& ode, int degree, int terms = 64);

struct SeriesValue {
    Complex value;
    double tail_bound = 0.0;
    int terms_used = 0;
};

/// Partial sum of the series (without the z^rho prefactor), stopping as soon as
/// the estimated tail drops below tol. Throws InvalidInput outside the
/// convergence disk unless the series terminated, PrecisionExhausted when the
/// stored terms cannot reach tol.
SeriesValue heunc_eval(const FrobeniusSeries& series, Complex z, double tol);

/// xi, xi', xi'' from all stored coefficients, including the z^rho factor.
struct SeriesDerivatives {
    Complex value;
    Complex first;
    Complex second;
};

SeriesDerivatives series_derivatives(const FrobeniusSeries& series, Complex z);

/// |P2 xi'' + P1 xi' + P0 xi| / (|P2 xi''| + |P1 xi'| + |P0 xi|) at z.
double ode_residual(const TransformedODE& ode, const FrobeniusSeries& series, Complex z);

struct TruncationReport {
    bool converged = false;
    int iterations = 0;
    double next_defect = 0.0;   ///< |c_{n+1}| / max_k |c_k| at the returned Omega
    double next2_defect = 0.0;  ///< |c_{n+2}| / max_k |c_k| at the same Omega
    double distance_to_exact = 0.0;
};

struct TruncationResult {
    ComplexOmega omega;
    TruncationReport report;
};

/// Complex secant iteration driving c_{n+1}(Omega) to zero, seeded with
/// omega_approx. Returns the root (|c_{n+1}| < 1e-12 max|c_k|) or, when the
/// iteration stalls inside the trust region, the best iterate found with
/// converged = false. Leaving the region |Omega - 1| <= 0.5 or producing a
/// non-finite iterate throws ConvergenceFailure.
TruncationResult solve_by_truncation(const StateSpec& spec,
                                     std::optional<ComplexOmega> omega0 = {},
                                     PotentialSign sign = PotentialSign::attractive);

}  // namespace pps
