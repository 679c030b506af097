#include "pps/frobenius.hpp"

#include "pps/error.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pps {

namespace {

using Quad = boost::multiprecision::cpp_complex_quad;

template <class C>
C lift(Complex z) {
    return C(z.real(), z.imag());
}

template <class C>
double magnitude(const C& z) {
    using std::abs;
    return static_cast<double>(abs(z));
}

template <class C>
struct Cleared {
    std::array<C, 3> p2;
    std::array<C, 3> p1;
    std::array<C, 3> p0;
};

// Coefficients of the cleared z-form, divided through by w. The derivation
// multiplies the transformed equation by r (w r - g) and substitutes
// z = -w r / g; kappa r becomes -theta_g z / 2.
template <class C>
Cleared<C> cleared_coefficients(Complex omega, double g) {
    using std::sqrt;
    const C om = lift<C>(omega);
    const C one(1.0, 0.0);
    const C kappa = sqrt((one - om) * (one + om));
    const C theta = C(g, 0.0) * kappa / om;
    const C s(0.0, 0.5 * g);
    const C half_g2(0.5 * g * g, 0.0);
    const C zero(0.0, 0.0);

    Cleared<C> c;
    c.p2 = {zero, one, one};
    c.p1 = {C(2.0, 0.0) * s + one, C(2.0, 0.0) * s + theta, theta};
    c.p0 = {theta * s + half_g2 - s + theta / C(2.0, 0.0), theta * s + half_g2, zero};
    return c;
}

// Three-term recurrence generated from polynomial coefficients of degree <= 2
// (P2(0) = 0, deg P0 <= 1). Collecting z^(m + rho - 1):
//   f0(m + rho) c_m + f1(m - 1 + rho) c_{m-1} + f2(m - 2 + rho) c_{m-2} = 0
// with f0(x) = x(x-1) P2_1 + x P1_0, f1(x) = x(x-1) P2_2 + x P1_1 + P0_0,
// f2(x) = x P1_2 + P0_1.
template <class C>
std::vector<C> recurrence(const std::array<C, 3>& p2, const std::array<C, 3>& p1,
                          const std::array<C, 3>& p0, const C& rho, int terms) {
    const C one(1.0, 0.0);
    auto f0 = [&](const C& x) { return x * (x - one) * p2[1] + x * p1[0]; };
    auto f1 = [&](const C& x) { return x * (x - one) * p2[2] + x * p1[1] + p0[0]; };
    auto f2 = [&](const C& x) { return x * p1[2] + p0[1]; };

    std::vector<C> c(static_cast<std::size_t>(terms), C(0.0, 0.0));
    c[0] = one;
    for (int m = 1; m < terms; ++m) {
        const C x(static_cast<double>(m), 0.0);
        const C denom = f0(x + rho);
        if (magnitude(denom) == 0.0) {
            throw DegenerateExponent("indicial clash at order " + std::to_string(m));
        }
        C num = f1(x - one + rho) * c[m - 1];
        if (m >= 2) num += f2(x - C(2.0, 0.0) + rho) * c[m - 2];
        c[m] = -num / denom;
    }
    return c;
}

template <class C>
double relative_defect(const std::vector<C>& c, int degree) {
    double biggest = 0.0;
    for (const C& ck : c) biggest = std::max(biggest, magnitude(ck));
    const double a = magnitude(c[degree + 1]);
    const double b = magnitude(c[degree + 2]);
    return std::max(a, b) / biggest;
}

template <class C>
double max_magnitude(const std::vector<C>& c) {
    double biggest = 0.0;
    for (const C& ck : c) biggest = std::max(biggest, magnitude(ck));
    return biggest;
}

Complex to_complex(const Quad& q) {
    return {static_cast<double>(q.real()), static_cast<double>(q.imag())};
}

Complex eval_poly(const std::array<Complex, 3>& p, Complex z) {
    return p[0] + (p[1] + p[2] * z) * z;
}

}  // namespace

double signed_coupling(double alpha, PotentialSign sign) {
    return sign == PotentialSign::attractive ? -alpha : alpha;
}

HeunParams heun_params(ComplexOmega omega, double alpha) {
    if (omega.value == Complex{0.0, 0.0}) throw SingularInput("omega = 0 is a pole of theta");
    HeunParams p;
    p.theta = heun_theta(omega.value, alpha);
    p.eps = Complex{0.0, -alpha};
    p.ups = Complex{-2.0, 0.0};
    p.sigma = Complex{-0.5 * alpha * alpha, 0.0};
    p.rho = Complex{1.0 + 0.5 * alpha * alpha, 0.0};
    return p;
}

Complex TransformedODE::z_of_r(Complex r) const {
    if (coupling == 0.0) return r;
    return -w * r / coupling;
}

Complex TransformedODE::dz_dr() const {
    if (coupling == 0.0) return {1.0, 0.0};
    return -w / coupling;
}

TransformedODE transform_ode(ComplexOmega omega, double alpha, PotentialSign sign) {
    if (omega.value == Complex{0.0, 0.0}) throw SingularInput("omega = 0 is a pole of theta");
    const double g = signed_coupling(alpha, sign);
    const Cleared<Complex> c = cleared_coefficients<Complex>(omega.value, g);

    TransformedODE ode;
    ode.p2 = c.p2;
    ode.p1 = c.p1;
    ode.p0 = c.p0;
    ode.coupling = g;
    ode.omega = omega.value;
    ode.w = 2.0 * omega.value;
    ode.kappa = std::sqrt((1.0 - omega.value) * (1.0 + omega.value));
    ode.exponent = Complex{0.0, 0.5 * g};
    return ode;
}

FrobeniusSeries frobenius_series(const TransformedODE& ode, Branch branch, int terms,
                                 std::optional<int> target_degree) {
    if (terms < 4) throw InvalidInput("Frobenius series needs at least 4 terms");
    if (target_degree && (*target_degree < 0 || *target_degree + 2 >= terms)) {
        throw InvalidInput("target degree needs two stored coefficients beyond it");
    }
    if (ode.p2[0] != Complex{0.0, 0.0} || ode.p0[2] != Complex{0.0, 0.0}) {
        throw InvalidInput("coefficients do not give a three-term recurrence");
    }

    Complex rho{0.0, 0.0};
    if (branch == Branch::secondary) {
        rho = 1.0 - ode.p1[0] / ode.p2[1];
        if (std::abs(rho) < 1e-14) {
            throw DegenerateExponent("secondary exponent coincides with the regular one");
        }
    }

    FrobeniusSeries series;
    series.exponent = rho;
    series.coefficients = recurrence<Complex>(ode.p2, ode.p1, ode.p0, rho, terms);
    series.radius = std::abs(ode.z_singular);
    if (target_degree) {
        series.target_degree = target_degree;
        series.termination_defect = relative_defect(series.coefficients, *target_degree);
    }
    return series;
}

double termination_defect_extended(const TransformedODE& ode, int degree, int terms) {
    if (degree < 0 || degree + 2 >= terms) throw InvalidInput("degree out of range for terms");
    const Cleared<Quad> c = cleared_coefficients<Quad>(ode.omega, ode.coupling);
    const auto coeffs = recurrence<Quad>(c.p2, c.p1, c.p0, Quad(0.0, 0.0), terms);
    return relative_defect(coeffs, degree);
}

SeriesValue heunc_eval(const FrobeniusSeries& series, Complex z, double tol) {
    const auto& c = series.coefficients;
    const int n_terms = static_cast<int>(c.size());
    if (n_terms == 0) throw InvalidInput("empty series");
    if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
    const double az = std::abs(z);

    std::vector<Complex> term(c.size());
    Complex power{1.0, 0.0};
    for (int k = 0; k < n_terms; ++k) {
        term[k] = c[k] * power;
        power *= z;
    }

    const bool terminated = series.termination_defect && series.target_degree &&
                            *series.termination_defect < 1e-10;
    if (terminated) {
        const int degree = *series.target_degree;
        SeriesValue out;
        for (int k = 0; k <= degree; ++k) out.value += term[k];
        for (int k = degree + 1; k < n_terms; ++k) out.tail_bound += std::abs(term[k]);
        out.terms_used = degree + 1;
        if (out.tail_bound > tol) throw PrecisionExhausted("residual coefficients exceed tol");
        return out;
    }

    if (az >= series.radius) {
        throw InvalidInput("z outside the convergence disk of a non-terminating series");
    }

    // Geometric extrapolation beyond the stored terms: the ratio is the larger
    // of |z|/R and the observed ratio over the last few stored terms.
    double ratio = az / series.radius;
    for (int k = std::max(1, n_terms - 4); k < n_terms; ++k) {
        const double prev = std::abs(term[k - 1]);
        if (prev > 0.0) ratio = std::max(ratio, std::abs(term[k]) / prev);
    }
    const double last = std::abs(term[n_terms - 1]);
    const double beyond = last == 0.0 ? 0.0
                          : ratio < 1.0 ? last * ratio / (1.0 - ratio)
                                        : std::numeric_limits<double>::infinity();

    // tail[k] = estimated |sum_{j > k} term_j|
    std::vector<double> tail(c.size());
    double acc = beyond;
    for (int k = n_terms - 1; k >= 0; --k) {
        tail[k] = acc;
        acc += std::abs(term[k]);
    }

    for (int k = 0; k < n_terms; ++k) {
        if (tail[k] <= tol) {
            SeriesValue out;
            for (int j = 0; j <= k; ++j) out.value += term[j];
            out.tail_bound = tail[k];
            out.terms_used = k + 1;
            return out;
        }
    }
    throw PrecisionExhausted("tolerance not reachable with the stored terms");
}

SeriesDerivatives series_derivatives(const FrobeniusSeries& series, Complex z) {
    const auto& c = series.coefficients;
    const Complex rho = series.exponent;
    const bool regular = rho == Complex{0.0, 0.0};
    if (!regular && z == Complex{0.0, 0.0}) throw SingularInput("z^rho is singular at z = 0");

    std::vector<Complex> zp(c.size() + 1);
    zp[0] = 1.0;
    for (std::size_t k = 1; k < zp.size(); ++k) zp[k] = zp[k - 1] * z;

    Complex s0, s1, s2;
    if (regular) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double e = static_cast<double>(k);
            s0 += c[k] * zp[k];
            if (k >= 1) s1 += c[k] * e * zp[k - 1];
            if (k >= 2) s2 += c[k] * e * (e - 1.0) * zp[k - 2];
        }
        return {s0, s1, s2};
    }

    for (std::size_t k = 0; k < c.size(); ++k) {
        const Complex e = static_cast<double>(k) + rho;
        s0 += c[k] * zp[k];
        s1 += c[k] * e * zp[k];
        s2 += c[k] * e * (e - 1.0) * zp[k];
    }
    const Complex pre = std::pow(z, rho);
    return {pre * s0, pre * s1 / z, pre * s2 / (z * z)};
}

double ode_residual(const TransformedODE& ode, const FrobeniusSeries& series, Complex z) {
    const SeriesDerivatives d = series_derivatives(series, z);
    const Complex a = eval_poly(ode.p2, z) * d.second;
    const Complex b = eval_poly(ode.p1, z) * d.first;
    const Complex c = eval_poly(ode.p0, z) * d.value;
    const double scale = std::abs(a) + std::abs(b) + std::abs(c);
    if (scale == 0.0) return 0.0;
    return std::abs(a + b + c) / scale;
}

TruncationResult solve_by_truncation(const StateSpec& spec, std::optional<ComplexOmega> omega0,
                                     PotentialSign sign) {
    validate(spec);
    constexpr int kTerms = 64;
    constexpr int kMaxIterations = 60;
    constexpr double kAccept = 1e-12;
    constexpr double kTrustRadius = 0.5;

    const int n = spec.n;
    const int terms = std::max(kTerms, n + 3);
    const double g = signed_coupling(spec.alpha_eff, sign);
    const Complex exact = omega_exact(spec).value;

    struct Eval {
        Quad next;
        double rel = 0.0;
        double rel2 = 0.0;
    };
    auto evaluate = [&](Complex omega) {
        if (omega == Complex{0.0, 0.0}) throw SingularInput("omega = 0");
        const Cleared<Quad> c = cleared_coefficients<Quad>(omega, g);
        const auto coeffs = recurrence<Quad>(c.p2, c.p1, c.p0, Quad(0.0, 0.0), terms);
        const double biggest = max_magnitude(coeffs);
        return Eval{coeffs[n + 1], magnitude(coeffs[n + 1]) / biggest,
                    magnitude(coeffs[n + 2]) / biggest};
    };
    auto finish = [&](Complex omega, const Eval& e, bool converged, int it) {
        TruncationResult out;
        out.omega = ComplexOmega{omega};
        out.report.converged = converged;
        out.report.iterations = it;
        out.report.next_defect = e.rel;
        out.report.next2_defect = e.rel2;
        out.report.distance_to_exact = std::abs(omega - exact);
        return out;
    };

    Complex x1 = omega0 ? omega0->value : omega_approx(spec).value;
    Eval e1 = evaluate(x1);
    if (e1.rel < kAccept) return finish(x1, e1, true, 0);

    Complex x0 = x1 * (1.0 + 1e-4);
    Eval e0 = evaluate(x0);
    std::vector<Complex> trace{x0, x1};

    Complex best = x1;
    Eval best_eval = e1;
    for (int it = 1; it <= kMaxIterations; ++it) {
        const Quad denom = e1.next - e0.next;
        if (magnitude(denom) == 0.0) break;
        const Complex step = to_complex(e1.next * (lift<Quad>(x1) - lift<Quad>(x0)) / denom);
        const Complex x2 = x1 - step;
        trace.push_back(x2);
        if (!std::isfinite(x2.real()) || !std::isfinite(x2.imag())) {
            throw ConvergenceFailure("truncation secant produced a non-finite iterate", trace);
        }
        if (std::abs(x2 - 1.0) > kTrustRadius) {
            throw ConvergenceFailure("truncation secant left the trust region |Omega - 1| <= 0.5",
                                     trace);
        }
        x0 = x1;
        e0 = e1;
        x1 = x2;
        e1 = evaluate(x1);
        if (e1.rel < best_eval.rel) {
            best = x1;
            best_eval = e1;
        }
        // c_{n+1} is naturally small at weak coupling, so a relative defect
        // threshold alone stops early; iterate until the step reaches double resolution.
        if (e1.rel == 0.0 || std::abs(step) <= 4e-16 * std::abs(x1)) {
            return finish(best, best_eval, best_eval.rel < kAccept, it);
        }
    }
    return finish(best, best_eval, best_eval.rel < kAccept, kMaxIterations);
}

}  // namespace pps
