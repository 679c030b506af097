#include "pps/radial.hpp"

#include "pps/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pps {

namespace {

constexpr Complex kI{0.0, 1.0};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double relative(std::initializer_list<Complex> terms) {
    Complex sum;
    double scale = 0.0;
    for (Complex t : terms) {
        sum += t;
        scale += std::abs(t);
    }
    return scale == 0.0 ? 0.0 : std::abs(sum) / scale;
}

void require_coupling(const RadialProblem& prob) {
    if (prob.alpha == 0.0) throw InvalidInput("length scales diverge at alpha = 0");
}

}  // namespace

RadialProblem make_problem(ComplexOmega omega, double alpha, PotentialSign sign) {
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 1.0) {
        throw InvalidInput("coupling must satisfy 0 <= alpha < 1");
    }
    if (omega.value == Complex{0.0, 0.0}) throw SingularInput("omega = 0");

    RadialProblem p;
    p.alpha = alpha;
    p.sign = sign;
    p.coupling = signed_coupling(alpha, sign);
    p.omega = omega;
    p.w = 2.0 * omega.value;
    p.kappa = std::sqrt(p.b * p.b - p.w * p.w) / 2.0;
    if (!(p.kappa.real() > 0.0)) throw InvalidInput("Re kappa <= 0: no decaying solution");
    p.r_star = p.coupling / p.w;
    p.dip = std::max(alpha * alpha, 10.0 * std::abs(p.r_star.imag()));
    p.origin_guard = 0.05 * std::abs(p.r_star);
    return p;
}

Complex lambda_of_r(Complex r, const RadialProblem& prob) {
    if (r == Complex{0.0, 0.0}) throw SingularInput("lambda is singular at r = 0");
    return prob.w - prob.coupling / r;
}

RadialState ode_rhs(Complex r, const RadialState& state, const RadialProblem& prob) {
    if (std::abs(r) < prob.origin_guard) throw NearSingularity("rhs evaluated next to r = 0");
    if (prob.coupling != 0.0 && std::abs(r - prob.r_star) < 0.5 * prob.dip) {
        throw NearSingularity("rhs evaluated next to the zero of lambda");
    }
    const Complex lambda = lambda_of_r(r, prob);
    if (lambda == Complex{0.0, 0.0}) throw NearSingularity("lambda vanishes");
    const Complex dlambda = prob.coupling / (r * r);
    const Complex second =
        (dlambda / lambda) * state[1] - ((lambda * lambda - prob.b * prob.b) / 4.0) * state[0];
    return {state[1], second};
}

RadialState seed_near_origin(double r0, const RadialProblem& prob, const FrobeniusSeries& series) {
    if (!(r0 > 0.0)) throw InvalidSeed("seed radius must be positive");
    const Complex envelope = std::exp(-prob.kappa * r0);
    if (prob.coupling == 0.0) {
        // xi is constant in the free case.
        return {envelope, -prob.kappa * envelope};
    }
    if (r0 >= 0.5 * std::abs(prob.r_star)) {
        throw InvalidSeed("seed radius must lie inside half the series convergence radius");
    }
    const Complex s = kI * (0.5 * prob.coupling);
    const Complex dz_dr = -prob.w / prob.coupling;
    const Complex z = dz_dr * r0;
    const SeriesDerivatives xi = series_derivatives(series, z);
    const Complex prefactor = envelope * std::exp(s * std::log(r0));
    const Complex value = prefactor * xi.value;
    const Complex deriv = prefactor * ((-prob.kappa + s / r0) * xi.value + xi.first * dz_dr);
    return {value, deriv};
}

double matching_radius(const RadialProblem& prob) {
    require_coupling(prob);
    return 2.0 / prob.alpha;
}

double outer_radius(const RadialProblem& prob, int n) {
    require_coupling(prob);
    return 60.0 * n / prob.alpha;
}

Contour default_contour(const RadialProblem& prob, const ContourOptions& options) {
    require_coupling(prob);
    if (options.n < 1) throw InvalidInput("contour needs n >= 1");
    const double radius = std::abs(prob.r_star);
    const double depth = prob.dip * options.dip_scale;
    const double side = prob.r_star.imag() >= 0.0 ? -1.0 : 1.0;
    const Complex offset = kI * (side * depth);

    Contour c;
    c.nodes = {Complex{0.1 * radius, 0.0},
               Complex{0.5 * radius, 0.0},
               Complex{0.5 * radius, 0.0} + offset,
               Complex{2.0 * radius, 0.0} + offset,
               Complex{2.0 * radius, 0.0},
               Complex{matching_radius(prob), 0.0},
               Complex{outer_radius(prob, options.n), 0.0}};
    return c;
}

Contour contour_until(const Contour& contour, double r_end) {
    Contour out;
    for (Complex node : contour.nodes) {
        out.nodes.push_back(node);
        if (node.imag() == 0.0 && node.real() == r_end) return out;
    }
    throw InvalidInput("contour has no real node at r = " + std::to_string(r_end));
}

Contour refine(const Contour& contour, int pieces) {
    if (pieces < 1) throw InvalidInput("refine needs at least one piece per segment");
    if (contour.nodes.empty()) return contour;
    Contour out;
    out.nodes.push_back(contour.nodes.front());
    for (std::size_t i = 1; i < contour.nodes.size(); ++i) {
        const Complex a = contour.nodes[i - 1];
        const Complex b = contour.nodes[i];
        for (int k = 1; k <= pieces; ++k) {
            out.nodes.push_back(k == pieces ? b : a + (b - a) * (static_cast<double>(k) / pieces));
        }
    }
    return out;
}

RadialSolution integrate(const RadialProblem& prob, const Contour& contour, const RadialState& seed,
                         double tol) {
    if (!(tol >= 1e-12)) throw InvalidInput("integrator tolerance must be >= 1e-12");
    if (contour.nodes.empty()) throw InvalidInput("empty contour");

    const ComplexRhs rhs = [&prob](Complex r, const RadialState& y) { return ode_rhs(r, y, prob); };
    StepControl control;
    control.rtol = tol;

    RadialSolution sol;
    RadialState y = seed;
    sol.samples.push_back({contour.nodes.front(), y[0], y[1], {}, {}, {}, {}});
    for (std::size_t i = 1; i < contour.nodes.size(); ++i) {
        const SegmentResult seg =
            integrate_segment(rhs, contour.nodes[i - 1], contour.nodes[i], y, control);
        y = seg.end;
        sol.error_estimate += seg.error_estimate;
        sol.steps += seg.steps;
        sol.samples.push_back({contour.nodes[i], y[0], y[1], {}, {}, {}, {}});
    }
    return sol;
}

RadialSolution reconstruct_spinors(RadialSolution sol, const RadialProblem& prob) {
    const double b = prob.b;
    for (RadialSample& s : sol.samples) {
        const Complex lambda = lambda_of_r(s.r, prob);
        const Complex dlambda = prob.coupling / (s.r * s.r);
        s.zeta_b = b * s.zeta_a / lambda;
        s.zeta_c = Complex{0.0, 0.0};
        s.zeta_d = 2.0 * s.dzeta_a / lambda;

        const Complex second = ode_rhs(s.r, {s.zeta_a, s.dzeta_a}, prob)[1];
        const Complex dzeta_d = 2.0 * (second * lambda - s.dzeta_a * dlambda) / (lambda * lambda);
        // k = 0 and equal masses: the eta k / M and Delta B terms vanish.
        s.residuals[0] = relative({lambda * s.zeta_a, -b * s.zeta_b, 2.0 * dzeta_d});
        s.residuals[1] = relative({lambda * s.zeta_b, -b * s.zeta_a});
        s.residuals[2] = relative({lambda * s.zeta_c});
        s.residuals[3] = relative({lambda * s.zeta_d, -2.0 * s.dzeta_a});
    }
    return sol;
}

MatchPoint shoot(ComplexOmega omega, const StateSpec& spec, const ShootingOptions& options) {
    validate(spec);
    const RadialProblem prob = make_problem(omega, spec.alpha_eff, options.sign);
    const Contour full = default_contour(prob, {spec.n, options.dip_scale});
    const double r_match = matching_radius(prob);
    const double r_max = outer_radius(prob, spec.n);

    const TransformedODE ode = transform_ode(omega, spec.alpha_eff, options.sign);
    const FrobeniusSeries series = frobenius_series(ode, Branch::regular);
    RadialState out_seed = seed_near_origin(full.nodes.front().real(), prob, series);
    for (auto& v : out_seed) v *= options.outer_seed_scale;
    const RadialSolution outward = integrate(prob, contour_until(full, r_match), out_seed, options.tol);

    const Complex tail = std::exp(-prob.kappa * r_max);
    const RadialState in_seed{options.inner_seed_scale * tail,
                              -prob.kappa * options.inner_seed_scale * tail};
    const RadialSolution inward =
        integrate(prob, Contour{{Complex{r_max, 0.0}, Complex{r_match, 0.0}}}, in_seed, options.tol);

    MatchPoint m;
    m.r_match = r_match;
    m.outward = {outward.samples.back().zeta_a, outward.samples.back().dzeta_a};
    m.inward = {inward.samples.back().zeta_a, inward.samples.back().dzeta_a};
    const Complex wronskian = m.outward[0] * m.inward[1] - m.outward[1] * m.inward[0];
    m.mismatch = wronskian / std::abs(m.outward[0] * m.inward[0]);
    return m;
}

Complex shooting_mismatch(ComplexOmega omega, const StateSpec& spec, const ShootingOptions& options) {
    return shoot(omega, spec, options).mismatch;
}

ShootingResult shooting_solve(const StateSpec& spec, std::optional<ComplexOmega> omega0,
                              const ShootingOptions& options) {
    validate(spec);
    if (spec.alpha_eff == 0.0) throw InvalidInput("shooting needs a nonzero coupling");
    const Complex exact = omega_exact(spec).value;

    std::vector<Complex> trace;
    auto mismatch = [&](Complex omega) {
        if (!finite(omega) || omega.real() <= 0.0) {
            throw ConvergenceFailure("shooting iterate left the physical half-plane", trace);
        }
        try {
            return shooting_mismatch(ComplexOmega{omega}, spec, options);
        } catch (const ConvergenceFailure&) {
            throw;
        } catch (const Error& e) {
            throw ConvergenceFailure(std::string("shooting evaluation failed: ") + e.what(), trace);
        }
    };
    auto finish = [&](Complex omega, Complex w, int it) {
        ShootingResult r;
        r.omega = ComplexOmega{omega};
        r.report.converged = true;
        r.report.iterations = it;
        r.report.mismatch = std::abs(w);
        r.report.deviation_from_exact = std::abs(omega - exact);
        try {
            const TruncationResult t = solve_by_truncation(spec, std::nullopt, options.sign);
            if (t.report.converged) r.report.deviation_from_truncation = std::abs(omega - t.omega.value);
        } catch (const Error&) {
        }
        return r;
    };

    Complex x1 = omega0 ? omega0->value : exact;
    trace.push_back(x1);
    Complex w1 = mismatch(x1);
    if (std::abs(w1) < options.target) return finish(x1, w1, 0);

    // Second secant point at the scale of the expected shift, a^3 / n^3.
    const double a = spec.alpha_eff;
    const double n3 = static_cast<double>(spec.n) * spec.n * spec.n;
    Complex x0 = x1 + Complex{0.05, -0.05} * (a * a * a / n3);
    Complex w0 = mismatch(x0);
    trace.push_back(x0);

    for (int it = 1; it <= options.max_iterations; ++it) {
        const Complex denom = w1 - w0;
        if (denom == Complex{0.0, 0.0}) {
            throw ConvergenceFailure("shooting secant stalled (equal mismatches)", trace);
        }
        const Complex x2 = x1 - w1 * (x1 - x0) / denom;
        trace.push_back(x2);
        x0 = x1;
        w0 = w1;
        x1 = x2;
        w1 = mismatch(x1);
        if (std::abs(w1) < options.target) return finish(x1, w1, it);
    }
    throw ConvergenceFailure("shooting secant did not reach |W| < target", trace);
}

RadialSolution eigenfunction(ComplexOmega omega, const StateSpec& spec,
                             const ShootingOptions& options, int pieces) {
    validate(spec);
    const RadialProblem prob = make_problem(omega, spec.alpha_eff, options.sign);
    const Contour full = default_contour(prob, {spec.n, options.dip_scale});
    const double r_match = matching_radius(prob);
    const double r_max = outer_radius(prob, spec.n);

    const FrobeniusSeries series =
        frobenius_series(transform_ode(omega, spec.alpha_eff, options.sign), Branch::regular);
    const RadialState out_seed = seed_near_origin(full.nodes.front().real(), prob, series);
    RadialSolution outward =
        integrate(prob, refine(contour_until(full, r_match), pieces), out_seed, options.tol);

    const Complex tail = std::exp(-prob.kappa * r_max);
    const Contour inner = refine(Contour{{Complex{r_max, 0.0}, Complex{r_match, 0.0}}}, 4 * pieces);
    RadialSolution inward = integrate(prob, inner, {tail, -prob.kappa * tail}, options.tol);

    const Complex scale = outward.samples.back().zeta_a / inward.samples.back().zeta_a;
    RadialSolution joined = outward;
    joined.error_estimate += std::abs(scale) * inward.error_estimate;
    joined.steps += inward.steps;
    for (auto it = inward.samples.rbegin() + 1; it != inward.samples.rend(); ++it) {
        RadialSample s = *it;
        s.zeta_a *= scale;
        s.dzeta_a *= scale;
        joined.samples.push_back(s);
    }
    return reconstruct_spinors(std::move(joined), prob);
}

}  // namespace pps
