#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pps/error.hpp"
#include "pps/spectrum.hpp"
#include "pps/sweep.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace pps;

namespace {

const std::vector<double> kGridAlphas = {1e-3, 1e-2, oracle::kAlphaFs, 0.05, 0.1};

double ulp_distance(double a, double b) {
    return std::abs(a - b) / (std::numeric_limits<double>::epsilon() * std::abs(b));
}

}  // namespace

TEST_CASE("state validation") {
    CHECK_NOTHROW(validate({1, 0.0}));
    CHECK_NOTHROW(validate({7, 0.5}));
    CHECK_THROWS_AS(validate({0, 0.01}), InvalidInput);
    CHECK_THROWS_AS(validate({-3, 0.01}), InvalidInput);
    CHECK_THROWS_AS(validate({1, -0.01}), InvalidInput);
    CHECK_THROWS_AS(validate({1, 1.0}), InvalidInput);
    CHECK_THROWS_AS(validate({1, std::numeric_limits<double>::quiet_NaN()}), InvalidInput);
    CHECK_THROWS_AS(omega_exact({0, 0.01}), InvalidInput);
}

TEST_CASE("closed form matches the 50-digit radicand") {
    for (double a : kGridAlphas) {
        for (int n = 1; n <= 20; ++n) {
            const Complex got = omega_exact({n, a}).value;
            const Complex want = oracle::omega_closed_form(n, a);
            CHECK(oracle::rel(got, want) < 4e-16);
            // Im is tiny next to Re; check it on its own scale too.
            CHECK(got.imag() == doctest::Approx(want.imag()).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed form on random couplings") {
    for (int k = 0; k < 300; ++k) {
        const int n = 1 + static_cast<int>(oracle::uniform(0, 40));
        const double a = oracle::uniform(0.0, 0.9);
        const Complex got = omega_exact({n, a}).value;
        const Complex want = oracle::omega_closed_form(n, a);
        CHECK(oracle::rel(got, want) < 1e-15);
        CHECK(got.real() > 0.0);
        CHECK(got.imag() <= 0.0);
    }
}

TEST_CASE("ground state at the CODATA coupling") {
    const ComplexOmega w = omega_exact({1, oracle::kAlphaFs});
    CHECK(w.re() == doctest::Approx(oracle::kRe1).epsilon(1e-15));
    CHECK(w.im() == doctest::Approx(oracle::kIm1).epsilon(1e-13));
    // Known deficit of the exact ground state.
    CHECK(1.0 - w.re() == doctest::Approx(6.65608702e-6).epsilon(1e-8));
}

TEST_CASE("free limit") {
    CHECK(omega_exact({1, 0.0}) == ComplexOmega{1.0, 0.0});
    CHECK(omega_exact({9, 0.0}) == ComplexOmega{1.0, 0.0});
    CHECK(omega_approx({3, 0.0}).re() == 1.0);
    CHECK_THROWS_AS(decay_time_approx({1, 0.0}, constants()), InvalidInput);
}

TEST_CASE("approximate spectrum terms") {
    const ExpansionTerms t = expansion_terms({2, 0.1});
    CHECK(t.binding == doctest::Approx(0.01 / 32.0).epsilon(1e-15));
    CHECK(t.decay == doctest::Approx(0.001 / 64.0).epsilon(1e-15));
    const ComplexOmega w = omega_approx({1, oracle::kAlphaFs});
    CHECK(w.re() == doctest::Approx(oracle::kReApprox1).epsilon(1e-15));
    CHECK(w.im() == doctest::Approx(oracle::kImApprox1).epsilon(1e-14));
}

TEST_CASE("expansion error is fourth order") {
    for (double a : {0.1, 0.05}) {
        const double big = std::abs(omega_exact({1, a}).value - omega_approx({1, a}).value);
        const double small = std::abs(omega_exact({1, a / 2}).value - omega_approx({1, a / 2}).value);
        const double ratio = big / small;
        CHECK(ratio >= 12.0);
        CHECK(ratio <= 20.0);
    }
    // Against the extended-precision deficit, where cancellation is absent.
    const double a = 0.1;
    const oracle::C d1 = oracle::omega_minus_one(1, a) - (omega_approx({1, a}).value - 1.0);
    const oracle::C d2 = oracle::omega_minus_one(1, a / 2) - (omega_approx({1, a / 2}).value - 1.0);
    CHECK(std::abs(d1) / std::abs(d2) == doctest::Approx(15.9476531).epsilon(1e-6));
}

TEST_CASE("decay time scales with n cubed") {
    const PhysicalConstants c = constants();
    for (double a : kGridAlphas) {
        const double ground = decay_time_approx({1, a}, c);
        for (int n = 1; n <= 50; ++n) {
            const double n3 = double(n) * n * n;
            CHECK(decay_time_approx({n, a}, c) == n3 * ground);
            CHECK(ulp_distance(decay_time_approx({n, a}, c) / ground, n3) <= 1.0);
        }
    }
    CHECK(decay_time_approx({1, oracle::kAlphaFs}, c) ==
          doctest::Approx(oracle::kTauApprox1).epsilon(1e-14));
}

TEST_CASE("binding term scales with alpha squared") {
    for (double a : kGridAlphas) {
        for (int n = 1; n <= 20; ++n) {
            const double base = expansion_terms({n, a}).binding;
            for (double s : {0.5, 2.0, 4.0, 0.25}) {
                CHECK(expansion_terms({n, s * a}).binding == s * s * base);
            }
            for (double s : {0.1, 1.7, 3.0, 0.37}) {
                if (s * a >= 1.0) continue;
                CHECK(ulp_distance(expansion_terms({n, s * a}).binding, s * s * base) <= 4.0);
            }
        }
    }
}

TEST_CASE("quantization identity on the closed form") {
    for (double a : kGridAlphas) {
        for (int n = 1; n <= 20; ++n) {
            const StateSpec s{n, a};
            CHECK(std::abs(quantization_residual(omega_exact(s), s)) < 1e-12);
        }
    }
}

TEST_CASE("residual is nonzero away from the spectrum") {
    const StateSpec s{1, 0.05};
    CHECK(std::abs(quantization_residual(ComplexOmega{0.99, -1e-4}, s)) > 1e-5);
    CHECK_THROWS_AS(heun_theta(Complex{0.0, 0.0}, 0.1), SingularInput);
}

TEST_CASE("theta on the principal branch") {
    const Complex w{0.98, -0.01};
    const Complex th = heun_theta(w, 0.2);
    CHECK(oracle::rel(th, 0.2 * std::sqrt(1.0 - w * w) / w) < 1e-15);
    CHECK(std::sqrt(1.0 - w * w).real() > 0.0);
}

TEST_CASE("analytic derivative of the residual") {
    for (int k = 0; k < 50; ++k) {
        const StateSpec s{1 + k % 6, oracle::uniform(1e-3, 0.3)};
        const Complex w{oracle::uniform(0.7, 0.995), oracle::uniform(-0.05, 0.05)};
        auto f = [&](oracle::C z) { return quantization_residual(ComplexOmega{z}, s); };
        const Complex fd = oracle::derivative(f, w, Complex{1e-3, 0.0});
        const Complex an = quantization_residual_derivative(ComplexOmega{w}, s);
        CHECK(oracle::rel(an, fd) < 1e-8);
    }
}

TEST_CASE("Newton agrees with the closed form") {
    for (double a : kGridAlphas) {
        for (int n = 1; n <= 20; ++n) {
            const StateSpec s{n, a};
            const Complex exact = omega_exact(s).value;
            CHECK(std::abs(solve_quantization(s).value - exact) / std::abs(exact) < 1e-10);
        }
    }
}

TEST_CASE("Newton from poor seeds fails loudly") {
    const StateSpec s{1, 0.02};
    try {
        solve_quantization(s, ComplexOmega{1e-3, 0.0});
        FAIL("expected ConvergenceFailure");
    } catch (const ConvergenceFailure& e) {
        CHECK(e.trace().size() > 1);
        CHECK(std::abs(e.trace().front() - Complex{1e-3, 0.0}) == 0.0);
    }
    CHECK_THROWS_AS(solve_quantization(s, ComplexOmega{5.0, 5.0}), ConvergenceFailure);
    CHECK_THROWS_AS(solve_quantization(s, ComplexOmega{1.0, 0.0}), SingularInput);
}

TEST_CASE("method names round trip") {
    for (Method m : {Method::exact, Method::approx, Method::newton, Method::truncation,
                     Method::shooting}) {
        CHECK(parse_method(to_string(m)) == m);
    }
    CHECK_FALSE(parse_method("Exact").has_value());
    CHECK_FALSE(parse_method("").has_value());
}

TEST_CASE("sweep ordering and determinism") {
    const std::vector<int> ns = {1, 2, 3, 4};
    const std::vector<double> as = {0.05, 0.01, oracle::kAlphaFs};
    const auto rows = sweep(ns, as, Method::exact, constants());
    REQUIRE(rows.size() == 12);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].alpha_eff == as[i / ns.size()]);
        CHECK(rows[i].n == ns[i % ns.size()]);
        const ComplexOmega w = omega_exact({rows[i].n, rows[i].alpha_eff});
        CHECK(rows[i].re_omega == w.re());
        CHECK(rows[i].im_omega == w.im());
        CHECK(rows[i].method == Method::exact);
    }
    for (int rep = 0; rep < 5; ++rep) {
        const auto again = sweep(ns, as, Method::newton, constants());
        const auto first = sweep(ns, as, Method::newton, constants());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(again[i].re_omega == first[i].re_omega);
            CHECK(again[i].im_omega == first[i].im_omega);
        }
    }
}

TEST_CASE("sweep input checks") {
    const std::vector<int> ns = {1};
    const std::vector<int> none;
    const std::vector<double> as = {0.01};
    const std::vector<double> empty;
    CHECK_THROWS_AS(sweep(none, as, Method::exact, constants()), InvalidInput);
    CHECK_THROWS_AS(sweep(ns, empty, Method::exact, constants()), InvalidInput);
    const std::vector<double> bad = {0.01, 1.5};
    CHECK_THROWS_AS(sweep(ns, bad, Method::exact, constants()), InvalidInput);
    const std::vector<int> zero = {1, 0};
    CHECK_THROWS_AS(sweep(zero, as, Method::exact, constants()), InvalidInput);
}

TEST_CASE("free pair row has infinite lifetime") {
    const std::vector<int> ns = {1};
    const std::vector<double> as = {0.0};
    const auto rows = sweep(ns, as, Method::exact, constants());
    CHECK_FALSE(rows[0].decay_time_s.has_value());
    CHECK(rows[0].binding_energy_ev == 0.0);
}

TEST_CASE("truncation failures propagate out of a sweep") {
    const std::vector<int> ns = {2};
    const std::vector<double> as = {0.02};
    CHECK_THROWS_AS(sweep(ns, as, Method::truncation, constants()), ConvergenceFailure);
}

TEST_CASE("verify row for the ground state") {
    const VerifyRow r = verify_state({1, 0.02});
    CHECK(r.all_converged());
    CHECK(r.failures.empty());
    CHECK(r.residual_abs < 1e-12);
    CHECK(r.termination_defect == doctest::Approx(0.02 * 0.02 / 16.0).epsilon(1e-3));
    REQUIRE(r.newton_deviation);
    CHECK(*r.newton_deviation < 1e-14);
    REQUIRE(r.truncation_deviation);
    REQUIRE(r.shooting_deviation);
    REQUIRE(r.shooting_mismatch);
    CHECK(*r.shooting_mismatch < 1e-10);
}

TEST_CASE("verify records failures instead of throwing") {
    const VerifyRow r = verify_state({2, 0.02});
    CHECK(r.newton_converged);
    CHECK(r.shooting_converged);
    CHECK_FALSE(r.truncation_converged);
    CHECK_FALSE(r.all_converged());
    CHECK_FALSE(r.failures.empty());
}

TEST_CASE("physical branch over the grid") {
    for (double a : kGridAlphas) {
        for (int n = 1; n <= 20; ++n) {
            const ComplexOmega w = omega_exact({n, a});
            CHECK(w.re() > 0.0);
            CHECK(w.re() < 1.0);
            CHECK(w.im() < 0.0);
        }
    }
}

TEST_CASE("exact spectrum follows the scaling laws to leading order") {
    for (double a : {1e-3, 1e-2, 0.05}) {
        for (int n : {1, 2, 5}) {
            const Complex d = oracle::omega_minus_one(n, a);
            const ExpansionTerms t = expansion_terms({n, a});
            CHECK(std::abs(-d.real() / t.binding - 1.0) < a * a);
            CHECK(std::abs(-d.imag() / t.decay - 1.0) < a * a);
        }
    }
}

TEST_CASE("approximate decay width and time scale exactly in alpha") {
    const PhysicalConstants c = constants();
    for (double a : {1e-3, oracle::kAlphaFs, 0.05}) {
        for (int n = 1; n <= 10; ++n) {
            for (double s : {0.5, 2.0, 0.25}) {
                CHECK(omega_approx({n, s * a}).im() == s * s * s * omega_approx({n, a}).im());
                CHECK(decay_time_approx({n, s * a}, c) == decay_time_approx({n, a}, c) / (s * s * s));
            }
        }
    }
}

TEST_CASE("Newton is idempotent") {
    for (double a : kGridAlphas) {
        for (int n : {1, 3, 20}) {
            const StateSpec s{n, a};
            const ComplexOmega root = solve_quantization(s);
            CHECK(std::abs(solve_quantization(s, root).value - root.value) < 1e-14);
        }
    }
}

TEST_CASE("sweep examples") {
    const PhysicalConstants c = constants();
    {
        const std::vector<int> ns = {1, 2, 3};
        const std::vector<double> as = {oracle::kAlphaFs};
        const auto rows = sweep(ns, as, Method::exact, c);
        REQUIRE(rows.size() == 3);
        CHECK(std::abs(rows[0].binding_energy_ev) > std::abs(rows[1].binding_energy_ev));
        CHECK(std::abs(rows[1].binding_energy_ev) > std::abs(rows[2].binding_energy_ev));
    }
    {
        const std::vector<int> ns = {1};
        const std::vector<double> as = {oracle::kAlphaFs, 0.5 * oracle::kAlphaFs};
        const auto rows = sweep(ns, as, Method::approx, c);
        // 1 - t loses the low bits of t, so the ratio is 4 only to rounding.
        CHECK(rows[0].binding_energy_ev / rows[1].binding_energy_ev == doctest::Approx(4.0).epsilon(1e-9));
    }
    {
        // Exact and approximate ground-state binding differ at the 1e-4 eV level.
        const std::vector<int> ns = {1};
        const std::vector<double> as = {oracle::kAlphaFs};
        const double e = sweep(ns, as, Method::exact, c)[0].binding_energy_ev;
        const double p = sweep(ns, as, Method::approx, c)[0].binding_energy_ev;
        CHECK(std::abs(e - p) == doctest::Approx(oracle::kBindingExact1 - oracle::kBindingApprox1).epsilon(1e-6));
        CHECK(std::abs(e - p) == doctest::Approx(3.396036706e-4).epsilon(1e-6));
    }
}
