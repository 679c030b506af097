#pragma once

#include <complex>
#include <optional>

namespace pps {

using Complex = std::complex<double>;

/// Physical constants in eV / seconds. Defaults are CODATA 2018.
struct PhysicalConstants {
    double electron_rest_energy_ev = 510998.95000;
    double hbar_ev_s = 6.582119569e-16;
    double alpha_fs = 7.2973525693e-3;

    double pair_rest_energy_ev() const { return 2.0 * electron_rest_energy_ev; }
};

struct ConstantOverrides {
    std::optional<double> electron_rest_energy_ev;
    std::optional<double> hbar_ev_s;
    std::optional<double> alpha_fs;
};

/// CODATA defaults with the given overrides applied.
/// Throws InvalidInput for a non-finite or non-positive override, or alpha_fs >= 1.
PhysicalConstants constants(const ConstantOverrides& overrides = {});

/// Dimensionless complex frequency Omega = hbar w / (2 m_e c^2).
struct ComplexOmega {
    Complex value{1.0, 0.0};

    ComplexOmega() = default;
    explicit ComplexOmega(Complex v) : value(v) {}
    ComplexOmega(double re, double im) : value(re, im) {}

    double re() const { return value.real(); }
    double im() const { return value.imag(); }

    friend bool operator==(const ComplexOmega&, const ComplexOmega&) = default;
};

struct Observables {
    double annihilation_energy_ev = 0.0;
    double binding_energy_ev = 0.0;
    /// Proper decay time in seconds; empty when Im(omega) = 0 (stable state).
    std::optional<double> proper_decay_time_s;

    bool infinite_lifetime() const { return !proper_decay_time_s.has_value(); }
};

/// Maps Omega to annihilation energy, binding energy and proper decay time.
/// The annihilation energy is formed as 2 m_e c^2 + binding so that the
/// identity holds bit for bit.
Observables omega_to_observables(ComplexOmega omega, const PhysicalConstants& consts);

}  // namespace pps
