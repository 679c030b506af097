#include "pps/constants.hpp"

#include "pps/error.hpp"

#include <cmath>
#include <string>

namespace pps {

namespace {

double checked(const std::optional<double>& value, double fallback, const char* name) {
    if (!value) return fallback;
    if (!std::isfinite(*value) || *value <= 0.0) {
        throw InvalidInput(std::string(name) + " override must be finite and positive");
    }
    return *value;
}

}  // namespace

PhysicalConstants constants(const ConstantOverrides& overrides) {
    PhysicalConstants c;
    c.electron_rest_energy_ev =
        checked(overrides.electron_rest_energy_ev, c.electron_rest_energy_ev, "electron_rest_energy");
    c.hbar_ev_s = checked(overrides.hbar_ev_s, c.hbar_ev_s, "hbar");
    c.alpha_fs = checked(overrides.alpha_fs, c.alpha_fs, "alpha_fs");
    if (c.alpha_fs >= 1.0) throw InvalidInput("alpha_fs override must be below 1");
    return c;
}

Observables omega_to_observables(ComplexOmega omega, const PhysicalConstants& consts) {
    if (!std::isfinite(omega.re()) || !std::isfinite(omega.im())) {
        throw NonphysicalFrequency("omega is not finite");
    }
    if (omega.re() <= 0.0) throw NonphysicalFrequency("Re(omega) must be positive");

    const double pair = consts.pair_rest_energy_ev();
    Observables obs;
    obs.binding_energy_ev = pair * (omega.re() - 1.0);
    obs.annihilation_energy_ev = pair + obs.binding_energy_ev;
    if (omega.im() != 0.0) {
        obs.proper_decay_time_s = consts.hbar_ev_s / (pair * std::abs(omega.im()));
    }
    return obs;
}

}  // namespace pps
