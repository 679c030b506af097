#pragma once

#include "pps/constants.hpp"
#include "pps/radial.hpp"
#include "pps/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pps {

/// 17 significant digits, e.g. -6.8025069578643649e+00.
std::string format_number(double x);

inline constexpr const char* kSpectrumHeader =
    "n,alpha_eff,re_omega,im_omega,annihilation_energy_eV,binding_energy_eV,decay_time_s,method";

void write_spectrum_csv(std::ostream& os, std::span<const SpectrumRow> rows);
nlohmann::json spectrum_to_json(std::span<const SpectrumRow> rows);

/// Inverse of write_spectrum_csv. Throws InvalidInput on a malformed table.
std::vector<SpectrumRow> parse_spectrum_csv(std::istream& is);
std::vector<SpectrumRow> spectrum_from_json(const nlohmann::json& j);

void write_verify_csv(std::ostream& os, std::span<const VerifyRow> rows);
nlohmann::json verify_to_json(std::span<const VerifyRow> rows);

struct WavefunctionTable {
    int n = 1;
    double alpha_eff = 0.0;
    ComplexOmega omega;
    RadialSolution solution;
};

void write_wavefunction_csv(std::ostream& os, std::span<const WavefunctionTable> tables);
nlohmann::json wavefunction_to_json(std::span<const WavefunctionTable> tables);

void write_constants_csv(std::ostream& os, const PhysicalConstants& c);
nlohmann::json constants_to_json(const PhysicalConstants& c);

/// Two panels: binding energy against n (one curve per coupling) and proper
/// decay time against alpha_eff on log axes (one curve per n). Panels with
/// fewer than two points are drawn empty.
void write_spectrum_svg(std::ostream& os, std::span<const SpectrumRow> rows);

}  // namespace pps
