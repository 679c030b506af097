#include "pps/output.hpp"

#include "pps/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace pps {

using nlohmann::json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

namespace {

std::string opt_cell(const std::optional<double>& v) { return v ? format_number(*v) : "na"; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw InvalidInput("bad number in table: '" + s + "'");
    return v;
}

Method method_cell(const std::string& s) {
    const auto m = parse_method(s);
    if (!m) throw InvalidInput("unknown method in table: '" + s + "'");
    return *m;
}

int parse_int(const std::string& s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw InvalidInput("bad integer in table: '" + s + "'");
    return v;
}

}  // namespace

void write_spectrum_csv(std::ostream& os, std::span<const SpectrumRow> rows) {
    os << kSpectrumHeader << '\n';
    for (const SpectrumRow& r : rows) {
        os << r.n << ',' << format_number(r.alpha_eff) << ',' << format_number(r.re_omega) << ','
           << format_number(r.im_omega) << ',' << format_number(r.annihilation_energy_ev) << ','
           << format_number(r.binding_energy_ev) << ','
           << (r.decay_time_s ? format_number(*r.decay_time_s) : "inf") << ',' << to_string(r.method)
           << '\n';
    }
}

json spectrum_to_json(std::span<const SpectrumRow> rows) {
    json arr = json::array();
    for (const SpectrumRow& r : rows) {
        arr.push_back({{"n", r.n},
                       {"alpha_eff", r.alpha_eff},
                       {"re_omega", r.re_omega},
                       {"im_omega", r.im_omega},
                       {"annihilation_energy_eV", r.annihilation_energy_ev},
                       {"binding_energy_eV", r.binding_energy_ev},
                       {"decay_time_s", r.decay_time_s ? json(*r.decay_time_s) : json("inf")},
                       {"method", std::string(to_string(r.method))}});
    }
    return arr;
}

std::vector<SpectrumRow> parse_spectrum_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kSpectrumHeader) throw InvalidInput("missing spectrum header");
    std::vector<SpectrumRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 8) throw InvalidInput("spectrum row needs 8 cells: " + line);
        SpectrumRow r;
        r.n = parse_int(cells[0]);
        r.alpha_eff = parse_double(cells[1]);
        r.re_omega = parse_double(cells[2]);
        r.im_omega = parse_double(cells[3]);
        r.annihilation_energy_ev = parse_double(cells[4]);
        r.binding_energy_ev = parse_double(cells[5]);
        if (cells[6] != "inf") r.decay_time_s = parse_double(cells[6]);
        r.method = method_cell(cells[7]);
        rows.push_back(r);
    }
    return rows;
}

std::vector<SpectrumRow> spectrum_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("spectrum json must be an array");
    std::vector<SpectrumRow> rows;
    try {
        for (const json& o : j) {
            SpectrumRow r;
            r.n = o.at("n").get<int>();
            r.alpha_eff = o.at("alpha_eff").get<double>();
            r.re_omega = o.at("re_omega").get<double>();
            r.im_omega = o.at("im_omega").get<double>();
            r.annihilation_energy_ev = o.at("annihilation_energy_eV").get<double>();
            r.binding_energy_ev = o.at("binding_energy_eV").get<double>();
            const json& t = o.at("decay_time_s");
            if (!(t.is_string() && t.get<std::string>() == "inf")) r.decay_time_s = t.get<double>();
            r.method = method_cell(o.at("method").get<std::string>());
            rows.push_back(r);
        }
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("bad spectrum json: ") + e.what());
    }
    return rows;
}

void write_verify_csv(std::ostream& os, std::span<const VerifyRow> rows) {
    os << "n,alpha_eff,re_omega_exact,im_omega_exact,residual_abs,termination_defect,"
          "newton_deviation,truncation_deviation,shooting_deviation,shooting_mismatch,"
          "truncation_next2_defect,newton_converged,truncation_converged,shooting_converged\n";
    for (const VerifyRow& r : rows) {
        os << r.n << ',' << format_number(r.alpha_eff) << ',' << format_number(r.exact.re()) << ','
           << format_number(r.exact.im()) << ',' << format_number(r.residual_abs) << ','
           << format_number(r.termination_defect) << ',' << opt_cell(r.newton_deviation) << ','
           << opt_cell(r.truncation_deviation) << ',' << opt_cell(r.shooting_deviation) << ','
           << opt_cell(r.shooting_mismatch) << ',' << opt_cell(r.truncation_next2_defect) << ','
           << r.newton_converged << ',' << r.truncation_converged << ',' << r.shooting_converged
           << '\n';
    }
}

json verify_to_json(std::span<const VerifyRow> rows) {
    json arr = json::array();
    for (const VerifyRow& r : rows) {
        arr.push_back({{"n", r.n},
                       {"alpha_eff", r.alpha_eff},
                       {"re_omega_exact", r.exact.re()},
                       {"im_omega_exact", r.exact.im()},
                       {"residual_abs", r.residual_abs},
                       {"termination_defect", r.termination_defect},
                       {"newton_deviation", opt_json(r.newton_deviation)},
                       {"truncation_deviation", opt_json(r.truncation_deviation)},
                       {"shooting_deviation", opt_json(r.shooting_deviation)},
                       {"shooting_mismatch", opt_json(r.shooting_mismatch)},
                       {"truncation_next2_defect", opt_json(r.truncation_next2_defect)},
                       {"newton_converged", r.newton_converged},
                       {"truncation_converged", r.truncation_converged},
                       {"shooting_converged", r.shooting_converged},
                       {"failures", r.failures}});
    }
    return arr;
}

void write_wavefunction_csv(std::ostream& os, std::span<const WavefunctionTable> tables) {
    os << "n,alpha_eff,re_r,im_r,re_zeta_a,im_zeta_a,re_zeta_b,im_zeta_b,re_zeta_c,im_zeta_c,"
          "re_zeta_d,im_zeta_d,max_residual\n";
    for (const WavefunctionTable& t : tables) {
        for (const RadialSample& s : t.solution.samples) {
            const double res = *std::max_element(s.residuals.begin(), s.residuals.end());
            os << t.n << ',' << format_number(t.alpha_eff);
            for (Complex v : {s.r, s.zeta_a, s.zeta_b, s.zeta_c, s.zeta_d}) {
                os << ',' << format_number(v.real()) << ',' << format_number(v.imag());
            }
            os << ',' << format_number(res) << '\n';
        }
    }
}

json wavefunction_to_json(std::span<const WavefunctionTable> tables) {
    auto pair = [](Complex v) { return json::array({v.real(), v.imag()}); };
    json arr = json::array();
    for (const WavefunctionTable& t : tables) {
        json samples = json::array();
        for (const RadialSample& s : t.solution.samples) {
            samples.push_back({{"r", pair(s.r)},
                               {"zeta_a", pair(s.zeta_a)},
                               {"zeta_b", pair(s.zeta_b)},
                               {"zeta_c", pair(s.zeta_c)},
                               {"zeta_d", pair(s.zeta_d)},
                               {"residuals", s.residuals}});
        }
        arr.push_back({{"n", t.n},
                       {"alpha_eff", t.alpha_eff},
                       {"omega", pair(t.omega.value)},
                       {"error_estimate", t.solution.error_estimate},
                       {"samples", samples}});
    }
    return arr;
}

void write_constants_csv(std::ostream& os, const PhysicalConstants& c) {
    os << "name,value\n"
       << "electron_rest_energy_eV," << format_number(c.electron_rest_energy_ev) << '\n'
       << "pair_rest_energy_eV," << format_number(c.pair_rest_energy_ev()) << '\n'
       << "hbar_eV_s," << format_number(c.hbar_ev_s) << '\n'
       << "alpha_fs," << format_number(c.alpha_fs) << '\n';
}

json constants_to_json(const PhysicalConstants& c) {
    return {{"electron_rest_energy_eV", c.electron_rest_energy_ev},
            {"pair_rest_energy_eV", c.pair_rest_energy_ev()},
            {"hbar_eV_s", c.hbar_ev_s},
            {"alpha_fs", c.alpha_fs}};
}

// --- svg --------------------------------------------------------------------

namespace {

struct Curve {
    std::string label;
    std::vector<std::pair<double, double>> pts;
};

constexpr double kPanelW = 420, kPanelH = 300, kMargin = 56;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

void panel(std::ostream& os, double x0, const std::string& title, const std::string& xlabel,
           const std::string& ylabel, std::vector<Curve> curves, bool logx, bool logy) {
    auto tx = [&](double v) { return logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return logy ? std::log10(v) : v; };
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (Curve& c : curves) {
        std::erase_if(c.pts, [&](const auto& p) {
            return !std::isfinite(tx(p.first)) || !std::isfinite(ty(p.second));
        });
        for (auto [x, y] : c.pts) {
            xmin = std::min(xmin, tx(x));
            xmax = std::max(xmax, tx(x));
            ymin = std::min(ymin, ty(y));
            ymax = std::max(ymax, ty(y));
        }
    }
    const double plot_w = kPanelW - 2 * kMargin, plot_h = kPanelH - 2 * kMargin;
    os << "<g transform=\"translate(" << x0 << ",0)\">\n"
       << "<text x=\"" << kPanelW / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title << "</text>\n"
       << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << plot_w << "\" height=\""
       << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n"
       << "<text x=\"" << kPanelW / 2 << "\" y=\"" << kPanelH - 14 << "\" text-anchor=\"middle\">"
       << xlabel << "</text>\n"
       << "<text x=\"14\" y=\"" << kPanelH / 2 << "\" transform=\"rotate(-90 14," << kPanelH / 2
       << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    if (xmin < xmax || ymin < ymax) {
        if (xmin == xmax) { xmin -= 0.5; xmax += 0.5; }
        if (ymin == ymax) { ymin -= 0.5; ymax += 0.5; }
        auto px = [&](double v) { return kMargin + (tx(v) - xmin) / (xmax - xmin) * plot_w; };
        auto py = [&](double v) { return kMargin + plot_h - (ty(v) - ymin) / (ymax - ymin) * plot_h; };
        char buf[64];
        for (int i = 0; i <= 1; ++i) {
            const double xv = i ? xmax : xmin, yv = i ? ymax : ymin;
            std::snprintf(buf, sizeof buf, "%.3g", logx ? std::pow(10.0, xv) : xv);
            os << "<text x=\"" << kMargin + i * plot_w << "\" y=\"" << kMargin + plot_h + 16
               << "\" text-anchor=\"middle\" font-size=\"10\">" << buf << "</text>\n";
            std::snprintf(buf, sizeof buf, "%.4g", logy ? std::pow(10.0, yv) : yv);
            os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + plot_h - i * plot_h
               << "\" text-anchor=\"end\" font-size=\"10\">" << buf << "</text>\n";
        }
        for (std::size_t k = 0; k < curves.size(); ++k) {
            const Curve& c = curves[k];
            if (c.pts.empty()) continue;
            const char* col = kColours[k % std::size(kColours)];
            os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
            for (auto [x, y] : c.pts) os << px(x) << ',' << py(y) << ' ';
            os << "\"/>\n";
            for (auto [x, y] : c.pts) {
                os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << col
                   << "\"/>\n";
            }
            os << "<text x=\"" << kMargin + plot_w - 4 << "\" y=\"" << kMargin + 14 + 13 * k
               << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << col << "\">" << c.label
               << "</text>\n";
        }
    }
    os << "</g>\n";
}

}  // namespace

void write_spectrum_svg(std::ostream& os, std::span<const SpectrumRow> rows) {
    std::map<double, Curve> by_alpha;
    std::map<int, Curve> by_n;
    char buf[64];
    for (const SpectrumRow& r : rows) {
        Curve& a = by_alpha[r.alpha_eff];
        std::snprintf(buf, sizeof buf, "alpha = %.5g", r.alpha_eff);
        a.label = buf;
        a.pts.emplace_back(r.n, r.binding_energy_ev);
        Curve& t = by_n[r.n];
        t.label = "n = " + std::to_string(r.n);
        t.pts.emplace_back(r.alpha_eff, r.decay_time_s.value_or(INFINITY));
    }
    std::vector<Curve> left, right;
    for (auto& [_, c] : by_alpha) left.push_back(std::move(c));
    for (auto& [_, c] : by_n) {
        std::sort(c.pts.begin(), c.pts.end());
        right.push_back(std::move(c));
    }
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kPanelW << "\" height=\""
       << kPanelH << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    panel(os, 0, "Binding energy", "n", "binding energy [eV]", std::move(left), false, false);
    panel(os, kPanelW, "Proper decay time", "alpha_eff", "tau [s]", std::move(right), true, true);
    os << "</svg>\n";
}

}  // namespace pps
