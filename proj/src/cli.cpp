#include "pps/cli.hpp"

#include "pps/output.hpp"
#include "pps/radial.hpp"
#include "pps/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pps {

namespace {

// Help text travels out of parse_args through this; main_entry prints it.
struct HelpRequested {
    std::string text;
};

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw UsageError("empty item in list '" + text + "'");
        out.push_back(item.substr(b, e - b + 1));
    }
    if (out.empty() || text.back() == ',') throw UsageError("empty item in list '" + text + "'");
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const std::string& s : items) out += (out.empty() ? "" : ",") + s;
    return out;
}

int to_int(const std::string& s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw UsageError("not an integer: '" + s + "'");
    return v;
}

double to_real(const std::string& s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError("not a finite number: '" + s + "'");
    }
    return v;
}

Subcommand parse_subcommand(const std::string& s) {
    if (s == "spectrum") return Subcommand::spectrum;
    if (s == "verify") return Subcommand::verify;
    if (s == "sweep") return Subcommand::sweep;
    if (s == "wavefunction") return Subcommand::wavefunction;
    return Subcommand::constants;
}

template <class Rows, class Csv, class Json>
void emit(std::ostream& os, Format format, const Rows& rows, Csv csv, Json js) {
    if (format == Format::csv) {
        csv(os, rows);
    } else {
        os << js(rows).dump(2) << '\n';
    }
}

}  // namespace

std::string to_string(Subcommand s) {
    switch (s) {
        case Subcommand::spectrum: return "spectrum";
        case Subcommand::verify: return "verify";
        case Subcommand::sweep: return "sweep";
        case Subcommand::wavefunction: return "wavefunction";
        case Subcommand::constants: return "constants";
    }
    return "?";
}

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& item : split_commas(text)) {
        if (const auto dots = item.find(".."); dots != std::string::npos) {
            const int a = to_int(item.substr(0, dots));
            const int b = to_int(item.substr(dots + 2));
            if (b < a) throw UsageError("empty n range '" + item + "'");
            if (b - a > 100000) throw UsageError("n range too long: '" + item + "'");
            for (int n = a; n <= b; ++n) out.push_back(n);
        } else {
            out.push_back(to_int(item));
        }
    }
    for (int n : out) {
        if (n < 1) throw UsageError("n must be >= 1 (got " + std::to_string(n) + ")");
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& s : split_commas(text)) out.push_back(to_real(s));
    return out;
}

RunConfig parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Para-positronium complex spectrum: closed form, observables and numerical checks",
                 "pps"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    // List flags accept "a,b" and repeated values alike; config files deliver
    // unquoted lists pre-split.
    std::vector<std::string> n_items{"1"}, alpha_items, scale_items;
    std::string method_text = "exact", format_text = "csv";
    std::string out_path, plot_path, potential_text = "attractive";
    double tol = 1e-10;

    auto* n_opt = app.add_option("--n", n_items, "principal numbers: A..B or a,b,c")->delimiter(',');
    auto* alpha_opt =
        app.add_option("--alpha", alpha_items, "effective couplings v[,v...]")->delimiter(',');
    auto* scale_opt = app.add_option("--alpha-scale", scale_items,
                                     "couplings as multiples of alpha_fs s[,s...]")
                          ->delimiter(',');
    alpha_opt->excludes(scale_opt);
    auto* method_opt = app.add_option("--method", method_text,
                                      "exact|approx|newton|truncation|shooting");
    app.add_option("--format", format_text, "csv|json");
    auto* out_opt = app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--tol", tol, "integrator relative tolerance, in [1e-12, 1e-3]");
    auto* plot_opt = app.add_option("--plot", plot_path, "SVG plot (spectrum and sweep)");
    app.add_option("--potential", potential_text, "attractive|as_written Coulomb sign");

    const char* names[] = {"spectrum", "verify", "sweep", "wavefunction", "constants"};
    const char* blurbs[] = {"omega and observables per state", "cross-check the eigenvalue solvers",
                            "grid over n and couplings", "radial solution along the contour",
                            "physical constants in use"};
    for (int i = 0; i < 5; ++i) app.add_subcommand(names[i], blurbs[i])->fallthrough();
    app.require_subcommand(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig cfg;
    cfg.subcommand = parse_subcommand(app.get_subcommands().front()->get_name());
    const bool is_sweep = cfg.subcommand == Subcommand::sweep;

    if (n_opt->count() > 0 || !is_sweep) {
        cfg.n_values = parse_n_list(join(n_items));
    } else {
        cfg.n_values = {1, 2, 3, 4, 5};
    }

    const double alpha_fs = constants().alpha_fs;
    if (alpha_opt->count() > 0) {
        cfg.alphas = parse_real_list(join(alpha_items));
    } else {
        const std::vector<double> scales =
            scale_opt->count() > 0 ? parse_real_list(join(scale_items))
                                   : (is_sweep ? std::vector<double>{0.5, 1.0, 2.0}
                                               : std::vector<double>{1.0});
        for (double s : scales) cfg.alphas.push_back(s * alpha_fs);
    }

    const auto method = parse_method(method_text);
    if (!method) throw UsageError("method must be exact, approx, newton, truncation or shooting");
    cfg.method = *method;
    if (cfg.subcommand == Subcommand::wavefunction && method_opt->count() == 0) {
        cfg.method = Method::shooting;
    }
    const bool needs_coupling =
        cfg.method == Method::truncation || cfg.method == Method::shooting ||
        cfg.subcommand == Subcommand::verify || cfg.subcommand == Subcommand::wavefunction;
    for (double a : cfg.alphas) {
        if (!(a >= 0.0 && a < 1.0)) throw UsageError("coupling must lie in [0, 1)");
        if (needs_coupling && a == 0.0) {
            throw UsageError("coupling must be > 0 for " + to_string(cfg.subcommand) + " with method " +
                             std::string(to_string(cfg.method)));
        }
    }

    if (format_text == "csv") {
        cfg.format = Format::csv;
    } else if (format_text == "json") {
        cfg.format = Format::json;
    } else {
        throw UsageError("format must be csv or json");
    }

    if (!(tol >= 1e-12 && tol <= 1e-3)) throw UsageError("tol must lie in [1e-12, 1e-3]");
    cfg.tol = tol;

    if (potential_text == "attractive") {
        cfg.sign = PotentialSign::attractive;
    } else if (potential_text == "as_written") {
        cfg.sign = PotentialSign::as_written;
    } else {
        throw UsageError("potential must be attractive or as_written");
    }

    if (out_opt->count() > 0) cfg.out_path = out_path;
    if (plot_opt->count() > 0) {
        if (cfg.subcommand != Subcommand::spectrum && !is_sweep) {
            throw UsageError("--plot applies to spectrum and sweep only");
        }
        cfg.plot_path = plot_path;
    }
    return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    if (config.out_path) {
        file.open(*config.out_path, std::ios::binary);
        if (!file) {
            err << "pps: cannot open " << *config.out_path << " for writing\n";
            return 1;
        }
    }
    std::ostream& os = config.out_path ? static_cast<std::ostream&>(file) : out;
    const SolveOptions opts{config.tol, config.sign};
    int code = 0;

    try {
        switch (config.subcommand) {
            case Subcommand::spectrum:
            case Subcommand::sweep: {
                const auto rows = sweep(config.n_values, config.alphas, config.method, constants(), opts);
                emit(os, config.format, rows, write_spectrum_csv, spectrum_to_json);
                if (config.plot_path) {
                    std::ofstream svg(*config.plot_path, std::ios::binary);
                    if (svg) write_spectrum_svg(svg, rows);
                    if (!svg) {
                        err << "pps: cannot write plot " << *config.plot_path << '\n';
                        code = 1;
                    }
                }
                break;
            }
            case Subcommand::verify: {
                const auto rows = verify(config.n_values, config.alphas, opts);
                emit(os, config.format, rows, write_verify_csv, verify_to_json);
                for (const VerifyRow& r : rows) {
                    for (const std::string& f : r.failures) {
                        err << "pps: n=" << r.n << " alpha=" << r.alpha_eff << ": " << f << '\n';
                    }
                    if (!r.all_converged()) code = 1;
                }
                break;
            }
            case Subcommand::wavefunction: {
                std::vector<WavefunctionTable> tables;
                ShootingOptions so;
                so.tol = config.tol;
                so.sign = config.sign;
                for (double a : config.alphas) {
                    for (int n : config.n_values) {
                        const StateSpec spec{n, a};
                        const ComplexOmega omega = solve_state(spec, config.method, opts);
                        tables.push_back({n, a, omega, eigenfunction(omega, spec, so)});
                    }
                }
                emit(os, config.format, tables, write_wavefunction_csv, wavefunction_to_json);
                break;
            }
            case Subcommand::constants:
                if (config.format == Format::csv) {
                    write_constants_csv(os, constants());
                } else {
                    os << constants_to_json(constants()).dump(2) << '\n';
                }
                break;
        }
    } catch (const ConvergenceFailure& e) {
        err << "pps: convergence failure: " << e.what() << " (" << e.trace().size()
            << " iterates)\n";
        return 1;
    } catch (const std::exception& e) {
        err << "pps: " << e.what() << '\n';
        return 1;
    }

    os.flush();
    if (!os) {
        err << "pps: write failed\n";
        return 1;
    }
    return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        err << "pps: usage: " << e.what() << "\n(run with --help for options)\n";
        return 2;
    } catch (const std::exception& e) {
        err << "pps: usage: " << e.what() << '\n';
        return 2;
    }
    return run(cfg, out, err);
}

}  // namespace pps
