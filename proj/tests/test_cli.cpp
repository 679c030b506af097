#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pps/cli.hpp"
#include "pps/output.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace pps;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "pps_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    for (std::string l; std::getline(ss, l);) lines.push_back(l);
    return lines;
}

}  // namespace

TEST_CASE("documented defaults") {
    const RunConfig c = parse_args({"spectrum", "--n", "1..3"});
    CHECK(c.subcommand == Subcommand::spectrum);
    CHECK(c.n_values == std::vector<int>{1, 2, 3});
    CHECK(c.alphas == std::vector<double>{oracle::kAlphaFs});
    CHECK(c.method == Method::exact);
    CHECK(c.format == Format::csv);
    CHECK(c.tol == 1e-10);
    CHECK_FALSE(c.out_path);
    CHECK_FALSE(c.plot_path);
    CHECK(c.sign == PotentialSign::attractive);
}

TEST_CASE("alpha scale maps onto the fine-structure constant") {
    const RunConfig c = parse_args({"sweep", "--alpha-scale", "0.5,1.0"});
    CHECK(c.alphas == std::vector<double>{0.5 * oracle::kAlphaFs, oracle::kAlphaFs});
    const RunConfig d = parse_args({"sweep", "--alpha-scale", "0.5", "2"});
    CHECK(d.alphas == std::vector<double>{0.5 * oracle::kAlphaFs, 2.0 * oracle::kAlphaFs});
}

TEST_CASE("n lists") {
    CHECK(parse_n_list("4") == std::vector<int>{4});
    CHECK(parse_n_list("2..5") == std::vector<int>{2, 3, 4, 5});
    CHECK(parse_n_list("1,4,9") == std::vector<int>{1, 4, 9});
    CHECK(parse_n_list("1..2,7") == std::vector<int>{1, 2, 7});
    CHECK_THROWS_AS(parse_n_list("5..2"), UsageError);
    CHECK_THROWS_AS(parse_n_list("a"), UsageError);
    CHECK_THROWS_AS(parse_n_list("1,,2"), UsageError);
    CHECK_THROWS_AS(parse_n_list("1,"), UsageError);
    CHECK(parse_real_list("0.1, 0.2") == std::vector<double>{0.1, 0.2});
    CHECK_THROWS_AS(parse_real_list("0.1x"), UsageError);
    CHECK_THROWS_AS(parse_real_list("inf"), UsageError);
}

TEST_CASE("n = 0 is a usage error citing the bound") {
    CHECK_THROWS_AS(parse_args({"spectrum", "--n", "0"}), UsageError);
    const Outcome o = invoke({"spectrum", "--n", "0"});
    CHECK(o.code == 2);
    CHECK(o.err.find("n must be >= 1") != std::string::npos);
    CHECK(o.out.empty());
}

TEST_CASE("usage errors exit with 2") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"spectrum", "--bogus"},
             {"frobnicate"},
             {"spectrum", "verify"},
             {"spectrum", "--method", "magic"},
             {"spectrum", "--format", "xml"},
             {"spectrum", "--alpha", "0.1", "--alpha-scale", "1"},
             {"spectrum", "--alpha", "1.5"},
             {"spectrum", "--alpha", "-0.1"},
             {"spectrum", "--tol", "1e-20"},
             {"spectrum", "--tol", "abc"},
             {"spectrum", "--potential", "repulsive"},
             {"verify", "--plot", "x.svg"},
             {"spectrum", "--alpha", "0", "--method", "shooting"},
             {"spectrum", "--config", "/nonexistent/pps.cfg"},
         }) {
        const Outcome o = invoke(args);
        CHECK_MESSAGE(o.code == 2, "args size ", args.size());
        CHECK_FALSE(o.err.empty());
    }
}

TEST_CASE("help exits cleanly") {
    const Outcome o = invoke({"--help"});
    CHECK(o.code == 0);
    CHECK(o.out.find("spectrum") != std::string::npos);
    CHECK(o.out.find("--alpha-scale") != std::string::npos);
}

TEST_CASE("ground state through the command line") {
    const Outcome o = invoke({"spectrum", "--n", "1"});
    REQUIRE(o.code == 0);
    const auto lines = csv_lines(o.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == kSpectrumHeader);
    std::istringstream in(o.out);
    const auto rows = parse_spectrum_csv(in);
    REQUIRE(rows.size() == 1);
    CHECK(std::abs(rows[0].binding_energy_ev + 6.803) <= 0.001);
    CHECK(std::abs(*rows[0].decay_time_s - 1.326e-14) <= 0.001e-14);
    CHECK(rows[0].method == Method::exact);
}

TEST_CASE("approximate decay time through the command line") {
    const Outcome o = invoke({"spectrum", "--n", "1", "--method", "approx"});
    REQUIRE(o.code == 0);
    std::istringstream in(o.out);
    const auto rows = parse_spectrum_csv(in);
    REQUIRE(rows[0].decay_time_s);
    CHECK(std::abs(*rows[0].decay_time_s - 1.3236e-14) <= 1e-16);
    CHECK(*rows[0].decay_time_s == doctest::Approx(oracle::kTauApprox1).epsilon(1e-14));
    CHECK(rows[0].method == Method::approx);
}

TEST_CASE("numbers carry 17 significant digits") {
    CHECK(format_number(-6.8025069579013753) == "-6.8025069579013753e+00");
    CHECK(format_number(1.0) == "1.0000000000000000e+00");
    CHECK(format_number(1.0 / 0.0) == "inf");
    const Outcome o = invoke({"spectrum"});
    CHECK(o.out.find('\r') == std::string::npos);
    CHECK(o.out.back() == '\n');
}

TEST_CASE("free pair prints an inf lifetime") {
    const Outcome csv = invoke({"spectrum", "--alpha", "0"});
    REQUIRE(csv.code == 0);
    CHECK(csv_lines(csv.out)[1].find(",inf,exact") != std::string::npos);
    const Outcome js = invoke({"spectrum", "--alpha", "0", "--format", "json"});
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j[0]["decay_time_s"] == "inf");
}

TEST_CASE("csv and json carry identical values") {
    const std::vector<std::string> base = {"sweep", "--n", "1..4", "--alpha", "0,0.01,0.05,0.1"};
    for (const char* method : {"exact", "approx", "newton"}) {
        auto args = base;
        args.insert(args.end(), {"--method", method});
        const Outcome csv = invoke(args);
        args.insert(args.end(), {"--format", "json"});
        const Outcome js = invoke(args);
        REQUIRE(csv.code == 0);
        REQUIRE(js.code == 0);
        std::istringstream in(csv.out);
        const auto a = parse_spectrum_csv(in);
        const auto b = spectrum_from_json(nlohmann::json::parse(js.out));
        REQUIRE(a.size() == 16);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].n == b[i].n);
            CHECK(a[i].alpha_eff == b[i].alpha_eff);
            CHECK(a[i].re_omega == b[i].re_omega);
            CHECK(a[i].im_omega == b[i].im_omega);
            CHECK(a[i].annihilation_energy_ev == b[i].annihilation_energy_ev);
            CHECK(a[i].binding_energy_ev == b[i].binding_energy_ev);
            CHECK(a[i].decay_time_s == b[i].decay_time_s);
            CHECK(a[i].method == b[i].method);
        }
    }
}

TEST_CASE("csv round trip is lossless") {
    std::vector<SpectrumRow> rows;
    for (int k = 0; k < 200; ++k) {
        const int n = 1 + k % 9;
        const double a = oracle::uniform(0.0, 0.5);
        rows.push_back(make_row({n, a}, omega_exact({n, a}), Method::exact, constants()));
    }
    std::ostringstream out;
    write_spectrum_csv(out, rows);
    std::istringstream in(out.str());
    const auto back = parse_spectrum_csv(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].alpha_eff == rows[i].alpha_eff);
        CHECK(back[i].re_omega == rows[i].re_omega);
        CHECK(back[i].im_omega == rows[i].im_omega);
        CHECK(back[i].decay_time_s == rows[i].decay_time_s);
    }
    std::istringstream bad("n,alpha\n1,2\n");
    CHECK_THROWS_AS(parse_spectrum_csv(bad), InvalidInput);
}

TEST_CASE("repeated sweeps are byte identical") {
    const std::vector<std::string> args = {"sweep", "--n", "1..6", "--alpha-scale", "0.5,1,2,4",
                                           "--method", "newton"};
    const Outcome first = invoke(args);
    REQUIRE(first.code == 0);
    for (int k = 0; k < 3; ++k) CHECK(invoke(args).out == first.out);
    const fs::path p = scratch("sweep.csv");
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", p.string()});
    const Outcome to_file = invoke(with_out);
    CHECK(to_file.code == 0);
    CHECK(to_file.out.empty());
    CHECK(slurp(p) == first.out);
}

TEST_CASE("sweep defaults") {
    const RunConfig c = parse_args({"sweep"});
    CHECK(c.n_values == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(c.alphas.size() == 3);
    const Outcome o = invoke({"sweep"});
    CHECK(csv_lines(o.out).size() == 16);
}

TEST_CASE("verify publishes all four comparison columns") {
    const Outcome o = invoke({"verify", "--n", "1", "--alpha", "0.02"});
    CHECK(o.code == 0);
    const auto lines = csv_lines(o.out);
    REQUIRE(lines.size() == 2);
    const std::string header = lines[0];
    for (const char* col : {"residual_abs", "termination_defect", "newton_deviation", "shooting_deviation",
                            "newton_converged", "truncation_converged", "shooting_converged"}) {
        CHECK(header.find(col) != std::string::npos);
    }
    CHECK(lines[1].find("na") == std::string::npos);
    CHECK(lines[1].substr(lines[1].size() - 6) == ",1,1,1");

    const Outcome js = invoke({"verify", "--n", "1", "--alpha", "0.02", "--format", "json"});
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j[0]["shooting_converged"] == true);
    CHECK(j[0]["shooting_deviation"].is_number());
    CHECK(j[0]["truncation_deviation"].is_number());
    CHECK(j[0]["failures"].empty());
}

TEST_CASE("verify exits 1 when a solver does not converge") {
    const Outcome o = invoke({"verify", "--n", "2", "--alpha", "0.02"});
    CHECK(o.code == 1);
    CHECK(o.err.find("truncation") != std::string::npos);
    CHECK(csv_lines(o.out).size() == 2);
}

TEST_CASE("convergence failure in a spectrum exits 1") {
    const Outcome o = invoke({"spectrum", "--n", "2", "--alpha", "0.02", "--method", "truncation"});
    CHECK(o.code == 1);
    CHECK(o.err.find("convergence failure") != std::string::npos);
    const Outcome w = invoke({"spectrum", "--n", "1", "--alpha", "0.02", "--method", "shooting",
                              "--potential", "as_written"});
    CHECK(w.code == 1);
}

TEST_CASE("shooting and truncation methods through the command line") {
    const Outcome s = invoke({"spectrum", "--n", "1,2", "--alpha", "0.05", "--method", "shooting"});
    REQUIRE(s.code == 0);
    std::istringstream in(s.out);
    const auto rows = parse_spectrum_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].method == Method::shooting);
    CHECK(std::abs(rows[0].re_omega - omega_exact({1, 0.05}).re()) < 1e-4);
    const Outcome t = invoke({"spectrum", "--n", "1", "--alpha", "0.05", "--method", "truncation"});
    CHECK(t.code == 0);
}

TEST_CASE("I/O failure exits 1") {
    const Outcome o = invoke({"spectrum", "--out", "/nonexistent/dir/out.csv"});
    CHECK(o.code == 1);
    CHECK(o.err.find("cannot open") != std::string::npos);
    const Outcome p = invoke({"spectrum", "--plot", "/nonexistent/dir/p.svg"});
    CHECK(p.code == 1);
}

TEST_CASE("config file with flag precedence") {
    const fs::path p = scratch("run.cfg");
    {
        std::ofstream f(p);
        f << "# sample\nn = 2..3\nalpha = 0.01,0.02\nmethod = approx\nformat = json\n";
    }
    const RunConfig c = parse_args({"spectrum", "--config", p.string()});
    CHECK(c.n_values == std::vector<int>{2, 3});
    CHECK(c.alphas == std::vector<double>{0.01, 0.02});
    CHECK(c.method == Method::approx);
    CHECK(c.format == Format::json);
    const RunConfig d = parse_args({"spectrum", "--config", p.string(), "--n", "1", "--format", "csv"});
    CHECK(d.n_values == std::vector<int>{1});
    CHECK(d.format == Format::csv);
    CHECK(d.method == Method::approx);

    {
        std::ofstream f(p);
        f << "colour = blue\n";
    }
    CHECK_THROWS_AS(parse_args({"spectrum", "--config", p.string()}), UsageError);
}

TEST_CASE("plot output") {
    const fs::path p = scratch("plot.svg");
    fs::remove(p);
    const Outcome o = invoke({"sweep", "--n", "1..4", "--alpha", "0.01,0.02,0.05", "--plot", p.string()});
    CHECK(o.code == 0);
    const std::string svg = slurp(p);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("Proper decay time") != std::string::npos);
}

TEST_CASE("wavefunction export") {
    const Outcome o = invoke({"wavefunction", "--n", "1", "--alpha", "0.05"});
    REQUIRE(o.code == 0);
    const auto lines = csv_lines(o.out);
    CHECK(lines.size() > 20);
    CHECK(lines[0].rfind("n,alpha_eff,re_r,im_r,re_zeta_a", 0) == 0);
    const Outcome js = invoke({"wavefunction", "--n", "1", "--alpha", "0.05", "--format", "json"});
    const auto j = nlohmann::json::parse(js.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["samples"].size() == lines.size() - 1);
    for (const auto& s : j[0]["samples"]) {
        for (const auto& r : s["residuals"]) CHECK(r.get<double>() < 1e-10);
    }
}

TEST_CASE("constants subcommand") {
    const Outcome o = invoke({"constants"});
    CHECK(o.code == 0);
    CHECK(o.out.find("alpha_fs,7.2973525693000004e-03") != std::string::npos);
    const auto j = nlohmann::json::parse(invoke({"constants", "--format", "json"}).out);
    CHECK(j["electron_rest_energy_eV"] == 510998.95);
}
