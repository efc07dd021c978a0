#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dispersim/dispersim.hpp"

namespace {

using namespace dispersim;

enum ExitCode { ok = 0, invalid = 1, nonconvergent = 2 };

struct PointOptions {
    std::string caseLetter;
    double phi0 = 0.0;
    double alphaL = 0.0;
    double betaL = 0.0;
    double sigma = 1.0;
    double b = 20.0;
    double lambda = 5.0;
    double relTol = QuadratureSpec::two_d().relTol;
    int grid = PhaseGrid{}.points;
};

void add_point_options(CLI::App* cmd, PointOptions& o, bool withPhase) {
    cmd->add_option("case", o.caseLetter, "Case letter A-L")->required();
    if (withPhase) {
        cmd->add_option("--phi0", o.phi0, "Nondispersive phase (rad)")->required();
    }
    cmd->add_option("--alphaL", o.alphaL, "First-order dispersion times length");
    cmd->add_option("--betaL", o.betaL, "Second-order dispersion times length");
    cmd->add_option("--sigma", o.sigma, "Squared inverse bandwidth (> 0)");
    cmd->add_option("--b", o.b, "Crystal parameter b (case L)");
    cmd->add_option("--lambda", o.lambda, "Crystal ratio lambda (case L)");
    cmd->add_option("--relTol", o.relTol, "Relative tolerance of the case L quadrature");
    if (!withPhase) {
        cmd->add_option("--grid", o.grid, "Phase grid points");
    }
}

std::vector<PhaseFourierSeries> point_series(const PointOptions& o) {
    const CaseId id = parse_case_id(o.caseLetter);
    const DispersionParams p{o.alphaL, o.betaL, o.sigma, o.phi0};
    require_positive_sigma(p.sigma);
    QuadratureSpec q = QuadratureSpec::two_d();
    q.relTol = o.relTol;
    std::optional<CrystalParams> crystal;
    if (id == CaseId::L) {
        crystal = CrystalParams::from_b_lambda(o.b, o.lambda);
        validate(*crystal);
    }
    return case_series(id, p, crystal, q);
}

int cmd_cases() {
    for (const auto& c : case_catalog()) {
        std::printf("%c  %d  %-3s  %-9s  %s\n", to_char(c.id), c.photons, std::string(to_string(c.interferometer)).c_str(),
                    std::string(to_string(c.family)).c_str(), std::string(to_string(c.correlation)).c_str());
    }
    return ok;
}

int cmd_prob(const PointOptions& o) {
    const CaseId id = parse_case_id(o.caseLetter);
    OutcomeDistribution d;
    if (id == CaseId::L) {
        d = reconstruct(point_series(o), o.phi0);
    } else {
        d = analytic_distribution(id, {o.alphaL, o.betaL, o.sigma, o.phi0});
    }
    for (int l = 0; l <= d.photons; ++l) {
        std::printf("P(%d,%d)=%.12f\n", d.photons - l, l, clamp_probability(d.probs[static_cast<std::size_t>(l)]));
    }
    return ok;
}

int cmd_mi(const PointOptions& o) {
    PhaseGrid grid{o.grid};
    const auto mi = mutual_information(point_series(o), grid);
    std::printf("%.12f\n", mi.bits);
    return ok;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int write_table(const SweepConfig& cfg, unsigned threads, bool timestamp, const std::string& out) {
    auto table = run_sweep(cfg, threads);
    if (timestamp) {
        table.timestamp = utc_timestamp();
    }
    const std::string csv = emit_csv(table);
    if (out.empty() || out == "-") {
        std::cout << csv;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) {
            throw InvalidArgument("cannot open output file " + out);
        }
        f << csv;
    }
    int code = ok;
    for (const auto& row : table.rows) {
        if (row.failure) {
            std::cerr << "failed case " << to_char(row.id) << " at " << to_string(cfg.sweepParam) << "="
                      << row.sweepValue << ": " << *row.failure << "\n";
            if (row.nonConvergence) {
                code = nonconvergent;
            } else if (code == ok) {
                code = invalid;
            }
        }
    }
    return code;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw InvalidArgument("cannot read config file " + path);
    }
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}

int main(int argc, char** argv) {
    CLI::App app{"Dispersive interferometer outcome probabilities and phase mutual information"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dispersim::version));

    unsigned threads = 0;
    bool timestamp = false;
    std::string out;
    std::string configPath;
    std::string preset;
    PointOptions probOpts, miOpts;

    app.add_subcommand("cases", "Print the catalog of input cases");
    auto* prob = app.add_subcommand("prob", "Print the outcome distribution at one phase");
    add_point_options(prob, probOpts, true);
    auto* mi = app.add_subcommand("mi", "Print the mutual information in bits");
    add_point_options(mi, miOpts, false);
    auto* sweep = app.add_subcommand("sweep", "Run a sweep from a JSON config and write CSV");
    sweep->add_option("--config", configPath, "JSON run configuration")->required();
    auto* figure = app.add_subcommand("figure", "Run a figure preset and write CSV");
    figure->add_option("name", preset, "Preset name")->required();
    for (auto* cmd : {sweep, figure}) {
        cmd->add_option("--out", out, "Output CSV file (default stdout)");
        cmd->add_option("--threads", threads, "Worker threads (default DISPERSIM_THREADS or all cores)");
        cmd->add_flag("--timestamp", timestamp, "Record the generation time in the CSV metadata");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid;
    }

    try {
        if (app.got_subcommand("cases")) {
            return cmd_cases();
        }
        if (prob->parsed()) {
            return cmd_prob(probOpts);
        }
        if (mi->parsed()) {
            return cmd_mi(miOpts);
        }
        if (sweep->parsed()) {
            return write_table(parse_config(read_file(configPath)), threads, timestamp, out);
        }
        if (figure->parsed()) {
            return write_table(figure_preset(preset), threads, timestamp, out);
        }
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nonconvergent;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    }
    return invalid;
}
