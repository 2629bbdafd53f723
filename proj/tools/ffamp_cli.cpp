// Command-line front end for the phase feed-forward noise model.

#include "ffamp/analysis.hpp"
#include "ffamp/io.hpp"
#include "ffamp/montecarlo.hpp"
#include "ffamp/network.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string formula;
    std::string domain;
    bool detected = false;
    bool compare = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> points;
    std::optional<double> phi;
    std::string trace_path;
};

template <typename T>
void output(const T& value, const Options& o, ffamp::OutputFormat fallback) {
    const auto format = o.format.empty() ? fallback : ffamp::parse_output_format(o.format);
    if (o.out_path.empty()) {
        ffamp::write(std::cout, value, format);
    } else {
        ffamp::emit(value, o.out_path, format);
    }
}

ffamp::Config resolve(const Options& o) {
    ffamp::Config c = o.config_path.empty() ? ffamp::parse_config("{}") : ffamp::load_config(o.config_path);
    if (!o.formula.empty()) c.formula = ffamp::parse_formula(o.formula);
    if (!o.domain.empty()) c.fit_domain = ffamp::parse_fit_domain(o.domain);
    if (o.detected) c.detected = true;
    if (o.seed) c.simulation.seed = *o.seed;
    if (o.points) c.sweep_points = *o.points;
    if (o.phi) c.phi = *o.phi;
    return c;
}

void run_spectrum(const ffamp::Config& c, const Options& o) {
    const auto& p = c.network;
    ffamp::Record r{{"phi_rad", c.phi},
                    {"spectrum_coefficient", ffamp::spectrum_coefficient(p, c.phi)},
                    {"spectrum_paper", ffamp::spectrum_paper(p, c.phi)}};
    const double chosen = ffamp::evaluate_spectrum(p, c.phi, c.formula, c.detected);
    r.emplace_back(c.detected ? "variance_detected" : "variance", chosen);
    r.emplace_back(c.detected ? "variance_detected_db" : "variance_db", ffamp::db_from_linear(chosen));
    output(r, o, ffamp::OutputFormat::Json);
}

void run_sweep(const ffamp::Config& c, const Options& o) {
    if (o.compare) {
        output(ffamp::to_table(ffamp::compare_formulas(c.network, c.sweep_points)), o,
               ffamp::OutputFormat::Csv);
        return;
    }
    output(ffamp::to_table(ffamp::run_sweep(c.network, c.sweep_points, c.formula, c.detected)), o,
           ffamp::OutputFormat::Csv);
}

void run_optimize(const ffamp::Config& c, const Options& o) {
    const auto& p = c.network;
    const double k_opt = ffamp::optimal_gain(p.epsilon, p.eta_h1, p.eta_d1);
    ffamp::NetworkParams at_opt = p;
    at_opt.gain = k_opt;
    const double g_opt = ffamp::signal_power_gain(at_opt);
    const double g = ffamp::signal_power_gain(p);
    ffamp::Record r{
        {"ideal_gain", ffamp::ideal_gain(p.epsilon)},
        {"optimal_gain", k_opt},
        {"max_transfer_ratio", ffamp::max_transfer_ratio(p.epsilon, p.eta_h1, p.eta_d1)},
        {"transfer_ratio_at_optimal", ffamp::transfer_ratio(at_opt, 1.0)},
        {"signal_gain_at_optimal", g_opt},
        {"gain", p.gain.real()},
        {"gain_imag", p.gain.imag()},
        {"transfer_ratio", ffamp::transfer_ratio(p, 1.0)},
        {"signal_gain", g},
        {"signal_gain_db", ffamp::db_from_linear(g)},
        {"phase_variance", ffamp::phase_variance(p)},
    };
    // The phase-insensitive comparison only exists for amplifying gains.
    if (g >= 1.0) r.emplace_back("pia_transfer_ratio", ffamp::pia_transfer_ratio(g));
    output(r, o, ffamp::OutputFormat::Json);
}

void run_snr(const ffamp::Config& c, const Options& o) {
    if (!c.snr) throw std::invalid_argument("snr: config has no 'snr' block");
    output(ffamp::to_record(ffamp::report_snr(*c.snr)), o, ffamp::OutputFormat::Json);
}

void run_montecarlo(const ffamp::Config& c, const Options& o) {
    const auto report = ffamp::oracle_compare(c.simulation, c.mc_phis, c.mc_segments);
    output(ffamp::to_table(report), o, ffamp::OutputFormat::Csv);
    if (!report.all_pass()) {
        throw std::runtime_error("montecarlo: estimate outside 3 standard errors of the analytic spectrum");
    }
}

void run_fit(const ffamp::Config& c, const Options& o) {
    const auto trace = ffamp::read_sweep_csv(o.trace_path, c.detected);
    ffamp::FitOptions fo;
    fo.formula = c.formula;
    fo.domain = c.fit_domain;
    output(ffamp::to_record(ffamp::fit_gain(trace, c.network, fo)), o, ffamp::OutputFormat::Json);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase feed-forward amplifier noise model"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out_path, "Output file (default: stdout)");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--formula", o.formula, "Spectrum formula")
            ->check(CLI::IsMember({"paper", "coefficient"}));
        sub->add_flag("--detected", o.detected, "Apply verification detector efficiency");
        sub->add_option("--seed", o.seed, "Monte Carlo seed");
        sub->add_option("--points", o.points, "Sweep points")->check(CLI::PositiveNumber);
    };

    auto* spectrum = app.add_subcommand("spectrum", "Output variance at one quadrature angle");
    add_common(spectrum);
    spectrum->add_option("--phi", o.phi, "Quadrature angle in radians");
    auto* sweep = app.add_subcommand("sweep", "Variance versus local-oscillator phase");
    add_common(sweep);
    sweep->add_flag("--compare", o.compare, "Tabulate both spectrum formulas and their difference");
    auto* optimize = app.add_subcommand("optimize", "Ideal and optimal gains, transfer ratios");
    add_common(optimize);
    auto* snr = app.add_subcommand("snr", "Infer SNRs and transfer ratio from measured levels");
    add_common(snr);
    auto* mc = app.add_subcommand("montecarlo", "Time-domain simulation against the analytic spectrum");
    add_common(mc);
    auto* fit = app.add_subcommand("fit", "Fit the feed-forward gain to a sweep CSV");
    add_common(fit);
    fit->add_option("trace", o.trace_path, "CSV trace (phase_rad,variance_linear,variance_db)")
        ->required()
        ->check(CLI::ExistingFile);
    fit->add_option("--domain", o.domain, "Residual domain")->check(CLI::IsMember({"linear", "db"}));

    CLI11_PARSE(app, argc, argv);

    try {
        const ffamp::Config c = resolve(o);
        if (*spectrum) run_spectrum(c, o);
        if (*sweep) run_sweep(c, o);
        if (*optimize) run_optimize(c, o);
        if (*snr) run_snr(c, o);
        if (*mc) run_montecarlo(c, o);
        if (*fit) run_fit(c, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
