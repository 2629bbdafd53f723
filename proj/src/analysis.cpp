#include "ffamp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ffamp {

SpectrumFormula parse_formula(std::string_view name) {
    if (name == "paper") return SpectrumFormula::Paper;
    if (name == "coefficient") return SpectrumFormula::Coefficient;
    throw std::invalid_argument("unknown formula '" + std::string(name) +
                                "' (expected paper|coefficient)");
}

FitDomain parse_fit_domain(std::string_view name) {
    if (name == "linear") return FitDomain::Linear;
    if (name == "db") return FitDomain::Decibel;
    throw std::invalid_argument("unknown fit domain '" + std::string(name) +
                                "' (expected linear|db)");
}

std::string_view to_string(SpectrumFormula f) {
    return f == SpectrumFormula::Paper ? "paper" : "coefficient";
}

std::string_view to_string(FitDomain d) { return d == FitDomain::Linear ? "linear" : "db"; }

void SweepTrace::validate() const {
    const std::size_t n = phase.size();
    if (variance_linear.size() != n || variance_db.size() != n) {
        throw std::invalid_argument("SweepTrace: column lengths differ");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(phase[i] >= -1e-9 && phase[i] <= two_pi + 1e-9)) {
            throw std::invalid_argument("SweepTrace: phase outside [0, 2pi]");
        }
        if (i > 0 && phase[i] < phase[i - 1]) {
            throw std::invalid_argument("SweepTrace: phases not ascending");
        }
        if (!(variance_linear[i] > 0.0) || !std::isfinite(variance_linear[i])) {
            throw std::invalid_argument("SweepTrace: variance must be positive and finite");
        }
        if (std::abs(db_from_linear(variance_linear[i]) - variance_db[i]) > 1e-6) {
            throw std::invalid_argument("SweepTrace: dB column inconsistent at row " +
                                        std::to_string(i));
        }
    }
}

double evaluate_spectrum(const NetworkParams& p, double phi, SpectrumFormula formula,
                         bool detected) {
    const double v = formula == SpectrumFormula::Paper ? spectrum_paper(p, phi)
                                                       : spectrum_coefficient(p, phi);
    return detected ? detected_variance(v, p.eta_det2) : v;
}

SweepTrace run_sweep(const NetworkParams& p, std::size_t n_points, SpectrumFormula formula,
                     bool detected) {
    if (n_points < kMinSweepPoints) {
        throw std::invalid_argument("run_sweep: need at least 8 points");
    }
    p.validate();
    SweepTrace t;
    t.detected = detected;
    t.phase.resize(n_points);
    t.variance_linear.resize(n_points);
    t.variance_db.resize(n_points);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        // Mirror the second half so variance(phi) == variance(2pi - phi) exactly.
        const std::size_t j = std::min(i, n_points - 1 - i);
        const double phi = step * static_cast<double>(j);
        t.phase[i] = i == j ? phi : 2.0 * std::numbers::pi - phi;
        t.variance_linear[i] = evaluate_spectrum(p, phi, formula, detected);
        t.variance_db[i] = db_from_linear(t.variance_linear[i]);
    }
    return t;
}

FitResult fit_gain(const SweepTrace& trace, const NetworkParams& p, const FitOptions& options) {
    trace.validate();
    if (trace.size() < kMinSweepPoints) {
        throw std::invalid_argument("fit_gain: trace needs at least 8 points");
    }
    if (trace.phase.back() - trace.phase.front() < std::numbers::pi - 1e-9) {
        throw std::invalid_argument("fit_gain: trace must span at least half a period");
    }
    const auto [lo_it, hi_it] =
        std::minmax_element(trace.variance_linear.begin(), trace.variance_linear.end());
    if (*hi_it - *lo_it <= 1e-12 * std::max(1.0, std::abs(*hi_it))) {
        throw std::invalid_argument("fit_gain: degenerate trace (all values equal)");
    }
    if (!(options.tolerance > 0.0) || options.grid_points < 3) {
        throw std::invalid_argument("fit_gain: bad options");
    }

    NetworkParams model = p;
    model.gain = 0.0;
    model.validate();
    const bool in_db = options.domain == FitDomain::Decibel;

    auto cost = [&](double k) {
        model.gain = k;
        double sum = 0.0;
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const double m = evaluate_spectrum(model, trace.phase[i], options.formula, trace.detected);
            const double r = in_db ? db_from_linear(m) - trace.variance_db[i]
                                   : m - trace.variance_linear[i];
            sum += r * r;
        }
        return sum;
    };

    const double k_max = 4.0 * std::max(1.0, ideal_gain(p.epsilon));
    const double step = k_max / static_cast<double>(options.grid_points - 1);
    std::size_t best = 0;
    double best_cost = cost(0.0);
    for (std::size_t i = 1; i < options.grid_points; ++i) {
        const double c = cost(step * static_cast<double>(i));
        if (c < best_cost) {
            best_cost = c;
            best = i;
        }
    }

    double a = step * static_cast<double>(best == 0 ? 0 : best - 1);
    double b = step * static_cast<double>(std::min(best + 1, options.grid_points - 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = cost(x1);
    double f2 = cost(x2);
    std::size_t iterations = 0;
    while (b - a > options.tolerance) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = cost(x2);
        }
        ++iterations;
    }

    FitResult result;
    result.k_fit = std::max(0.0, 0.5 * (a + b));
    result.residual_rms = std::sqrt(cost(result.k_fit) / static_cast<double>(trace.size()));
    result.iterations = iterations;
    return result;
}

SnrReport report_snr(const SnrLevels& levels) {
    const SnrStage in = infer_snr(levels.input_total_db, levels.input_noise_db, levels.input_eta);
    const SnrStage out =
        infer_snr(levels.output_total_db, levels.output_noise_db, levels.output_eta);
    if (!(in.inferred > 0.0)) {
        throw std::invalid_argument("report_snr: input SNR is zero, transfer ratio undefined");
    }
    return {in.detected, in.inferred, out.detected, out.inferred, out.inferred / in.inferred};
}

double FormulaComparison::max_abs_difference() const {
    double m = 0.0;
    for (std::size_t i = 0; i < phase.size(); ++i) m = std::max(m, std::abs(paper[i] - coefficient[i]));
    return m;
}

FormulaComparison compare_formulas(const NetworkParams& p, std::size_t n_points) {
    const auto paper = run_sweep(p, n_points, SpectrumFormula::Paper, false);
    const auto coeff = run_sweep(p, n_points, SpectrumFormula::Coefficient, false);
    return {paper.phase, paper.variance_linear, coeff.variance_linear};
}

}  // namespace ffamp
