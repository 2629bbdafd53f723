#pragma once

#include "ffamp/network.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace ffamp {

enum class SpectrumFormula { Paper, Coefficient };
enum class FitDomain { Linear, Decibel };

SpectrumFormula parse_formula(std::string_view name);
FitDomain parse_fit_domain(std::string_view name);
std::string_view to_string(SpectrumFormula f);
std::string_view to_string(FitDomain d);

inline constexpr std::size_t kDefaultSweepPoints = 361;
inline constexpr std::size_t kMinSweepPoints = 8;

/// Output spectrum versus local-oscillator phase.
struct SweepTrace {
    std::vector<double> phase;  ///< radians, ascending, within [0, 2 pi]
    std::vector<double> variance_linear;
    std::vector<double> variance_db;
    bool detected = false;  ///< eta_det2 applied

    std::size_t size() const { return phase.size(); }
    /// Throws std::invalid_argument on length mismatch, unordered phases or
    /// a dB column inconsistent with the linear column.
    void validate() const;
};

/// Spectrum at one angle, optionally seen through the verification detector.
double evaluate_spectrum(const NetworkParams& p, double phi, SpectrumFormula formula,
                         bool detected);

/// Samples phi = 2 pi i / (n - 1), i = 0..n-1.
SweepTrace run_sweep(const NetworkParams& p, std::size_t n_points, SpectrumFormula formula,
                     bool detected);

struct FitResult {
    double k_fit = 0.0;
    double residual_rms = 0.0;
    std::size_t iterations = 0;
};

struct FitOptions {
    SpectrumFormula formula = SpectrumFormula::Paper;
    FitDomain domain = FitDomain::Linear;
    /// Golden-section stops once the bracket is narrower than this.
    double tolerance = 1e-6;
    std::size_t grid_points = 400;
};

/// Least-squares fit of a real, nonnegative gain K to a sweep. The gain in
/// `p` is ignored. Coarse grid over [0, K_max], then golden-section search in
/// the bracket around the best grid point. K_max = 4 max(1, ideal_gain).
FitResult fit_gain(const SweepTrace& trace, const NetworkParams& p, const FitOptions& options = {});

/// Measured dB levels for the input and output detection stages.
struct SnrLevels {
    double input_total_db = 0.0;
    double input_noise_db = 0.0;
    double input_eta = 1.0;
    double output_total_db = 0.0;
    double output_noise_db = 0.0;
    double output_eta = 1.0;
};

/// Throws std::invalid_argument when the inferred input SNR is zero (t_s
/// undefined) or either stage is rejected by infer_snr.
SnrReport report_snr(const SnrLevels& levels);

/// Paper-form and coefficient-form spectra side by side.
struct FormulaComparison {
    std::vector<double> phase;
    std::vector<double> paper;
    std::vector<double> coefficient;

    double max_abs_difference() const;
};

FormulaComparison compare_formulas(const NetworkParams& p, std::size_t n_points);

}  // namespace ffamp
