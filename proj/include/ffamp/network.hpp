#pragma once

#include "ffamp/quadrature.hpp"

namespace ffamp {

/// Parameters of the phase feed-forward network at one analysis frequency.
///
/// The tap beamsplitter sends a fraction `epsilon` of the input power toward
/// the modulator; the rest goes to the in-loop homodyne detector, whose
/// photocurrent drives the modulator through the electronic gain.
struct NetworkParams {
    double epsilon = 1.0;     ///< transmissivity toward the modulator arm, (0, 1]
    double eta_h1 = 1.0;      ///< in-loop homodyne mode-matching efficiency
    double eta_d1 = 1.0;      ///< in-loop photodiode quantum efficiency
    Complex gain{0.0, 0.0};   ///< feed-forward gain K
    double v_phase_in = 1.0;  ///< input phase-quadrature variance (QNL units)
    double eta_det2 = 1.0;    ///< verification homodyne efficiency eta_h2 * eta_d2

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    /// eta_h1 * eta_d1
    double eta1() const { return eta_h1 * eta_d1; }
};

/// Signal-to-noise bookkeeping for one detection stage.
struct SnrStage {
    double detected = 0.0;
    double inferred = 0.0;
};

struct SnrReport {
    double snr_detected_in = 0.0;
    double snr_inferred_in = 0.0;
    double snr_detected_out = 0.0;
    double snr_inferred_out = 0.0;
    double t_s = 0.0;

    friend bool operator==(const SnrReport&, const SnrReport&) = default;
};

/// Output quadrature at angle phi as a combination of the seven noise modes.
QuadratureExpansion output_expansion(const NetworkParams& p, double phi);

/// Output spectrum from the second moment of output_expansion: input phase
/// quadrature at p.v_phase_in, every other mode at the QNL.
double spectrum_coefficient(const NetworkParams& p, double phi);

/// Closed-form output spectrum with the alpha-angle prefactor on the input
/// term. Coincides with spectrum_coefficient on the quadrature axes and for
/// v_phase_in == 1; differs at intermediate angles otherwise.
double spectrum_paper(const NetworkParams& p, double phi);

/// Output phase-quadrature spectrum.
double phase_variance(const NetworkParams& p);

/// |sqrt(eps) + K sqrt(eta_h eta_d (1 - eps))|^2, the phase signal power gain.
double signal_power_gain(const NetworkParams& p);

/// Gain that cancels the tap vacuum with ideal detection: sqrt((1-eps)/eps).
double ideal_gain(double epsilon);

/// Gain maximizing the transfer ratio: sqrt(eta_h eta_d (1-eps)/eps).
double optimal_gain(double epsilon, double eta_h, double eta_d);

/// SNR_out / SNR_in for a phase signal of power `signal_in` riding on a
/// QNL-limited input. Independent of `signal_in`.
double transfer_ratio(const NetworkParams& p, double signal_in);

/// eps (1 - eta_h eta_d) + eta_h eta_d
double max_transfer_ratio(double epsilon, double eta_h, double eta_d);

/// Best transfer ratio of a phase-insensitive amplifier with power gain G:
/// G / (2G - 1).
double pia_transfer_ratio(double power_gain);

/// Variance seen through a detector of efficiency eta: eta v + (1 - eta).
double detected_variance(double v, double eta);

/// Detected and loss-corrected SNR from a measured signal trace level and
/// the neighbouring noise floor, both in dB relative to the QNL.
SnrStage infer_snr(double total_db, double noise_db, double eta);

}  // namespace ffamp
