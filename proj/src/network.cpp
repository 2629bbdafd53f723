#include "ffamp/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ffamp {

namespace {

void require_unit_interval(double x, const char* name) {
    if (!(x > 0.0 && x <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in (0, 1]");
    }
}

// Real weights shared by the expansion and the closed forms.
struct Weights {
    double through;      // sqrt(eps)
    double tap;          // sqrt(1 - eps)
    double loop_input;   // sqrt(eta_h eta_d (1 - eps)): input phase seen by H1
    double loop_vacuum;  // sqrt(eta_h eta_d eps): tap vacuum seen by H1
    double mismatch;     // sqrt(eta_d (1 - eta_h))
    double detector;     // sqrt(1 - eta_d) / sqrt(2)
};

Weights weights_of(const NetworkParams& p) {
    const double eta = p.eta1();
    return {
        std::sqrt(p.epsilon),
        std::sqrt(1.0 - p.epsilon),
        std::sqrt(eta * (1.0 - p.epsilon)),
        std::sqrt(eta * p.epsilon),
        std::sqrt(p.eta_d1 * (1.0 - p.eta_h1)),
        std::sqrt((1.0 - p.eta_d1) / 2.0),
    };
}

}  // namespace

void NetworkParams::validate() const {
    require_unit_interval(epsilon, "epsilon");
    require_unit_interval(eta_h1, "eta_h1");
    require_unit_interval(eta_d1, "eta_d1");
    require_unit_interval(eta_det2, "eta_det2");
    if (!std::isfinite(gain.real()) || !std::isfinite(gain.imag())) {
        throw std::invalid_argument("gain must be finite");
    }
    if (!(v_phase_in >= 1.0) || !std::isfinite(v_phase_in)) {
        throw std::invalid_argument("v_phase_in must be finite and >= 1");
    }
}

QuadratureExpansion output_expansion(const NetworkParams& p, double phi) {
    p.validate();
    const Weights w = weights_of(p);
    const Complex k = p.gain;
    const double c = std::cos(phi);
    const double s = std::sin(phi);

    QuadratureExpansion e;
    e.set(NoiseModeId::InputAmplitude, w.through * c);
    e.set(NoiseModeId::InputPhase, s * (w.through + k * w.loop_input));
    e.set(NoiseModeId::TapVacuumAmplitude, -w.tap * c);
    e.set(NoiseModeId::TapVacuumPhase, s * (k * w.loop_vacuum - w.tap));
    e.set(NoiseModeId::HomodyneMismatchPhase, k * s * w.mismatch);
    e.set(NoiseModeId::DetectorVacuum1, k * s * w.detector);
    e.set(NoiseModeId::DetectorVacuum2, k * s * w.detector);
    return e;
}

double spectrum_coefficient(const NetworkParams& p, double phi) {
    return variance_of(output_expansion(p, phi), SourceVariances::with_input_phase(p.v_phase_in));
}

double spectrum_paper(const NetworkParams& p, double phi) {
    p.validate();
    const Weights w = weights_of(p);
    const Complex k = p.gain;
    const double v = p.v_phase_in;
    const double c2 = std::cos(phi) * std::cos(phi);
    const double s2 = std::sin(phi) * std::sin(phi);

    const double gain_term = std::norm(w.through + k * w.loop_input);
    const double vacuum_term = std::norm(k * w.loop_vacuum - w.tap);
    const double loss_term = std::norm(k) * (1.0 - p.eta1());

    // tan(alpha) = r tan(phi) with r^2 = gain_term / eps. Written through
    // sin/cos so phi = pi/2 resolves by continuity to sin^2(alpha) = 1.
    const double r2 = gain_term / p.epsilon;
    const double denom = r2 * s2 + c2;
    const double sin2_alpha = denom > 0.0 ? r2 * s2 / denom : 1.0;
    const double cos2_alpha = denom > 0.0 ? c2 / denom : 0.0;
    const double prefactor = std::sqrt(v * v / (sin2_alpha + v * v * cos2_alpha));

    return prefactor * (p.epsilon * c2 + gain_term * s2) + vacuum_term * s2 +
           (1.0 - p.epsilon) * c2 + loss_term * s2;
}

double phase_variance(const NetworkParams& p) {
    p.validate();
    const Weights w = weights_of(p);
    const Complex k = p.gain;
    return std::norm(w.through + k * w.loop_input) * p.v_phase_in +
           std::norm(k * w.loop_vacuum - w.tap) + std::norm(k) * (1.0 - p.eta1());
}

double signal_power_gain(const NetworkParams& p) {
    p.validate();
    const Weights w = weights_of(p);
    return std::norm(w.through + p.gain * w.loop_input);
}

double ideal_gain(double epsilon) {
    require_unit_interval(epsilon, "epsilon");
    return std::sqrt((1.0 - epsilon) / epsilon);
}

double optimal_gain(double epsilon, double eta_h, double eta_d) {
    require_unit_interval(epsilon, "epsilon");
    require_unit_interval(eta_h, "eta_h");
    require_unit_interval(eta_d, "eta_d");
    return std::sqrt(eta_h * eta_d * (1.0 - epsilon) / epsilon);
}

double transfer_ratio(const NetworkParams& p, double signal_in) {
    if (!(signal_in > 0.0) || !std::isfinite(signal_in)) {
        throw std::invalid_argument("transfer_ratio: signal_in must be positive");
    }
    NetworkParams noise_only = p;
    noise_only.v_phase_in = 1.0;
    const double snr_in = signal_in;
    const double snr_out = signal_power_gain(p) * signal_in / phase_variance(noise_only);
    return snr_out / snr_in;
}

double max_transfer_ratio(double epsilon, double eta_h, double eta_d) {
    require_unit_interval(epsilon, "epsilon");
    require_unit_interval(eta_h, "eta_h");
    require_unit_interval(eta_d, "eta_d");
    const double eta = eta_h * eta_d;
    return epsilon * (1.0 - eta) + eta;
}

double pia_transfer_ratio(double power_gain) {
    if (!(power_gain >= 1.0) || !std::isfinite(power_gain)) {
        throw std::invalid_argument("pia_transfer_ratio: power gain must be >= 1");
    }
    return power_gain / (2.0 * power_gain - 1.0);
}

double detected_variance(double v, double eta) {
    if (!(v >= 0.0)) throw std::invalid_argument("detected_variance: v must be >= 0");
    require_unit_interval(eta, "eta");
    return eta * v + (1.0 - eta);
}

SnrStage infer_snr(double total_db, double noise_db, double eta) {
    require_unit_interval(eta, "eta");
    if (!std::isfinite(total_db) || !std::isfinite(noise_db)) {
        throw std::invalid_argument("infer_snr: levels must be finite");
    }
    if (total_db < noise_db) {
        throw std::invalid_argument("infer_snr: signal level below noise floor");
    }
    const double total = linear_from_db(total_db);
    const double noise = linear_from_db(noise_db);
    const double inferred_noise = noise - (1.0 - eta);
    if (!(inferred_noise > 0.0)) {
        throw std::invalid_argument("infer_snr: inferred noise is not positive");
    }
    const double signal = total - noise;
    return {signal / noise, signal / inferred_noise};
}

}  // namespace ffamp
