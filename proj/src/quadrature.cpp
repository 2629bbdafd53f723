#include "ffamp/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ffamp {

std::string_view to_string(NoiseModeId id) {
    switch (id) {
        case NoiseModeId::InputAmplitude: return "InputAmplitude";
        case NoiseModeId::InputPhase: return "InputPhase";
        case NoiseModeId::TapVacuumAmplitude: return "TapVacuumAmplitude";
        case NoiseModeId::TapVacuumPhase: return "TapVacuumPhase";
        case NoiseModeId::HomodyneMismatchPhase: return "HomodyneMismatchPhase";
        case NoiseModeId::DetectorVacuum1: return "DetectorVacuum1";
        case NoiseModeId::DetectorVacuum2: return "DetectorVacuum2";
    }
    return "Unknown";
}

QuadratureExpansion::QuadratureExpansion(double frequency_hz) : frequency_(frequency_hz) {
    if (!std::isfinite(frequency_hz)) {
        throw std::invalid_argument("QuadratureExpansion: non-finite frequency");
    }
}

QuadratureExpansion::QuadratureExpansion(
    std::initializer_list<std::pair<NoiseModeId, Complex>> terms, double frequency_hz)
    : QuadratureExpansion(frequency_hz) {
    for (const auto& [id, c] : terms) {
        if (contains(id)) {
            throw std::invalid_argument("QuadratureExpansion: duplicate mode " +
                                        std::string(to_string(id)));
        }
        set(id, c);
    }
}

std::size_t QuadratureExpansion::size() const {
    std::size_t n = 0;
    for (const auto& c : coeffs_) {
        if (c != Complex{}) ++n;
    }
    return n;
}

void QuadratureExpansion::set(NoiseModeId id, Complex value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw std::invalid_argument("QuadratureExpansion: non-finite coefficient for " +
                                    std::string(to_string(id)));
    }
    coeffs_[index(id)] = value;
}

SourceVariances SourceVariances::vacuum() {
    SourceVariances v;
    for (auto id : kAllNoiseModes) v.set(id, 1.0);
    return v;
}

SourceVariances SourceVariances::with_input_phase(double v_phase_in) {
    auto v = vacuum();
    v.set(NoiseModeId::InputPhase, v_phase_in);
    return v;
}

void SourceVariances::set(NoiseModeId id, double variance) {
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw std::invalid_argument("SourceVariances: variance for " +
                                    std::string(to_string(id)) +
                                    " must be finite and nonnegative");
    }
    values_[static_cast<std::size_t>(id)] = variance;
}

QuadratureExpansion scale_add(const QuadratureExpansion& a, Complex ca,
                              const QuadratureExpansion& b, Complex cb) {
    if (a.frequency() != b.frequency()) {
        throw std::invalid_argument("scale_add: frequency mismatch");
    }
    QuadratureExpansion out(a.frequency());
    for (auto id : kAllNoiseModes) {
        out.set(id, ca * a.coefficient(id) + cb * b.coefficient(id));
    }
    return out;
}

double variance_of(const QuadratureExpansion& e, const SourceVariances& v) {
    double total = 0.0;
    for (auto id : kAllNoiseModes) {
        if (!e.contains(id)) continue;
        const auto var = v.get(id);
        if (!var) {
            throw std::invalid_argument("variance_of: no variance for mode " +
                                        std::string(to_string(id)));
        }
        total += std::norm(e.coefficient(id)) * *var;
    }
    return total;
}

double db_from_linear(double x) {
    if (!(x > 0.0)) {
        throw std::invalid_argument("db_from_linear: argument must be positive");
    }
    return 10.0 * std::log10(x);
}

double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace ffamp
