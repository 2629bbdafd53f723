#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <utility>

namespace ffamp {

using Complex = std::complex<double>;

/// Independent quadrature noise sources of the linearized feed-forward model.
enum class NoiseModeId : std::size_t {
    InputAmplitude = 0,
    InputPhase,
    TapVacuumAmplitude,
    TapVacuumPhase,
    HomodyneMismatchPhase,
    DetectorVacuum1,
    DetectorVacuum2,
};

inline constexpr std::size_t kNoiseModeCount = 7;

inline constexpr std::array<NoiseModeId, kNoiseModeCount> kAllNoiseModes = {
    NoiseModeId::InputAmplitude,        NoiseModeId::InputPhase,
    NoiseModeId::TapVacuumAmplitude,    NoiseModeId::TapVacuumPhase,
    NoiseModeId::HomodyneMismatchPhase, NoiseModeId::DetectorVacuum1,
    NoiseModeId::DetectorVacuum2,
};

std::string_view to_string(NoiseModeId id);

/// Linear combination of noise-mode quadratures at a single analysis frequency.
///
/// Coefficients are stored densely; an id is "present" iff its coefficient is
/// exactly nonzero. All coefficients are finite.
class QuadratureExpansion {
public:
    QuadratureExpansion() = default;
    explicit QuadratureExpansion(double frequency_hz);
    QuadratureExpansion(std::initializer_list<std::pair<NoiseModeId, Complex>> terms,
                        double frequency_hz = 0.0);

    Complex coefficient(NoiseModeId id) const { return coeffs_[index(id)]; }
    bool contains(NoiseModeId id) const { return coeffs_[index(id)] != Complex{}; }
    /// Number of present (nonzero) terms.
    std::size_t size() const;
    bool empty() const { return size() == 0; }
    double frequency() const { return frequency_; }

    /// Throws std::invalid_argument on a non-finite coefficient.
    void set(NoiseModeId id, Complex value);

    friend bool operator==(const QuadratureExpansion&, const QuadratureExpansion&) = default;

private:
    static constexpr std::size_t index(NoiseModeId id) { return static_cast<std::size_t>(id); }

    std::array<Complex, kNoiseModeCount> coeffs_{};
    double frequency_ = 0.0;
};

/// Per-mode spectral variance in QNL units (vacuum = 1).
class SourceVariances {
public:
    /// Every mode at the quantum noise limit.
    static SourceVariances vacuum();
    /// Vacuum everywhere except the input phase quadrature.
    static SourceVariances with_input_phase(double v_phase_in);

    /// Throws std::invalid_argument for negative or non-finite values.
    void set(NoiseModeId id, double variance);
    std::optional<double> get(NoiseModeId id) const {
        return values_[static_cast<std::size_t>(id)];
    }

private:
    std::array<std::optional<double>, kNoiseModeCount> values_{};
};

/// ca*a + cb*b, coefficient-wise. Throws std::invalid_argument if the
/// expansions belong to different analysis frequencies.
QuadratureExpansion scale_add(const QuadratureExpansion& a, Complex ca,
                              const QuadratureExpansion& b, Complex cb);

/// Sum over modes of |coefficient|^2 * variance. Throws std::invalid_argument
/// if a present mode has no variance entry.
double variance_of(const QuadratureExpansion& e, const SourceVariances& v);

/// 10*log10(x); throws std::invalid_argument for x <= 0.
double db_from_linear(double x);
double linear_from_db(double db);

}  // namespace ffamp
