#pragma once

#include "ffamp/network.hpp"
#include "ffamp/psd.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace ffamp {

/// Frequency-flat feed-forward response: r[n] = K i[n - delay]. K is taken
/// from NetworkParams::gain and must be real.
struct FlatKernel {
    std::size_t delay_samples = 0;
};

/// Two-pole resonator with zeros at DC and Nyquist, scaled to |H| = gain at
/// the centre frequency.
struct BandpassKernel {
    double center_hz = 0.0;
    double bandwidth_hz = 0.0;
    double gain = 0.0;
};

using FeedForwardKernel = std::variant<FlatKernel, BandpassKernel>;

struct SimConfig {
    NetworkParams params;
    double signal_frequency = 0.0;  ///< Hz, coherent phase tone on the input
    double signal_amplitude = 0.0;  ///< tone amplitude in quadrature units
    double sample_rate = 1.0;       ///< Hz
    double duration = 0.0;          ///< s
    FeedForwardKernel kernel = FlatKernel{};
    std::uint64_t seed = 0;
    /// Samples per RNG block. Block b draws from an engine seeded by
    /// (seed, b), so streams do not depend on thread scheduling.
    std::size_t block_size = 4096;
    unsigned threads = 1;

    std::size_t sample_count() const;
    /// Throws std::invalid_argument (Nyquist, length, params, kernel).
    void validate() const;
};

inline constexpr std::size_t kMinSimSamples = std::size_t{1} << 14;
inline constexpr double kOracleSigmas = 3.0;
inline constexpr std::size_t kDefaultSegments = 64;

/// Unit-variance white Gaussian draws for each noise mode, indexed by
/// NoiseModeId. Input-phase excess noise and the signal tone are applied
/// later, in propagate().
struct NoiseStreams {
    std::array<std::vector<double>, kNoiseModeCount> modes;

    std::span<const double> operator[](NoiseModeId id) const {
        return modes[static_cast<std::size_t>(id)];
    }
};

struct QuadratureStreams {
    std::vector<double> amplitude;     ///< output amplitude quadrature
    std::vector<double> phase;         ///< output phase quadrature
    std::vector<double> photocurrent;  ///< in-loop homodyne current
    std::vector<double> correction;    ///< modulator phase displacement
    double sample_rate = 1.0;

    /// cos(phi) * amplitude + sin(phi) * phase
    std::vector<double> quadrature(double phi) const;
};

/// Engine seed for block `block` of a run seeded with `seed` (SplitMix64).
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);

NoiseStreams generate_noise(const SimConfig& c);

/// Causal convolution of the photocurrent with the feed-forward kernel.
std::vector<double> apply_kernel(const SimConfig& c, std::span<const double> photocurrent);

/// Frequency response of the kernel at f (for the flat kernel: K e^{-i w d}).
Complex kernel_response(const SimConfig& c, double frequency_hz);

/// Runs the network sample by sample on the supplied noise draws.
QuadratureStreams propagate(const SimConfig& c, const NoiseStreams& noise);

/// generate_noise followed by propagate.
QuadratureStreams simulate_streams(const SimConfig& c);

struct OracleRow {
    double phi = 0.0;
    double mc_mean = 0.0;
    double mc_standard_error = 0.0;
    double analytic = 0.0;        ///< spectrum_coefficient
    double analytic_paper = 0.0;  ///< spectrum_paper
    double z_score = 0.0;         ///< (mc - analytic) / se
    bool pass = false;
};

struct OracleReport {
    std::vector<OracleRow> rows;
    std::size_t segments = 0;
    std::size_t segment_length = 0;

    bool all_pass() const;
};

/// Simulates once, then for each phi compares the band-averaged output
/// spectrum (DC and the bins around the signal tone excluded) with
/// spectrum_coefficient. Requires a flat kernel with zero delay and a real
/// gain.
OracleReport oracle_compare(const SimConfig& c, std::span<const double> phi_list,
                            std::size_t segment_count = kDefaultSegments);

}  // namespace ffamp
