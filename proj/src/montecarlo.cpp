#include "ffamp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace ffamp {

namespace {

struct BiquadCoefficients {
    double b0, b2;  // b1 = 0
    double a1, a2;  // a0 = 1
};

BiquadCoefficients bandpass_coefficients(const BandpassKernel& k, double sample_rate) {
    const double w0 = 2.0 * std::numbers::pi * k.center_hz / sample_rate;
    const double radius = std::exp(-std::numbers::pi * k.bandwidth_hz / sample_rate);
    const double a1 = -2.0 * radius * std::cos(w0);
    const double a2 = radius * radius;
    const Complex z1 = std::polar(1.0, -w0);
    const Complex raw = (1.0 - z1 * z1) / (1.0 + a1 * z1 + a2 * z1 * z1);
    const double b0 = k.gain / std::abs(raw);
    return {b0, -b0, a1, a2};
}

void fill_block(std::uint64_t seed, std::size_t block, std::size_t begin, std::size_t end,
                NoiseStreams& out) {
    std::mt19937_64 engine(block_seed(seed, block));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t n = begin; n < end; ++n) {
        for (auto& mode : out.modes) mode[n] = gauss(engine);
    }
}

}  // namespace

std::size_t SimConfig::sample_count() const {
    const double n = std::round(duration * sample_rate);
    return n > 0.0 ? static_cast<std::size_t>(n) : 0;
}

void SimConfig::validate() const {
    params.validate();
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw std::invalid_argument("SimConfig: sample_rate must be positive");
    }
    if (!(signal_frequency >= 0.0) || !(sample_rate > 2.0 * signal_frequency)) {
        throw std::invalid_argument("SimConfig: signal frequency violates Nyquist");
    }
    if (!std::isfinite(signal_amplitude)) {
        throw std::invalid_argument("SimConfig: signal amplitude must be finite");
    }
    if (sample_count() < kMinSimSamples) {
        throw std::invalid_argument("SimConfig: duration * sample_rate must be >= 16384 samples");
    }
    if (block_size == 0) throw std::invalid_argument("SimConfig: block_size must be > 0");
    if (threads == 0) throw std::invalid_argument("SimConfig: threads must be > 0");
    if (std::holds_alternative<FlatKernel>(kernel)) {
        if (params.gain.imag() != 0.0) {
            throw std::invalid_argument("SimConfig: flat kernel needs a real gain");
        }
    } else {
        const auto& bp = std::get<BandpassKernel>(kernel);
        if (!(bp.center_hz > 0.0 && 2.0 * bp.center_hz < sample_rate)) {
            throw std::invalid_argument("SimConfig: bandpass centre outside (0, Nyquist)");
        }
        if (!(bp.bandwidth_hz > 0.0 && 2.0 * bp.bandwidth_hz < sample_rate)) {
            throw std::invalid_argument("SimConfig: bandpass bandwidth outside (0, Nyquist)");
        }
        if (!std::isfinite(bp.gain)) throw std::invalid_argument("SimConfig: bandpass gain");
    }
}

std::vector<double> QuadratureStreams::quadrature(double phi) const {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    std::vector<double> out(phase.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = c * amplitude[n] + s * phase[n];
    return out;
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
    // SplitMix64 finalizer over a Weyl-sequence position.
    std::uint64_t z = seed + (block + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

NoiseStreams generate_noise(const SimConfig& c) {
    c.validate();
    const std::size_t n = c.sample_count();
    NoiseStreams out;
    for (auto& mode : out.modes) mode.assign(n, 0.0);

    const std::size_t blocks = (n + c.block_size - 1) / c.block_size;
    auto run_blocks = [&](std::size_t first, std::size_t stride) {
        for (std::size_t b = first; b < blocks; b += stride) {
            const std::size_t begin = b * c.block_size;
            fill_block(c.seed, b, begin, std::min(n, begin + c.block_size), out);
        }
    };

    const std::size_t workers = std::min<std::size_t>(c.threads, blocks);
    if (workers <= 1) {
        run_blocks(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run_blocks, t, workers);
    }
    return out;
}

std::vector<double> apply_kernel(const SimConfig& c, std::span<const double> photocurrent) {
    std::vector<double> out(photocurrent.size(), 0.0);
    if (const auto* flat = std::get_if<FlatKernel>(&c.kernel)) {
        const double k = c.params.gain.real();
        for (std::size_t n = flat->delay_samples; n < out.size(); ++n) {
            out[n] = k * photocurrent[n - flat->delay_samples];
        }
        return out;
    }
    const auto bq = bandpass_coefficients(std::get<BandpassKernel>(c.kernel), c.sample_rate);
    // Direct form II transposed.
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double x = photocurrent[n];
        const double y = bq.b0 * x + s1;
        s1 = -bq.a1 * y + s2;
        s2 = bq.b2 * x - bq.a2 * y;
        out[n] = y;
    }
    return out;
}

Complex kernel_response(const SimConfig& c, double frequency_hz) {
    const double w = 2.0 * std::numbers::pi * frequency_hz / c.sample_rate;
    if (const auto* flat = std::get_if<FlatKernel>(&c.kernel)) {
        return c.params.gain.real() * std::polar(1.0, -w * static_cast<double>(flat->delay_samples));
    }
    const auto bq = bandpass_coefficients(std::get<BandpassKernel>(c.kernel), c.sample_rate);
    const Complex z1 = std::polar(1.0, -w);
    return (bq.b0 + bq.b2 * z1 * z1) / (1.0 + bq.a1 * z1 + bq.a2 * z1 * z1);
}

QuadratureStreams propagate(const SimConfig& c, const NoiseStreams& noise) {
    c.validate();
    const auto& p = c.params;
    const std::size_t n = noise[NoiseModeId::InputPhase].size();

    const double through = std::sqrt(p.epsilon);
    const double tap = std::sqrt(1.0 - p.epsilon);
    const double loop_input = std::sqrt(p.eta1() * (1.0 - p.epsilon));
    const double loop_vacuum = std::sqrt(p.eta1() * p.epsilon);
    const double mismatch = std::sqrt(p.eta_d1 * (1.0 - p.eta_h1));
    const double detector = std::sqrt((1.0 - p.eta_d1) / 2.0);
    const double excess = std::sqrt(p.v_phase_in);
    const double w_sig = 2.0 * std::numbers::pi * c.signal_frequency / c.sample_rate;

    const auto in_amp = noise[NoiseModeId::InputAmplitude];
    const auto in_phase = noise[NoiseModeId::InputPhase];
    const auto tap_amp = noise[NoiseModeId::TapVacuumAmplitude];
    const auto tap_phase = noise[NoiseModeId::TapVacuumPhase];
    const auto hd = noise[NoiseModeId::HomodyneMismatchPhase];
    const auto d1 = noise[NoiseModeId::DetectorVacuum1];
    const auto d2 = noise[NoiseModeId::DetectorVacuum2];

    QuadratureStreams out;
    out.sample_rate = c.sample_rate;
    out.amplitude.resize(n);
    out.phase.resize(n);
    out.photocurrent.resize(n);

    std::vector<double> input_phase(n);
    for (std::size_t i = 0; i < n; ++i) {
        input_phase[i] = excess * in_phase[i] +
                         c.signal_amplitude * std::cos(w_sig * static_cast<double>(i));
        // Phase-quadrature homodyne current of the tapped beam.
        out.photocurrent[i] = loop_input * input_phase[i] + loop_vacuum * tap_phase[i] +
                              mismatch * hd[i] + detector * (d1[i] + d2[i]);
    }
    out.correction = apply_kernel(c, out.photocurrent);
    for (std::size_t i = 0; i < n; ++i) {
        out.amplitude[i] = through * in_amp[i] - tap * tap_amp[i];
        out.phase[i] = through * input_phase[i] - tap * tap_phase[i] + out.correction[i];
    }
    return out;
}

QuadratureStreams simulate_streams(const SimConfig& c) { return propagate(c, generate_noise(c)); }

bool OracleReport::all_pass() const {
    return !rows.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const OracleRow& r) { return r.pass; });
}

OracleReport oracle_compare(const SimConfig& c, std::span<const double> phi_list,
                            std::size_t segment_count) {
    c.validate();
    const auto* flat = std::get_if<FlatKernel>(&c.kernel);
    if (flat == nullptr || flat->delay_samples != 0) {
        throw std::invalid_argument("oracle_compare: needs an undelayed flat kernel");
    }
    const std::size_t n = c.sample_count();
    const std::size_t seg_len = n / segment_count;
    if (segment_count < kMinSegments || seg_len < kMinSegmentLength) {
        throw std::invalid_argument("oracle_compare: too few samples for the segment count");
    }

    std::vector<std::size_t> skip{0};
    if (c.signal_amplitude != 0.0) {
        const double bin = c.signal_frequency * static_cast<double>(seg_len) / c.sample_rate;
        if (std::abs(bin - std::round(bin)) > 1e-9) {
            throw std::invalid_argument("oracle_compare: signal tone must sit on a bin centre");
        }
        skip.push_back(static_cast<std::size_t>(std::round(bin)));
    }

    const QuadratureStreams streams = simulate_streams(c);
    OracleReport report;
    report.segments = segment_count;
    report.segment_length = seg_len;
    for (double phi : phi_list) {
        const auto series = streams.quadrature(phi);
        const BandEstimate band = estimate_band(series, segment_count, 0, seg_len / 2, skip);
        OracleRow row;
        row.phi = phi;
        row.mc_mean = band.mean;
        row.mc_standard_error = band.standard_error;
        row.analytic = spectrum_coefficient(c.params, phi);
        row.analytic_paper = spectrum_paper(c.params, phi);
        const double diff = row.mc_mean - row.analytic;
        row.z_score = band.standard_error > 0.0 ? diff / band.standard_error : (diff == 0.0 ? 0.0 : INFINITY);
        row.pass = std::abs(diff) <= kOracleSigmas * band.standard_error;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace ffamp
