#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ffamp {

/// Averaged periodogram over non-overlapping rectangular-window segments.
///
/// Normalization: for a segment x[0..L) the bin power is |DFT(x)[k]|^2 / L,
/// so unit-variance white noise has expected power 1 in every bin. A tone
/// a*cos(2*pi*k0*n/L) centred on bin k0 (0 < k0 < L/2) has bin power
/// a^2 * L / 4 in bin k0 and zero elsewhere.
struct PsdEstimate {
    std::vector<double> frequencies;     ///< Hz, bins 0..L/2
    std::vector<double> variance;        ///< QNL units for unit-variance-normalized input
    std::vector<double> standard_error;  ///< inter-segment scatter / sqrt(segments)
    std::size_t segments = 0;
    std::size_t segment_length = 0;
};

/// Mean power over a range of bins, with its standard error taken from the
/// scatter of the per-segment band means.
struct BandEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t bins = 0;
    std::size_t segments = 0;
};

inline constexpr std::size_t kMinSegmentLength = 1024;
inline constexpr std::size_t kMinSegments = 8;

/// Throws std::invalid_argument when fewer than `segment_count` segments of
/// kMinSegmentLength samples fit, or segment_count < kMinSegments. Trailing
/// samples that do not fill a segment are ignored.
PsdEstimate estimate_psd(std::span<const double> series, std::size_t segment_count,
                         double sample_rate = 1.0);

/// Band-averaged power over bins [first_bin, last_bin] excluding any bin in
/// `skip_bins`. Same segmentation and normalization as estimate_psd.
BandEstimate estimate_band(std::span<const double> series, std::size_t segment_count,
                           std::size_t first_bin, std::size_t last_bin,
                           std::span<const std::size_t> skip_bins = {});

}  // namespace ffamp
