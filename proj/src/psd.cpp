#include "ffamp/psd.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ffamp {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
};

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

/// Per-segment periodograms, row-major [segment][bin].
class SegmentPeriodograms {
public:
    SegmentPeriodograms(std::span<const double> series, std::size_t segment_count) {
        if (segment_count < kMinSegments) {
            throw std::invalid_argument("estimate_psd: need at least 8 segments");
        }
        length_ = series.size() / segment_count;
        if (length_ < kMinSegmentLength) {
            throw std::invalid_argument("estimate_psd: too few samples for " +
                                        std::to_string(segment_count) +
                                        " segments of >= 1024 samples");
        }
        segments_ = segment_count;
        bins_ = length_ / 2 + 1;
        power_.resize(segments_ * bins_);

        std::unique_ptr<double, FftwFree> in(fftw_alloc_real(length_));
        std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(bins_));
        std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
        {
            std::lock_guard lock(planner_mutex());
            plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(length_), in.get(), out.get(),
                                            FFTW_ESTIMATE));
        }
        const double scale = 1.0 / static_cast<double>(length_);
        for (std::size_t s = 0; s < segments_; ++s) {
            std::copy_n(series.begin() + static_cast<std::ptrdiff_t>(s * length_), length_,
                        in.get());
            fftw_execute(plan.get());
            double* row = &power_[s * bins_];
            for (std::size_t k = 0; k < bins_; ++k) {
                const double re = out.get()[k][0];
                const double im = out.get()[k][1];
                row[k] = (re * re + im * im) * scale;
            }
        }
    }

    std::size_t segments() const { return segments_; }
    std::size_t length() const { return length_; }
    std::size_t bins() const { return bins_; }
    double at(std::size_t segment, std::size_t bin) const { return power_[segment * bins_ + bin]; }

private:
    std::size_t segments_ = 0;
    std::size_t length_ = 0;
    std::size_t bins_ = 0;
    std::vector<double> power_;
};

// Mean and standard error of the mean.
std::pair<double, double> mean_and_se(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

}  // namespace

PsdEstimate estimate_psd(std::span<const double> series, std::size_t segment_count,
                         double sample_rate) {
    if (!(sample_rate > 0.0)) throw std::invalid_argument("estimate_psd: sample_rate must be > 0");
    const SegmentPeriodograms pg(series, segment_count);

    PsdEstimate est;
    est.segments = pg.segments();
    est.segment_length = pg.length();
    est.frequencies.resize(pg.bins());
    est.variance.resize(pg.bins());
    est.standard_error.resize(pg.bins());

    std::vector<double> column(pg.segments());
    for (std::size_t k = 0; k < pg.bins(); ++k) {
        for (std::size_t s = 0; s < pg.segments(); ++s) column[s] = pg.at(s, k);
        const auto [mean, se] = mean_and_se(column);
        est.frequencies[k] = sample_rate * static_cast<double>(k) / static_cast<double>(pg.length());
        est.variance[k] = mean;
        est.standard_error[k] = se;
    }
    return est;
}

BandEstimate estimate_band(std::span<const double> series, std::size_t segment_count,
                           std::size_t first_bin, std::size_t last_bin,
                           std::span<const std::size_t> skip_bins) {
    const SegmentPeriodograms pg(series, segment_count);
    if (first_bin > last_bin || last_bin >= pg.bins()) {
        throw std::invalid_argument("estimate_band: bin range out of bounds");
    }
    auto skipped = [&](std::size_t k) {
        return std::find(skip_bins.begin(), skip_bins.end(), k) != skip_bins.end();
    };

    std::size_t used = 0;
    for (std::size_t k = first_bin; k <= last_bin; ++k) used += skipped(k) ? 0 : 1;
    if (used == 0) throw std::invalid_argument("estimate_band: every bin skipped");

    std::vector<double> band_means(pg.segments());
    for (std::size_t s = 0; s < pg.segments(); ++s) {
        double sum = 0.0;
        for (std::size_t k = first_bin; k <= last_bin; ++k) {
            if (!skipped(k)) sum += pg.at(s, k);
        }
        band_means[s] = sum / static_cast<double>(used);
    }
    const auto [mean, se] = mean_and_se(band_means);
    return {mean, se, used, pg.segments()};
}

}  // namespace ffamp
