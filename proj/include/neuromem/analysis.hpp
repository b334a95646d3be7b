#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace neuromem {

// Uniformly sampled scalar series.
struct Series {
    double dt = 1.0;              // us between samples
    std::vector<double> values;

    double duration() const { return values.empty() ? 0.0 : dt * double(values.size() - 1); }
};

struct SpikeConfig {
    double threshold = 0.0;        // V; 0 = auto (half the max |v| of the run)
    double hysteresis_band = 0.0;  // V; 0 = auto (10% of threshold)
    double refractory = 0.0;       // us

    void validate() const;
};

struct SpikeTrain {
    std::vector<double> times;  // us, strictly increasing
    std::string channel;
};

struct RateCurve {
    std::vector<double> t;     // us (window centers)
    std::vector<double> rate;  // kHz
    double first_window_rate = 0.0;
    double last_window_rate = 0.0;
};

struct Segment {
    double t_start = 0.0;
    double t_end = 0.0;
    int mode_label = 0;
    double dwell_time = 0.0;
    std::vector<double> features;
};

struct SegmentConfig {
    double window = 0.0;       // us; 0 = auto (series duration / 48)
    double penalty = 10.0;     // change-point acceptance penalty (feature-sigma units)
    double merge_distance = 1.5;  // centroid merge radius for mode labelling
};

// Upward Schmitt-trigger detection: a spike fires at the first sample at or
// above threshold after the signal has been below threshold - band; events
// closer than the refractory window are dropped.
SpikeTrain detect_spikes(const Series& s, const SpikeConfig& cfg);

// Sliding-window spike count converted to kHz; also reports the first/last
// window rates for adaptation ratios. Empty curve for < 2 spikes.
RateCurve rate_curve(const SpikeTrain& train, double window_us, double t_end_us = 0.0);

// (x, y) pairing of two equal-length channels.
std::vector<std::pair<double, double>> phase_portrait(const std::vector<double>& x,
                                                      const std::vector<double>& y);

// Takens delay embedding; rows = len - (dim-1)*lag, values are exact copies.
std::vector<std::vector<double>> delay_embed(const std::vector<double>& series, int dim,
                                             int lag);

struct Spectrum {
    std::vector<double> freq;   // MHz
    std::vector<double> power;  // |X|^2, mean removed, Hann window
    std::string window_name = "hann";
};

// Magnitude-squared DFT of the mean-removed, Hann-tapered series.
Spectrum power_spectrum(const Series& s);

// Sliding-window features (mean, variance, dominant frequency, spectral
// entropy) -> binary segmentation on feature distance -> nearest-centroid mode
// labels. Degenerate input yields a single segment.
std::vector<Segment> itinerancy_segments(const Series& s, const SegmentConfig& cfg);

// Grassberger-Procaccia correlation-dimension estimate of an embedded
// trajectory (slope of log C(r) over a mid-range of r).
double correlation_dimension(const std::vector<std::vector<double>>& points);

// s(t) = I(t) cos(2 pi f_c t) - Q(t) sin(2 pi f_c t) with I the baseband and
// Q a copy of I delayed by q_delay samples (zero while the delay has not
// elapsed; q_delay = 0 disables the quadrature arm). fs must exceed 2 f_c.
Series iq_modulate(const Series& baseband, double f_c_mhz, double fs_mhz,
                   std::size_t q_delay = 0);

// Mixer + windowed-sinc low-pass recovery of the in-phase baseband, with the
// filter group delay compensated.
Series envelope_demod(const Series& passband, double f_c_mhz, double fs_mhz);

// center-lag of the peak cross-correlation of b relative to a, in samples
long cross_correlation_lag(const std::vector<double>& a, const std::vector<double>& b,
                           long max_lag);

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace neuromem
