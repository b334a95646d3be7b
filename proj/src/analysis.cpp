#include "neuromem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include <fftw3.h>

#include "neuromem/errors.hpp"

namespace neuromem {

void SpikeConfig::validate() const {
    if (hysteresis_band < 0.0) throw ConfigError("invalid parameter: hysteresis_band");
    if (refractory < 0.0) throw ConfigError("invalid parameter: refractory");
}

SpikeTrain detect_spikes(const Series& s, const SpikeConfig& cfg) {
    cfg.validate();
    if (s.dt <= 0.0) throw ConfigError("detect_spikes: non-uniform or empty grid");
    SpikeTrain train;
    if (s.values.empty()) return train;

    double threshold = cfg.threshold;
    if (threshold == 0.0) {
        double vmax = 0.0;
        for (double v : s.values) vmax = std::max(vmax, std::abs(v));
        threshold = 0.5 * vmax;
        if (threshold == 0.0) return train;
    }
    const double band = cfg.hysteresis_band > 0.0 ? cfg.hysteresis_band : 0.1 * threshold;

    bool armed = s.values.front() < threshold - band;
    double last_spike = -1e300;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double v = s.values[i];
        if (armed && v >= threshold) {
            const double t = double(i) * s.dt;
            if (t - last_spike >= cfg.refractory) {
                train.times.push_back(t);
                last_spike = t;
            }
            armed = false;
        } else if (!armed && v < threshold - band) {
            armed = true;
        }
    }
    return train;
}

RateCurve rate_curve(const SpikeTrain& train, double window_us, double t_end_us) {
    if (window_us <= 0.0) throw ConfigError("rate_curve: window must be positive");
    RateCurve out;
    if (train.times.size() < 2) return out;
    const double t_end = t_end_us > 0.0 ? t_end_us : train.times.back();
    const double hop = window_us / 4.0;
    // count spikes in [t, t+window); rate in kHz = count / window_us * 1000
    std::size_t lo = 0;
    for (double t0 = 0.0; t0 + window_us <= t_end + 1e-9; t0 += hop) {
        while (lo < train.times.size() && train.times[lo] < t0) ++lo;
        std::size_t hi = lo;
        while (hi < train.times.size() && train.times[hi] < t0 + window_us) ++hi;
        out.t.push_back(t0 + 0.5 * window_us);
        out.rate.push_back(double(hi - lo) / window_us * 1000.0);
    }
    if (!out.rate.empty()) {
        out.first_window_rate = out.rate.front();
        out.last_window_rate = out.rate.back();
    }
    return out;
}

std::vector<std::pair<double, double>> phase_portrait(const std::vector<double>& x,
                                                      const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("phase_portrait: length mismatch");
    std::vector<std::pair<double, double>> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = {x[i], y[i]};
    return out;
}

std::vector<std::vector<double>> delay_embed(const std::vector<double>& series, int dim,
                                             int lag) {
    if (dim != 2 && dim != 3) throw ConfigError("delay_embed: dim must be 2 or 3");
    if (lag < 1) throw ConfigError("delay_embed: lag must be >= 1");
    const std::size_t span = std::size_t(dim - 1) * std::size_t(lag);
    if (series.size() <= span) throw ConfigError("delay_embed: series too short");
    const std::size_t rows = series.size() - span;
    std::vector<std::vector<double>> out(rows, std::vector<double>(dim));
    for (std::size_t i = 0; i < rows; ++i)
        for (int d = 0; d < dim; ++d) out[i][d] = series[i + std::size_t(d) * lag];
    return out;
}

Spectrum power_spectrum(const Series& s) {
    if (s.dt <= 0.0) throw ConfigError("power_spectrum: non-uniform or empty grid");
    const std::size_t n = s.values.size();
    Spectrum out;
    if (n < 2) return out;

    double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / double(n);
    std::vector<double> in(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * double(i) / double(n - 1));
        in[i] = (s.values[i] - mean) * w;
    }

    const std::size_t nf = n / 2 + 1;
    std::vector<std::complex<double>> spec(nf);
    // the FFTW planner is not thread-safe; executing a plan is
    static std::mutex planner_mutex;
    fftw_plan plan;
    {
        const std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_r2c_1d(int(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        const std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }

    out.freq.resize(nf);
    out.power.resize(nf);
    const double df = 1.0 / (s.dt * double(n));  // MHz (1/us)
    for (std::size_t k = 0; k < nf; ++k) {
        out.freq[k] = df * double(k);
        out.power[k] = std::norm(spec[k]);
    }
    return out;
}

// --- itinerancy segmentation ---------------------------------------------------

namespace {

struct FeatureRow {
    double t_start, t_end;
    std::vector<double> f;
};

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

std::vector<double> mean_feature(const std::vector<FeatureRow>& rows, std::size_t lo,
                                 std::size_t hi) {
    std::vector<double> m(rows[0].f.size(), 0.0);
    for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += rows[i].f[k];
    for (auto& v : m) v /= double(hi - lo);
    return m;
}

double segment_cost(const std::vector<FeatureRow>& rows, std::size_t lo, std::size_t hi) {
    const std::vector<double> m = mean_feature(rows, lo, hi);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += sq_distance(rows[i].f, m);
    return acc;
}

void binary_segment(const std::vector<FeatureRow>& rows, std::size_t lo, std::size_t hi,
                    double penalty, std::vector<std::size_t>& cuts, int depth) {
    const std::size_t min_len = 2;
    if (depth > 16 || hi - lo < 2 * min_len) return;
    const double whole = segment_cost(rows, lo, hi);
    double best_gain = 0.0;
    std::size_t best_cut = 0;
    for (std::size_t c = lo + min_len; c + min_len <= hi; ++c) {
        const double gain = whole - segment_cost(rows, lo, c) - segment_cost(rows, c, hi);
        if (gain > best_gain) {
            best_gain = gain;
            best_cut = c;
        }
    }
    if (best_cut == 0 || best_gain <= penalty) return;
    binary_segment(rows, lo, best_cut, penalty, cuts, depth + 1);
    cuts.push_back(best_cut);
    binary_segment(rows, best_cut, hi, penalty, cuts, depth + 1);
}

}  // namespace

std::vector<Segment> itinerancy_segments(const Series& s, const SegmentConfig& cfg) {
    if (s.dt <= 0.0 || s.values.size() < 16)
        throw ConfigError("itinerancy_segments: series too short");
    const double duration = s.duration();
    const double window = cfg.window > 0.0 ? cfg.window : duration / 48.0;
    const std::size_t wlen = std::max<std::size_t>(8, std::size_t(window / s.dt));
    const std::size_t n_windows = s.values.size() / wlen;
    if (n_windows < 2) {
        Segment seg;
        seg.t_start = 0.0;
        seg.t_end = duration;
        seg.dwell_time = duration;
        return {seg};
    }

    // per-window features: mean, variance, dominant frequency, spectral entropy
    std::vector<FeatureRow> rows;
    rows.reserve(n_windows);
    for (std::size_t wi = 0; wi < n_windows; ++wi) {
        Series chunk;
        chunk.dt = s.dt;
        chunk.values.assign(s.values.begin() + long(wi * wlen),
                            s.values.begin() + long((wi + 1) * wlen));
        double mean = std::accumulate(chunk.values.begin(), chunk.values.end(), 0.0) /
                      double(wlen);
        double var = 0.0;
        for (double v : chunk.values) var += (v - mean) * (v - mean);
        var /= double(wlen);
        const Spectrum sp = power_spectrum(chunk);
        double total = 0.0, best_p = 0.0, best_f = 0.0, entropy = 0.0;
        for (std::size_t k = 1; k < sp.power.size(); ++k) {
            total += sp.power[k];
            if (sp.power[k] > best_p) {
                best_p = sp.power[k];
                best_f = sp.freq[k];
            }
        }
        if (total > 0.0) {
            for (std::size_t k = 1; k < sp.power.size(); ++k) {
                const double p = sp.power[k] / total;
                if (p > 0.0) entropy -= p * std::log(p);
            }
        }
        FeatureRow row;
        row.t_start = double(wi * wlen) * s.dt;
        row.t_end = double((wi + 1) * wlen) * s.dt;
        row.f = {mean, std::sqrt(var), best_f, entropy};
        rows.push_back(std::move(row));
    }

    // normalize features to unit spread so the distance is scale-free
    const std::size_t nf = rows[0].f.size();
    for (std::size_t k = 0; k < nf; ++k) {
        double mean = 0.0;
        for (const auto& r : rows) mean += r.f[k];
        mean /= double(rows.size());
        double var = 0.0;
        for (const auto& r : rows) var += (r.f[k] - mean) * (r.f[k] - mean);
        const double sd = std::sqrt(var / double(rows.size()));
        for (auto& r : rows) r.f[k] = sd > 1e-12 ? (r.f[k] - mean) / sd : 0.0;
    }

    std::vector<std::size_t> cuts;
    binary_segment(rows, 0, rows.size(), cfg.penalty, cuts, 0);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(rows.size());

    // segments between cuts, then nearest-centroid mode labels
    std::vector<Segment> segs;
    std::vector<std::vector<double>> centroids;
    std::size_t lo = 0;
    for (std::size_t cut : cuts) {
        Segment seg;
        seg.t_start = rows[lo].t_start;
        seg.t_end = rows[cut - 1].t_end;
        seg.dwell_time = seg.t_end - seg.t_start;
        seg.features = mean_feature(rows, lo, cut);
        int label = -1;
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            if (sq_distance(seg.features, centroids[c]) <
                cfg.merge_distance * cfg.merge_distance) {
                label = int(c);
                break;
            }
        }
        if (label < 0) {
            label = int(centroids.size());
            centroids.push_back(seg.features);
        }
        seg.mode_label = label;
        segs.push_back(std::move(seg));
        lo = cut;
    }
    return segs;
}

double correlation_dimension(const std::vector<std::vector<double>>& points) {
    if (points.size() < 64) throw ConfigError("correlation_dimension: too few points");
    // subsample pairs on a fixed stride for tractability
    const std::size_t n = points.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 3000);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);

    std::vector<double> dists;
    dists.reserve(idx.size() * (idx.size() - 1) / 2);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            const double d = std::sqrt(sq_distance(points[idx[i]], points[idx[j]]));
            if (d > 0.0) dists.push_back(d);
        }
    if (dists.size() < 4096) throw ConfigError("correlation_dimension: too few pairs");
    std::sort(dists.begin(), dists.end());

    // fit the scaling region at small scales: the slope of log C over the
    // window where C(r) spans ~1e-4..1e-2 of all pairs (large r only sees the
    // attractor's gross backbone, not its local structure)
    const std::size_t np = dists.size();
    const double r_lo = dists[std::max<std::size_t>(np / 10000, 128)];
    const double r_hi = dists[np / 100];
    if (!(r_hi > r_lo * 1.5)) throw ConfigError("correlation_dimension: degenerate scales");
    const int nr = 12;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < nr; ++k) {
        const double r = r_lo * std::pow(r_hi / r_lo, double(k) / double(nr - 1));
        const auto it = std::upper_bound(dists.begin(), dists.end(), r);
        const double c = double(it - dists.begin()) / double(np);
        const double lx = std::log(r), ly = std::log(std::max(c, 1e-12));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (double(nr) * sxy - sx * sy) / (double(nr) * sxx - sx * sx);
}

// --- modulation ------------------------------------------------------------------

Series iq_modulate(const Series& baseband, double f_c_mhz, double fs_mhz,
                   std::size_t q_delay) {
    if (!(fs_mhz > 2.0 * f_c_mhz))
        throw ConfigError("iq_modulate: sampling rate must exceed 2 f_c");
    Series out;
    out.dt = 1.0 / fs_mhz;
    out.values.resize(baseband.values.size());
    for (std::size_t i = 0; i < baseband.values.size(); ++i) {
        const double t = double(i) * out.dt;
        const double in_phase = baseband.values[i];
        const double quad =
            q_delay > 0 && i >= q_delay ? baseband.values[i - q_delay] : 0.0;
        out.values[i] = in_phase * std::cos(2.0 * M_PI * f_c_mhz * t) -
                        quad * std::sin(2.0 * M_PI * f_c_mhz * t);
    }
    return out;
}

Series envelope_demod(const Series& passband, double f_c_mhz, double fs_mhz) {
    if (!(fs_mhz > 2.0 * f_c_mhz))
        throw ConfigError("envelope_demod: sampling rate must exceed 2 f_c");
    const std::size_t n = passband.values.size();
    Series mixed;
    mixed.dt = 1.0 / fs_mhz;
    mixed.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i) * mixed.dt;
        mixed.values[i] = 2.0 * passband.values[i] * std::cos(2.0 * M_PI * f_c_mhz * t);
    }
    // windowed-sinc low-pass at f_c/2, group delay compensated
    const double cutoff = 0.5 * f_c_mhz / fs_mhz;  // cycles/sample
    const int half = std::max(8, int(4.0 / cutoff));
    std::vector<double> taps(2 * half + 1);
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double x = 2.0 * M_PI * cutoff * double(k);
        const double sinc = k == 0 ? 2.0 * M_PI * cutoff : std::sin(x) / double(k);
        const double win = 0.54 + 0.46 * std::cos(M_PI * double(k) / double(half));
        taps[k + half] = sinc * win;
        acc += taps[k + half];
    }
    for (auto& t : taps) t /= acc;

    Series out;
    out.dt = mixed.dt;
    out.values.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double y = 0.0;
        for (int k = -half; k <= half; ++k) {
            const long j = long(i) + k;
            if (j >= 0 && j < long(n)) y += taps[k + half] * mixed.values[j];
        }
        out.values[i] = y;
    }
    return out;
}

long cross_correlation_lag(const std::vector<double>& a, const std::vector<double>& b,
                           long max_lag) {
    if (a.size() != b.size() || a.empty())
        throw ConfigError("cross_correlation_lag: length mismatch");
    const long n = long(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / double(n);
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / double(n);
    double best = -1e300;
    long best_lag = 0;
    for (long lag = -max_lag; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (long i = std::max(0L, -lag); i < std::min(n, n - lag); ++i)
            acc += (a[i] - ma) * (b[i + lag] - mb);
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    return best_lag;
}

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw ConfigError("pearson_correlation: length mismatch");
    const double n = double(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double va = 0, vb = 0, cab = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
        cab += (a[i] - ma) * (b[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return cab / std::sqrt(va * vb);
}

}  // namespace neuromem
