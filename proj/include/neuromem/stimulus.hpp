#pragma once

#include <vector>

namespace neuromem {

enum class StimulusKind { dc, sine, pulse_train, sum };

// Drive waveform description. Amplitude of the sine is peak-to-peak to match
// the usual bench convention; a pulse train is `high_level` for
// t mod period < width and `low_level` otherwise.
struct StimulusSpec {
    StimulusKind kind = StimulusKind::dc;
    double dc_level = 0.0;        // V
    double amplitude_pp = 0.0;    // V peak-to-peak (sine)
    double frequency = 0.0;       // MHz
    double phase = 0.0;           // radians
    double pulse_width = 0.0;     // us
    double pulse_period = 0.0;    // us
    double high_level = 0.0;      // V
    double low_level = 0.0;       // V
    std::vector<StimulusSpec> components;  // for kind == sum

    void validate() const;

    static StimulusSpec dc(double level);
    static StimulusSpec sine(double amplitude_pp, double frequency_mhz, double phase = 0.0);
    static StimulusSpec pulses(double width_us, double period_us, double high, double low = 0.0);
    static StimulusSpec sum(std::vector<StimulusSpec> parts);
};

double render_stimulus(const StimulusSpec& s, double t_us);

}  // namespace neuromem
