#include "neuromem/stimulus.hpp"

#include <cmath>

#include "neuromem/errors.hpp"

namespace neuromem {

void StimulusSpec::validate() const {
    if (frequency < 0.0) throw ConfigError("invalid parameter: frequency");
    if (kind == StimulusKind::pulse_train) {
        if (pulse_period <= 0.0) throw ConfigError("invalid parameter: pulse_period");
        if (pulse_width < 0.0 || pulse_width > pulse_period)
            throw ConfigError("invalid parameter: pulse_width");
    }
    for (const auto& c : components) c.validate();
}

StimulusSpec StimulusSpec::dc(double level) {
    StimulusSpec s;
    s.kind = StimulusKind::dc;
    s.dc_level = level;
    return s;
}

StimulusSpec StimulusSpec::sine(double amplitude_pp, double frequency_mhz, double phase) {
    StimulusSpec s;
    s.kind = StimulusKind::sine;
    s.amplitude_pp = amplitude_pp;
    s.frequency = frequency_mhz;
    s.phase = phase;
    return s;
}

StimulusSpec StimulusSpec::pulses(double width_us, double period_us, double high, double low) {
    StimulusSpec s;
    s.kind = StimulusKind::pulse_train;
    s.pulse_width = width_us;
    s.pulse_period = period_us;
    s.high_level = high;
    s.low_level = low;
    return s;
}

StimulusSpec StimulusSpec::sum(std::vector<StimulusSpec> parts) {
    StimulusSpec s;
    s.kind = StimulusKind::sum;
    s.components = std::move(parts);
    return s;
}

double render_stimulus(const StimulusSpec& s, double t_us) {
    switch (s.kind) {
        case StimulusKind::dc:
            return s.dc_level;
        case StimulusKind::sine:
            // frequency MHz * time us = cycles
            return 0.5 * s.amplitude_pp *
                   std::sin(2.0 * M_PI * s.frequency * t_us + s.phase);
        case StimulusKind::pulse_train: {
            const double phase_t = t_us - std::floor(t_us / s.pulse_period) * s.pulse_period;
            return phase_t < s.pulse_width ? s.high_level : s.low_level;
        }
        case StimulusKind::sum: {
            double acc = 0.0;
            for (const auto& c : s.components) acc += render_stimulus(c, t_us);
            return acc;
        }
    }
    return 0.0;
}

}  // namespace neuromem
