#pragma once

#include <utility>
#include <vector>

#include "neuromem/device.hpp"
#include "neuromem/stimulus.hpp"

namespace neuromem {

enum class MemristorRegime { warm, superconducting };
enum class StimulusEntry { input_branch, direct };

// One memory element slot of the oscillator. The state equation always runs
// on `params`; the conduction law is either the warm hyperbolic model or the
// superconducting branch, selected by `regime`.
struct MemristorSlot {
    MemristorParams params;
    MemristorRegime regime = MemristorRegime::warm;
    SuperconductingParams sc;

    double current(double v, double x) const;
    double resistance(double v, double x) const;
    double resistance_dv(double v, double x) const;
    double resistance_dx(double v, double x) const;
    double state_rate(double v, double x) const;

    void validate() const;
};

// Feedback-oscillator parameters. R in kOhm, C in nF; rail_voltage bounds the
// output swing, rail_damping is the strength of the smooth amplitude limiter
// acting near the rails.
struct CircuitParams {
    double r3 = 0.5;
    double r4 = 1.0;
    double c1 = 100.0;
    double c2 = 300.0;
    double rail_voltage = 5.0;   // V
    double rail_damping = 10.0;  // 1/us
    MemristorSlot mem1;          // R4 (gain) branch
    MemristorSlot mem2;          // R3/C2 feedback branch
    StimulusEntry stimulus_entry = StimulusEntry::input_branch;

    void validate() const;
};

// Dynamical state: output voltage, its rate, the two memory states and the
// mem2 node voltage.
struct NeuronState {
    double v = 1e-3;   // v_o [V]
    double u = 0.0;    // dv_o/dt [V/us]
    double x1 = 0.1;
    double x2 = 0.1;
    double vm2 = 0.0;  // voltage across memristor 2 [V]
};

// Per-evaluation derived quantities: node voltages, cached memristances and
// the chain-rule dR_Mem2/dt used by the damping term.
struct NodeReadout {
    double vmem1 = 0.0;
    double vmem2 = 0.0;
    double r1 = 0.0;      // kOhm
    double r2 = 0.0;      // kOhm
    double rdot2 = 0.0;   // kOhm/us
    double x1dot = 0.0;
    double x2dot = 0.0;
    double vm2dot = 0.0;  // V/us
    double i_mem2 = 0.0;  // mA
};

struct SolverConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double max_step = 0.0;    // 0 = unlimited
    double sample_dt = 10.0;  // dense-output grid spacing [us]

    void validate() const;
};

struct Trajectory {
    std::vector<double> t;      // us
    std::vector<double> v;      // v_o
    std::vector<double> x1;
    std::vector<double> x2;
    std::vector<double> vmem1;
    std::vector<double> vmem2;
    std::vector<double> stim;
};

// Voltage across memristor 1 from the R4 divider branch: the unique root of
// I_mem1(V1, x1) = (v - V1)/R4 (KCL at the divider node), solved by
// safeguarded Newton.
double branch_voltage_mem1(double v, double x1, const MemristorSlot& mem1, double r4);

// All node quantities at a given state; `stim_value` is the already-rendered
// effective stimulus [V].
NodeReadout evaluate_nodes(const NeuronState& s, const CircuitParams& c);

// Time derivative of the neuron state; the second-order output equation is
// evaluated with the damping/stiffness grouping documented in
// docs/derivation.md, with the stimulus forced through the input branch (or
// directly on du/dt when configured).
NeuronState neuron_rhs(const NeuronState& s, double t, const StimulusSpec& stim,
                       const CircuitParams& c);

// Same derivative with an already-rendered effective stimulus value [V]; the
// network integrator routes coupled inputs through this entry point.
NeuronState neuron_rhs_effective(const NeuronState& s, double stim_value,
                                 const CircuitParams& c);

// (V_mem1, V_mem2) at a state.
std::pair<double, double> node_voltages(const NeuronState& s, const CircuitParams& c);

// Adaptive integration with per-step clamping of x1, x2 to [0,1] and v to the
// rails, resampled onto a uniform grid. Deterministic for identical inputs.
Trajectory integrate_neuron(const CircuitParams& c, const StimulusSpec& stim,
                            double t_end, const SolverConfig& cfg,
                            const NeuronState& init = NeuronState{});

}  // namespace neuromem
