#include "neuromem/neuron.hpp"

#include <algorithm>
#include <cmath>

#include "neuromem/errors.hpp"

namespace neuromem {

namespace {
void require(bool ok, const char* field) {
    if (!ok) throw ConfigError(std::string("invalid parameter: ") + field);
}
double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }
}  // namespace

double MemristorSlot::current(double v, double x) const {
    return regime == MemristorRegime::warm ? chang_current(v, x, params)
                                           : sc_current(v, x, sc);
}

double MemristorSlot::resistance(double v, double x) const {
    return regime == MemristorRegime::warm ? memristance(v, x, params)
                                           : sc_memristance(v, x, sc);
}

double MemristorSlot::resistance_dv(double v, double x) const {
    return regime == MemristorRegime::warm ? memristance_dv(v, x, params)
                                           : sc_memristance_dv(v, x, sc);
}

double MemristorSlot::resistance_dx(double v, double x) const {
    return regime == MemristorRegime::warm ? memristance_dx(v, x, params)
                                           : sc_memristance_dx(v, x, sc);
}

double MemristorSlot::state_rate(double v, double x) const {
    return state_derivative(v, x, params.temperature, params);
}

void MemristorSlot::validate() const {
    params.validate();
    if (regime == MemristorRegime::superconducting) sc.validate();
}

void CircuitParams::validate() const {
    require(r3 > 0.0, "r3");
    require(r4 > 0.0, "r4");
    require(c1 > 0.0, "c1");
    require(c2 > 0.0, "c2");
    require(rail_voltage > 0.0, "rail_voltage");
    require(rail_damping >= 0.0, "rail_damping");
    mem1.validate();
    mem2.validate();
}

void SolverConfig::validate() const {
    require(abs_tol > 0.0, "abs_tol");
    require(rel_tol > 0.0, "rel_tol");
    require(max_step >= 0.0, "max_step");
    require(sample_dt > 0.0, "sample_dt");
}

double branch_voltage_mem1(double v, double x1, const MemristorSlot& mem1, double r4) {
    if (v == 0.0) return 0.0;
    const double sgn = v > 0.0 ? 1.0 : -1.0;
    const double va = std::abs(v);
    // g(V1) = I(sgn*V1, x1)*sgn - (va - V1)/r4, monotone increasing on [0, va]
    auto g = [&](double v1) { return mem1.current(sgn * v1, x1) * sgn - (va - v1) / r4; };
    auto dg = [&](double v1) {
        const double didv = mem1.regime == MemristorRegime::warm
                                ? chang_didv(sgn * v1, x1, mem1.params)
                                : sc_didv(sgn * v1, x1, mem1.sc);
        return didv + 1.0 / r4;
    };
    double lo = 0.0, hi = va;
    double glo = g(lo);
    if (glo >= 0.0) return 0.0;  // degenerate; I(0)=0 means glo=-va/r4<0 normally
    if (g(hi) <= 0.0)
        throw SolverError("branch_voltage_mem1: no bracket (non-passive conduction law)");
    double v1 = 0.5 * va;
    for (int it = 0; it < 100; ++it) {
        const double gv = g(v1);
        if (gv > 0.0)
            hi = v1;
        else
            lo = v1;
        const double slope = dg(v1);
        double next = v1 - gv / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
        if (std::abs(next - v1) <= 1e-16 * std::max(1.0, va)) return sgn * next;
        v1 = next;
        if (hi - lo <= 1e-16 * std::max(1.0, va)) break;
    }
    return sgn * v1;
}

NodeReadout evaluate_nodes(const NeuronState& s, const CircuitParams& c) {
    NodeReadout n;
    const double x1 = clamp01(s.x1);
    const double x2 = clamp01(s.x2);
    n.vmem2 = s.vm2;
    n.vmem1 = branch_voltage_mem1(s.v, x1, c.mem1, c.r4);
    n.r1 = c.mem1.resistance(n.vmem1, x1);
    n.r2 = c.mem2.resistance(s.vm2, x2);
    n.i_mem2 = c.mem2.current(s.vm2, x2);
    n.vm2dot = ((s.v - s.vm2) / c.r3 - n.i_mem2) / c.c2;
    n.x1dot = c.mem1.state_rate(n.vmem1, x1);
    n.x2dot = c.mem2.state_rate(s.vm2, x2);
    // project the state rates at the clamp boundaries so the clamped system
    // has consistent derivatives
    if (s.x1 <= 0.0) n.x1dot = std::max(0.0, n.x1dot);
    if (s.x1 >= 1.0) n.x1dot = std::min(0.0, n.x1dot);
    if (s.x2 <= 0.0) n.x2dot = std::max(0.0, n.x2dot);
    if (s.x2 >= 1.0) n.x2dot = std::min(0.0, n.x2dot);
    n.rdot2 = c.mem2.resistance_dx(s.vm2, x2) * n.x2dot +
              c.mem2.resistance_dv(s.vm2, x2) * n.vm2dot;
    return n;
}

NeuronState neuron_rhs_effective(const NeuronState& s, double stim_value,
                                 const CircuitParams& c) {
    const NodeReadout n = evaluate_nodes(s, c);
    NeuronState d;
    const double r2c1 = n.r2 * c.c1;
    const double damping = (n.r2 / c.r3 + c.c1 / c.c2 + n.rdot2 * c.c1 + n.r1 / c.r4) / r2c1;
    const double stiffness = (1.0 / (c.r3 * c.c2) + n.rdot2 / c.r3) / r2c1;
    const double forcing = c.stimulus_entry == StimulusEntry::input_branch
                               ? stim_value / (c.r3 * c.c2 * r2c1)
                               : stim_value;
    // smooth rail limiter: amplitude-gated damping, negligible below ~0.8 Vsat
    const double p2 = (s.v / c.rail_voltage) * (s.v / c.rail_voltage);
    const double p8 = p2 * p2 * p2 * p2;
    const double rail = c.rail_damping * std::tanh(p8);
    d.v = s.u;
    d.u = -damping * s.u - stiffness * s.v + forcing - rail * s.u;
    d.x1 = n.x1dot;
    d.x2 = n.x2dot;
    d.vm2 = n.vm2dot;
    return d;
}

NeuronState neuron_rhs(const NeuronState& s, double t, const StimulusSpec& stim,
                       const CircuitParams& c) {
    return neuron_rhs_effective(s, render_stimulus(stim, t), c);
}

std::pair<double, double> node_voltages(const NeuronState& s, const CircuitParams& c) {
    const NodeReadout n = evaluate_nodes(s, c);
    return {n.vmem1, n.vmem2};
}

}  // namespace neuromem
