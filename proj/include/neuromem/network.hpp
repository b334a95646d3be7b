#pragma once

#include <map>
#include <vector>

#include "neuromem/neuron.hpp"

namespace neuromem {

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    double gain = 0.0;   // dimensionless: adds gain * v_from to the target stimulus
    double delay = 0.0;  // us
};

struct NetworkSpec {
    std::vector<CircuitParams> neurons;
    std::vector<Edge> edges;
    std::vector<StimulusSpec> stimuli;      // one per neuron
    std::vector<NeuronState> initial;       // one per neuron

    void validate() const;
};

struct NetworkTrajectory {
    std::vector<double> t;
    std::vector<Trajectory> neurons;  // per-neuron channel blocks sharing `t`
};

// Directed cycle i -> (i+1 mod n) with uniform gain; every neuron gets `deck`
// and `stim`.
NetworkSpec build_ring(std::size_t n, double gain, const CircuitParams& deck,
                       const StimulusSpec& stim);

// rows x cols nearest-neighbour grid (bidirectional edges), the topology used
// for the 9-neuron learning demonstration (3x3).
NetworkSpec build_grid(std::size_t rows, std::size_t cols, double gain,
                       const CircuitParams& deck, const StimulusSpec& stim);

// Two mutually coupled neurons: a warm deck and a cryogenic deck whose
// memristors run the superconducting conduction law. gain_wc scales the warm
// output into the cryo stimulus, gain_cw the reverse.
NetworkSpec hybrid_pair(const CircuitParams& warm_deck, const CircuitParams& cryo_deck,
                        double gain_wc, double gain_cw,
                        const StimulusSpec& warm_stim, const StimulusSpec& cryo_stim);

// Integrates all neurons as coupled systems. Neurons connected by
// nonzero-gain edges form one system; isolated neurons integrate exactly like
// integrate_neuron (bit-identical output). Coupling adds
// sum gain_ij * v_i(t - delay_ij) to the target's stimulus; delayed values
// come from the dense solution history.
NetworkTrajectory integrate_network(const NetworkSpec& spec, double t_end,
                                    const SolverConfig& cfg);

}  // namespace neuromem
