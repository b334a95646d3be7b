#include "neuromem/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "neuromem/errors.hpp"
#include "neuromem/rk45.hpp"

namespace neuromem {

void NetworkSpec::validate() const {
    if (neurons.empty()) throw ConfigError("network: no neurons");
    if (stimuli.size() != neurons.size())
        throw ConfigError("network: stimuli count must match neuron count");
    if (!initial.empty() && initial.size() != neurons.size())
        throw ConfigError("network: initial-state count must match neuron count");
    for (const auto& n : neurons) n.validate();
    for (const auto& s : stimuli) s.validate();
    for (const auto& e : edges) {
        if (e.from >= neurons.size() || e.to >= neurons.size())
            throw ConfigError("network: edge references unknown neuron index");
        if (!std::isfinite(e.gain)) throw ConfigError("network: edge gain not finite");
        if (e.delay < 0.0) throw ConfigError("network: edge delay must be >= 0");
    }
}

NetworkSpec build_ring(std::size_t n, double gain, const CircuitParams& deck,
                       const StimulusSpec& stim) {
    if (n < 2) throw ConfigError("build_ring: need at least 2 neurons");
    NetworkSpec spec;
    spec.neurons.assign(n, deck);
    spec.stimuli.assign(n, stim);
    for (std::size_t i = 0; i < n; ++i)
        spec.edges.push_back({i, (i + 1) % n, gain, 0.0});
    return spec;
}

NetworkSpec build_grid(std::size_t rows, std::size_t cols, double gain,
                       const CircuitParams& deck, const StimulusSpec& stim) {
    if (rows * cols < 2) throw ConfigError("build_grid: need at least 2 neurons");
    NetworkSpec spec;
    spec.neurons.assign(rows * cols, deck);
    spec.stimuli.assign(rows * cols, stim);
    auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                spec.edges.push_back({id(r, c), id(r, c + 1), gain, 0.0});
                spec.edges.push_back({id(r, c + 1), id(r, c), gain, 0.0});
            }
            if (r + 1 < rows) {
                spec.edges.push_back({id(r, c), id(r + 1, c), gain, 0.0});
                spec.edges.push_back({id(r + 1, c), id(r, c), gain, 0.0});
            }
        }
    }
    return spec;
}

NetworkSpec hybrid_pair(const CircuitParams& warm_deck, const CircuitParams& cryo_deck,
                        double gain_wc, double gain_cw,
                        const StimulusSpec& warm_stim, const StimulusSpec& cryo_stim) {
    if (cryo_deck.mem1.regime != MemristorRegime::superconducting ||
        cryo_deck.mem2.regime != MemristorRegime::superconducting)
        throw ConfigError("hybrid_pair: cryo deck must use the superconducting regime "
                          "for both memristors");
    NetworkSpec spec;
    spec.neurons = {warm_deck, cryo_deck};
    spec.stimuli = {warm_stim, cryo_stim};
    spec.edges.push_back({0, 1, gain_wc, 0.0});
    spec.edges.push_back({1, 0, gain_cw, 0.0});
    return spec;
}

// --- coupled integration -----------------------------------------------------

namespace {

using Vec = Eigen::VectorXd;

struct Component {
    std::vector<std::size_t> members;              // ascending neuron ids
    std::vector<Edge> in_edges;                    // nonzero-gain edges inside
};

std::vector<Component> split_components(const NetworkSpec& spec) {
    const std::size_t n = spec.neurons.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const auto& e : spec.edges) {
        if (e.gain == 0.0) continue;
        parent[find(e.from)] = find(e.to);
    }
    std::map<std::size_t, Component> by_root;
    for (std::size_t i = 0; i < n; ++i) by_root[find(i)].members.push_back(i);
    for (const auto& e : spec.edges) {
        if (e.gain == 0.0) continue;
        by_root[find(e.to)].in_edges.push_back(e);
    }
    std::vector<Component> out;
    for (auto& [root, comp] : by_root) {
        std::sort(comp.in_edges.begin(), comp.in_edges.end(),
                  [](const Edge& a, const Edge& b) {
                      return a.to != b.to ? a.to < b.to : a.from < b.from;
                  });
        out.push_back(std::move(comp));
    }
    return out;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// One coupled component integrated as a single system; member state blocks of
// 5 are laid out in ascending neuron-id order.
void integrate_component(const NetworkSpec& spec, const Component& comp, double t_end,
                         const SolverConfig& cfg, NetworkTrajectory& out,
                         const std::vector<double>& sample_times) {
    const std::size_t m = comp.members.size();
    std::vector<std::size_t> local(spec.neurons.size(), SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i) local[comp.members[i]] = i;

    // per-member incoming edges resolved to local indices
    struct In {
        std::size_t src_local;
        double gain, delay;
    };
    std::vector<std::vector<In>> incoming(m);
    double min_delay = std::numeric_limits<double>::infinity();
    bool has_delay = false;
    for (const auto& e : comp.in_edges) {
        incoming[local[e.to]].push_back({local[e.from], e.gain, e.delay});
        if (e.delay > 0.0) {
            has_delay = true;
            min_delay = std::min(min_delay, e.delay);
        }
    }
    double max_delay = 0.0;
    for (const auto& e : comp.in_edges) max_delay = std::max(max_delay, e.delay);

    Vec y0(5 * m);
    for (std::size_t i = 0; i < m; ++i) {
        const NeuronState ini = spec.initial.empty() ? NeuronState{}
                                                     : spec.initial[comp.members[i]];
        y0[5 * i + 0] = ini.v;
        y0[5 * i + 1] = ini.u;
        y0[5 * i + 2] = ini.x1;
        y0[5 * i + 3] = ini.x2;
        y0[5 * i + 4] = ini.vm2;
    }

    // dense history for delayed taps; pruned to the max delay horizon
    std::deque<DenseStep<Vec>> history;
    std::vector<double> init_v(m);
    for (std::size_t i = 0; i < m; ++i) init_v[i] = y0[5 * i];

    auto delayed_v = [&](std::size_t src, double tq) -> double {
        if (tq <= 0.0) return init_v[src];
        for (auto it = history.rbegin(); it != history.rend(); ++it) {
            if (tq >= it->t0 - 1e-12) {
                const double theta = std::clamp((tq - it->t0) / it->h, 0.0, 1.0);
                return it->eval(theta)[5 * src];
            }
        }
        return init_v[src];
    };

    auto rhs = [&](double t, const Vec& y, Vec& dydt) {
        for (std::size_t i = 0; i < m; ++i) {
            NeuronState s;
            s.v = y[5 * i + 0];
            s.u = y[5 * i + 1];
            s.x1 = y[5 * i + 2];
            s.x2 = y[5 * i + 3];
            s.vm2 = y[5 * i + 4];
            const std::size_t gid = comp.members[i];
            double sv = render_stimulus(spec.stimuli[gid], t);
            for (const auto& in : incoming[i]) {
                const double vsrc = in.delay == 0.0 ? y[5 * in.src_local]
                                                    : delayed_v(in.src_local, t - in.delay);
                sv += in.gain * vsrc;
            }
            const NeuronState d = neuron_rhs_effective(s, sv, spec.neurons[gid]);
            dydt[5 * i + 0] = d.v;
            dydt[5 * i + 1] = d.u;
            dydt[5 * i + 2] = d.x1;
            dydt[5 * i + 3] = d.x2;
            dydt[5 * i + 4] = d.vm2;
        }
    };

    std::size_t next_sample = 0;
    auto emit = [&](double ts, const Vec& y) {
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t gid = comp.members[i];
            const CircuitParams& c = spec.neurons[gid];
            NeuronState s;
            s.v = std::clamp(y[5 * i + 0], -c.rail_voltage, c.rail_voltage);
            s.u = y[5 * i + 1];
            s.x1 = clamp01(y[5 * i + 2]);
            s.x2 = clamp01(y[5 * i + 3]);
            s.vm2 = y[5 * i + 4];
            const auto [vm1, vm2] = node_voltages(s, c);
            Trajectory& tr = out.neurons[gid];
            tr.v.push_back(s.v);
            tr.x1.push_back(s.x1);
            tr.x2.push_back(s.x2);
            tr.vmem1.push_back(vm1);
            tr.vmem2.push_back(vm2);
            double sv = render_stimulus(spec.stimuli[gid], ts);
            for (const auto& in : incoming[i]) {
                const double vsrc = in.delay == 0.0 ? y[5 * in.src_local]
                                                    : delayed_v(in.src_local, ts - in.delay);
                sv += in.gain * vsrc;
            }
            tr.stim.push_back(sv);
        }
    };

    auto on_accept = [&](const DenseStep<Vec>& seg, Vec& y) -> bool {
        if (has_delay) history.push_back(seg);
        while (next_sample < sample_times.size()) {
            const double ts = sample_times[next_sample];
            if (ts > seg.t1() + 1e-12 * std::max(1.0, seg.t1())) break;
            const double theta = std::clamp((ts - seg.t0) / seg.h, 0.0, 1.0);
            const Vec ys = seg.eval(theta);
            emit(ts, ys);
            ++next_sample;
        }
        if (has_delay) {
            // future delayed queries come from the next integration steps
            // (>= seg.t1 - max_delay) and from not-yet-emitted samples
            const double pending = next_sample < sample_times.size()
                                       ? sample_times[next_sample]
                                       : seg.t1();
            const double horizon = std::min(pending, seg.t1()) - max_delay - 1.0;
            while (history.size() > 1 && history.front().t1() < horizon)
                history.pop_front();
        }
        bool modified = false;
        for (std::size_t i = 0; i < m; ++i) {
            const CircuitParams& c = spec.neurons[comp.members[i]];
            auto clampc = [&](double& val, double lo, double hi) {
                const double cv = std::clamp(val, lo, hi);
                if (cv != val) {
                    val = cv;
                    modified = true;
                }
            };
            clampc(y[5 * i + 0], -c.rail_voltage, c.rail_voltage);
            clampc(y[5 * i + 2], 0.0, 1.0);
            clampc(y[5 * i + 3], 0.0, 1.0);
        }
        return modified;
    };

    Rk45Options opt;
    opt.abs_tol = cfg.abs_tol;
    opt.rel_tol = cfg.rel_tol;
    if (cfg.max_step > 0.0) opt.max_step = cfg.max_step;
    if (has_delay) opt.max_step = std::min(opt.max_step, min_delay);
    rk45_integrate(rhs, 0.0, t_end, y0, opt, on_accept);
}

}  // namespace

NetworkTrajectory integrate_network(const NetworkSpec& spec, double t_end,
                                    const SolverConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (t_end <= 0.0) throw ConfigError("invalid parameter: t_end");

    const std::size_t n_samples = std::size_t(std::floor(t_end / cfg.sample_dt)) + 1;
    std::vector<double> sample_times(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) sample_times[k] = double(k) * cfg.sample_dt;

    NetworkTrajectory out;
    out.t = sample_times;
    out.neurons.resize(spec.neurons.size());
    for (auto& tr : out.neurons) tr.t = sample_times;

    for (const auto& comp : split_components(spec))
        integrate_component(spec, comp, t_end, cfg, out, sample_times);
    return out;
}

Trajectory integrate_neuron(const CircuitParams& c, const StimulusSpec& stim,
                            double t_end, const SolverConfig& cfg,
                            const NeuronState& init) {
    NetworkSpec spec;
    spec.neurons = {c};
    spec.stimuli = {stim};
    spec.initial = {init};
    NetworkTrajectory nt = integrate_network(spec, t_end, cfg);
    return std::move(nt.neurons[0]);
}

}  // namespace neuromem
