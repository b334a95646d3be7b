#include "neuromem/config.hpp"

#include <fstream>
#include <set>

#include "neuromem/errors.hpp"

namespace neuromem {

namespace {

// Reads known fields with defaults and rejects unknown keys by name.
class FieldReader {
public:
    FieldReader(const Json& j, std::string context) : j_(j), ctx_(std::move(context)) {
        if (!j.is_object()) throw ConfigError(ctx_ + ": expected a JSON object");
    }

    double num(const char* key, double def) {
        seen_.insert(key);
        if (!j_.contains(key)) return def;
        if (!j_[key].is_number()) throw ConfigError(ctx_ + "." + key + ": expected number");
        return j_[key].get<double>();
    }

    int integer(const char* key, int def) {
        seen_.insert(key);
        if (!j_.contains(key)) return def;
        if (!j_[key].is_number_integer())
            throw ConfigError(ctx_ + "." + key + ": expected integer");
        return j_[key].get<int>();
    }

    std::string str(const char* key, const std::string& def) {
        seen_.insert(key);
        if (!j_.contains(key)) return def;
        if (!j_[key].is_string()) throw ConfigError(ctx_ + "." + key + ": expected string");
        return j_[key].get<std::string>();
    }

    bool has(const char* key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const Json& sub(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(ctx_ + ": unknown key \"" + it.key() + "\"");
    }

    const std::string& ctx() const { return ctx_; }

private:
    const Json& j_;
    std::string ctx_;
    std::set<std::string> seen_;
};

}  // namespace

// --- memristor ---------------------------------------------------------------

Json to_json(const MemristorParams& p) {
    return Json{{"alpha", p.alpha},
                {"beta", p.beta},
                {"gamma", p.gamma},
                {"delta", p.delta},
                {"lambda", p.lambda},
                {"eta1", p.eta1},
                {"eta2", p.eta2},
                {"tau", p.tau},
                {"activation_energy", p.activation_energy},
                {"ion_periodicity", p.ion_periodicity},
                {"film_thickness", p.film_thickness},
                {"temperature", p.temperature},
                {"v_ref", p.v_ref},
                {"t_ref", p.t_ref},
                {"f_mode", p.f_mode == IonVelocityMode::constant ? "constant"
                                                                 : "arrhenius_sinh"},
                {"conduction", p.conduction == ConductionMode::chang ? "chang" : "ohmic"}};
}

MemristorParams memristor_from_json(const Json& j) {
    FieldReader r(j, "memristor");
    MemristorParams d;
    MemristorParams p;
    p.alpha = r.num("alpha", d.alpha);
    p.beta = r.num("beta", d.beta);
    p.gamma = r.num("gamma", d.gamma);
    p.delta = r.num("delta", d.delta);
    p.lambda = r.num("lambda", d.lambda);
    p.eta1 = r.num("eta1", d.eta1);
    p.eta2 = r.num("eta2", d.eta2);
    p.tau = r.num("tau", d.tau);
    p.activation_energy = r.num("activation_energy", d.activation_energy);
    p.ion_periodicity = r.num("ion_periodicity", d.ion_periodicity);
    p.film_thickness = r.num("film_thickness", d.film_thickness);
    p.temperature = r.num("temperature", d.temperature);
    p.v_ref = r.num("v_ref", d.v_ref);
    p.t_ref = r.num("t_ref", d.t_ref);
    const std::string fm = r.str("f_mode", "constant");
    if (fm == "constant")
        p.f_mode = IonVelocityMode::constant;
    else if (fm == "arrhenius_sinh")
        p.f_mode = IonVelocityMode::arrhenius_sinh;
    else
        throw ConfigError("memristor.f_mode: unknown mode \"" + fm + "\"");
    const std::string cm = r.str("conduction", "chang");
    if (cm == "chang")
        p.conduction = ConductionMode::chang;
    else if (cm == "ohmic")
        p.conduction = ConductionMode::ohmic;
    else
        throw ConfigError("memristor.conduction: unknown mode \"" + cm + "\"");
    r.finish();
    p.validate();
    return p;
}

// --- superconducting params ----------------------------------------------------

Json to_json(const SuperconductingParams& p) {
    return Json{{"critical_current", p.critical_current},
                {"sum_gap", p.sum_gap},
                {"quasiparticle_conductance", p.quasiparticle_conductance},
                {"subgap_conductance", p.subgap_conductance},
                {"gap_smoothing", p.gap_smoothing},
                {"state_suppression", p.state_suppression}};
}

SuperconductingParams superconducting_from_json(const Json& j) {
    FieldReader r(j, "superconducting");
    SuperconductingParams d;
    SuperconductingParams p;
    p.critical_current = r.num("critical_current", d.critical_current);
    p.sum_gap = r.num("sum_gap", d.sum_gap);
    p.quasiparticle_conductance =
        r.num("quasiparticle_conductance", d.quasiparticle_conductance);
    p.subgap_conductance = r.num("subgap_conductance", d.subgap_conductance);
    p.gap_smoothing = r.num("gap_smoothing", d.gap_smoothing);
    p.state_suppression = r.num("state_suppression", d.state_suppression);
    r.finish();
    p.validate();
    return p;
}

Json to_json(const MemristorSlot& s) {
    Json j{{"params", to_json(s.params)},
           {"regime", s.regime == MemristorRegime::warm ? "warm" : "superconducting"}};
    if (s.regime == MemristorRegime::superconducting) j["sc"] = to_json(s.sc);
    return j;
}

MemristorSlot slot_from_json(const Json& j) {
    FieldReader r(j, "memristor slot");
    MemristorSlot s;
    if (r.has("params")) s.params = memristor_from_json(r.sub("params"));
    const std::string reg = r.str("regime", "warm");
    if (reg == "warm")
        s.regime = MemristorRegime::warm;
    else if (reg == "superconducting")
        s.regime = MemristorRegime::superconducting;
    else
        throw ConfigError("slot.regime: unknown regime \"" + reg + "\"");
    if (r.has("sc")) s.sc = superconducting_from_json(r.sub("sc"));
    r.finish();
    s.validate();
    return s;
}

// --- circuit -------------------------------------------------------------------

Json to_json(const CircuitParams& c) {
    return Json{{"r3", c.r3},
                {"r4", c.r4},
                {"c1", c.c1},
                {"c2", c.c2},
                {"rail_voltage", c.rail_voltage},
                {"rail_damping", c.rail_damping},
                {"mem1", to_json(c.mem1)},
                {"mem2", to_json(c.mem2)},
                {"stimulus_entry",
                 c.stimulus_entry == StimulusEntry::input_branch ? "input_branch"
                                                                 : "direct"}};
}

CircuitParams circuit_from_json(const Json& j) {
    FieldReader r(j, "circuit");
    CircuitParams d;
    CircuitParams c;
    c.r3 = r.num("r3", d.r3);
    c.r4 = r.num("r4", d.r4);
    c.c1 = r.num("c1", d.c1);
    c.c2 = r.num("c2", d.c2);
    c.rail_voltage = r.num("rail_voltage", d.rail_voltage);
    c.rail_damping = r.num("rail_damping", d.rail_damping);
    if (r.has("mem1")) c.mem1 = slot_from_json(r.sub("mem1"));
    if (r.has("mem2")) c.mem2 = slot_from_json(r.sub("mem2"));
    const std::string se = r.str("stimulus_entry", "input_branch");
    if (se == "input_branch")
        c.stimulus_entry = StimulusEntry::input_branch;
    else if (se == "direct")
        c.stimulus_entry = StimulusEntry::direct;
    else
        throw ConfigError("circuit.stimulus_entry: unknown entry \"" + se + "\"");
    r.finish();
    c.validate();
    return c;
}

// --- stimulus --------------------------------------------------------------------

Json to_json(const StimulusSpec& s) {
    switch (s.kind) {
        case StimulusKind::dc:
            return Json{{"kind", "dc"}, {"dc_level", s.dc_level}};
        case StimulusKind::sine:
            return Json{{"kind", "sine"},
                        {"amplitude_pp", s.amplitude_pp},
                        {"frequency", s.frequency},
                        {"phase", s.phase}};
        case StimulusKind::pulse_train:
            return Json{{"kind", "pulse_train"},
                        {"pulse_width", s.pulse_width},
                        {"pulse_period", s.pulse_period},
                        {"high_level", s.high_level},
                        {"low_level", s.low_level}};
        case StimulusKind::sum: {
            Json parts = Json::array();
            for (const auto& c : s.components) parts.push_back(to_json(c));
            return Json{{"kind", "sum"}, {"components", parts}};
        }
    }
    return {};
}

StimulusSpec stimulus_from_json(const Json& j) {
    FieldReader r(j, "stimulus");
    const std::string kind = r.str("kind", "dc");
    StimulusSpec s;
    if (kind == "dc") {
        s = StimulusSpec::dc(r.num("dc_level", 0.0));
    } else if (kind == "sine") {
        s = StimulusSpec::sine(r.num("amplitude_pp", 0.0), r.num("frequency", 0.0),
                               r.num("phase", 0.0));
    } else if (kind == "pulse_train") {
        s = StimulusSpec::pulses(r.num("pulse_width", 0.0), r.num("pulse_period", 1.0),
                                 r.num("high_level", 0.0), r.num("low_level", 0.0));
    } else if (kind == "sum") {
        std::vector<StimulusSpec> parts;
        if (r.has("components"))
            for (const auto& c : r.sub("components")) parts.push_back(stimulus_from_json(c));
        s = StimulusSpec::sum(std::move(parts));
    } else {
        throw ConfigError("stimulus.kind: unknown kind \"" + kind + "\"");
    }
    r.finish();
    s.validate();
    return s;
}

// --- neuron state / solver --------------------------------------------------------

Json to_json(const NeuronState& s) {
    return Json{{"v", s.v}, {"u", s.u}, {"x1", s.x1}, {"x2", s.x2}, {"vm2", s.vm2}};
}

NeuronState state_from_json(const Json& j) {
    FieldReader r(j, "state");
    NeuronState d;
    NeuronState s;
    s.v = r.num("v", d.v);
    s.u = r.num("u", d.u);
    s.x1 = r.num("x1", d.x1);
    s.x2 = r.num("x2", d.x2);
    s.vm2 = r.num("vm2", d.vm2);
    r.finish();
    return s;
}

Json to_json(const SolverConfig& s) {
    return Json{{"abs_tol", s.abs_tol},
                {"rel_tol", s.rel_tol},
                {"max_step", s.max_step},
                {"sample_dt", s.sample_dt}};
}

SolverConfig solver_from_json(const Json& j) {
    FieldReader r(j, "solver");
    SolverConfig d;
    SolverConfig s;
    s.abs_tol = r.num("abs_tol", d.abs_tol);
    s.rel_tol = r.num("rel_tol", d.rel_tol);
    s.max_step = r.num("max_step", d.max_step);
    s.sample_dt = r.num("sample_dt", d.sample_dt);
    r.finish();
    s.validate();
    return s;
}

// --- network -----------------------------------------------------------------------

Json to_json(const NetworkSpec& s) {
    Json neurons = Json::array(), edges = Json::array(), stimuli = Json::array(),
         initial = Json::array();
    for (const auto& n : s.neurons) neurons.push_back(to_json(n));
    for (const auto& e : s.edges)
        edges.push_back(Json{
            {"from", e.from}, {"to", e.to}, {"gain", e.gain}, {"delay", e.delay}});
    for (const auto& st : s.stimuli) stimuli.push_back(to_json(st));
    for (const auto& ini : s.initial) initial.push_back(to_json(ini));
    Json j{{"neurons", neurons}, {"edges", edges}, {"stimuli", stimuli}};
    if (!s.initial.empty()) j["initial"] = initial;
    return j;
}

NetworkSpec network_from_json(const Json& j) {
    FieldReader r(j, "network");
    NetworkSpec s;
    for (const auto& n : r.sub("neurons")) s.neurons.push_back(circuit_from_json(n));
    if (r.has("edges")) {
        for (const auto& e : r.sub("edges")) {
            FieldReader er(e, "network.edge");
            Edge edge;
            edge.from = std::size_t(er.integer("from", 0));
            edge.to = std::size_t(er.integer("to", 0));
            edge.gain = er.num("gain", 0.0);
            edge.delay = er.num("delay", 0.0);
            er.finish();
            s.edges.push_back(edge);
        }
    }
    for (const auto& st : r.sub("stimuli")) s.stimuli.push_back(stimulus_from_json(st));
    if (r.has("initial"))
        for (const auto& ini : r.sub("initial")) s.initial.push_back(state_from_json(ini));
    r.finish();
    s.validate();
    return s;
}

// --- QME -----------------------------------------------------------------------------

Json to_json(const QmeSpec& s) {
    Json rates = Json::array();
    for (const auto& d : s.decay_rates)
        rates.push_back(Json{
            {"channel", d.channel == DecayChannel::cavity_a ? "cavity_a" : "qubit_sigma"},
            {"rate", d.rate}});
    return Json{{"g", s.g},
                {"drive_intensity", s.drive_intensity},
                {"drive_timescale", s.drive_timescale},
                {"n_levels", s.n_levels},
                {"decay_rates", rates},
                {"t_start", s.t_grid.empty() ? 0.0 : s.t_grid.front()},
                {"t_end", s.t_grid.empty() ? 10.0 : s.t_grid.back()},
                {"t_samples", s.t_grid.empty() ? 501 : s.t_grid.size()},
                {"pop_floor", s.pop_floor}};
}

QmeSpec qme_from_json(const Json& j) {
    FieldReader r(j, "qme");
    QmeSpec s;
    s.g = r.num("g", 1.0);
    s.drive_intensity = r.num("drive_intensity", 10.0);
    s.drive_timescale = r.num("drive_timescale", 0.6);
    s.n_levels = r.integer("n_levels", 4);
    s.pop_floor = r.num("pop_floor", 1e-3);
    if (r.has("decay_rates")) {
        s.decay_rates.clear();
        for (const auto& d : r.sub("decay_rates")) {
            FieldReader dr(d, "qme.decay");
            DecayRate rate;
            const std::string ch = dr.str("channel", "cavity_a");
            if (ch == "cavity_a")
                rate.channel = DecayChannel::cavity_a;
            else if (ch == "qubit_sigma")
                rate.channel = DecayChannel::qubit_sigma;
            else
                throw ConfigError("qme.decay.channel: unknown channel \"" + ch + "\"");
            rate.rate = dr.num("rate", 0.15);
            dr.finish();
            s.decay_rates.push_back(rate);
        }
    }
    const double t0 = r.num("t_start", 0.0);
    const double t1 = r.num("t_end", 10.0);
    const int nt = r.integer("t_samples", 501);
    if (nt < 2 || !(t1 > t0)) throw ConfigError("qme: bad time grid specification");
    s.t_grid.resize(std::size_t(nt));
    for (int i = 0; i < nt; ++i)
        s.t_grid[std::size_t(i)] = t0 + (t1 - t0) * double(i) / double(nt - 1);
    r.finish();
    s.validate();
    return s;
}

// --- run configs ------------------------------------------------------------------------

Json to_json(const NeuronRunConfig& c) {
    return Json{{"circuit", to_json(c.circuit)},
                {"stimulus", to_json(c.stimulus)},
                {"initial", to_json(c.initial)},
                {"solver", to_json(c.solver)},
                {"t_end", c.t_end}};
}

NeuronRunConfig neuron_run_from_json(const Json& j) {
    FieldReader r(j, "neuron run");
    NeuronRunConfig c = default_neuron_run();
    if (r.has("circuit")) c.circuit = circuit_from_json(r.sub("circuit"));
    if (r.has("stimulus")) c.stimulus = stimulus_from_json(r.sub("stimulus"));
    if (r.has("initial")) c.initial = state_from_json(r.sub("initial"));
    if (r.has("solver")) c.solver = solver_from_json(r.sub("solver"));
    c.t_end = r.num("t_end", c.t_end);
    if (c.t_end <= 0.0) throw ConfigError("neuron run.t_end must be positive");
    r.finish();
    return c;
}

Json to_json(const NetworkRunConfig& c) {
    return Json{{"network", to_json(c.network)},
                {"solver", to_json(c.solver)},
                {"t_end", c.t_end}};
}

NetworkRunConfig network_run_from_json(const Json& j) {
    FieldReader r(j, "network run");
    NetworkRunConfig c;
    c.network = network_from_json(r.sub("network"));
    if (r.has("solver")) c.solver = solver_from_json(r.sub("solver"));
    c.t_end = r.num("t_end", c.t_end);
    if (c.t_end <= 0.0) throw ConfigError("network run.t_end must be positive");
    r.finish();
    return c;
}

Json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config: " + path);
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ConfigError("bad JSON in " + path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
}

Json to_json(const RunManifest& m) {
    return Json{{"command", m.command},
                {"argv", m.argv},
                {"config", m.resolved_config},
                {"seed", m.seed},
                {"tool_version", m.tool_version},
                {"output_directory", m.output_directory}};
}

RunManifest manifest_from_json(const Json& j) {
    FieldReader r(j, "manifest");
    RunManifest m;
    m.command = r.str("command", "");
    if (r.has("argv"))
        for (const auto& a : r.sub("argv")) m.argv.push_back(a.get<std::string>());
    if (r.has("config")) m.resolved_config = r.sub("config");
    m.seed = std::uint64_t(r.num("seed", 0.0));
    m.tool_version = r.str("tool_version", kToolVersion);
    m.output_directory = r.str("output_directory", "");
    r.finish();
    return m;
}

// --- calibrated decks ----------------------------------------------------------------------

CircuitParams default_warm_deck() {
    CircuitParams c;
    c.r3 = 0.5;
    c.r4 = 1.0;
    c.c1 = 100.0;
    c.c2 = 300.0;
    c.rail_voltage = 5.0;
    c.rail_damping = 10.0;
    MemristorParams m;
    m.alpha = 0.02;
    m.beta = -3.0;
    m.gamma = 0.2;
    m.delta = 5.0;
    m.lambda = 1.0;
    m.eta1 = 3e-4;
    m.eta2 = 3.0;
    m.tau = 5.0;
    c.mem1.params = m;
    c.mem2.params = m;
    return c;
}

CircuitParams adaptation_deck() {
    CircuitParams c = default_warm_deck();
    // slow mem1 discharging through the field-boosted retention; its rising
    // resistance loads the oscillator and stretches the spike intervals
    MemristorParams m = c.mem1.params;
    m.gamma = 0.1;
    m.delta = 2.0;
    m.lambda = 0.02;
    m.eta1 = 1e-5;
    m.tau = 1000.0;
    m.f_mode = IonVelocityMode::arrhenius_sinh;
    m.v_ref = 1.0;
    c.mem1.params = m;
    return c;
}

CircuitParams cryo_deck() {
    CircuitParams c;
    c.r3 = 0.001;
    c.r4 = 0.005;
    c.c1 = 100.0;
    c.c2 = 300.0;
    c.rail_voltage = 0.005;
    c.rail_damping = 10.0;
    MemristorParams m;
    m.lambda = 1.0;
    m.eta1 = 3e-3;
    m.eta2 = 10000.0;
    m.tau = 20.0;
    SuperconductingParams sc;  // defaults: Ic=0.1, gap 0.31 mV, Gqp=2, Gsg=0.1
    for (MemristorSlot* slot : {&c.mem1, &c.mem2}) {
        slot->params = m;
        slot->regime = MemristorRegime::superconducting;
        slot->sc = sc;
    }
    return c;
}

NeuronRunConfig default_neuron_run() {
    NeuronRunConfig c;
    c.circuit = default_warm_deck();
    c.stimulus = StimulusSpec::dc(1.5);
    c.initial = NeuronState{};
    c.solver.sample_dt = 10.0;
    c.t_end = 120000.0;
    return c;
}

NeuronRunConfig adaptation_neuron_run() {
    NeuronRunConfig c;
    c.circuit = adaptation_deck();
    c.stimulus = StimulusSpec::dc(1.5);
    c.initial = NeuronState{};
    c.initial.x1 = 0.9;
    c.solver.sample_dt = 10.0;
    c.t_end = 120000.0;
    return c;
}

NeuronRunConfig multitone_neuron_run() {
    // two incommensurate tones on top of the DC bias drive the oscillator
    // into a strongly modulated mode whose embedded output fills a surface
    // rather than a curve
    NeuronRunConfig c = default_neuron_run();
    c.stimulus = StimulusSpec::sum({StimulusSpec::dc(1.5),
                                    StimulusSpec::sine(1.0, 2.9e-4),
                                    StimulusSpec::sine(0.6, 1.13e-4)});
    c.t_end = 360000.0;
    return c;
}

NeuronRunConfig cryo_neuron_run() {
    NeuronRunConfig c;
    c.circuit = cryo_deck();
    c.stimulus = StimulusSpec::dc(0.5e-3);
    c.initial = NeuronState{};
    c.initial.v = 1e-6;
    c.solver.sample_dt = 0.05;
    c.solver.abs_tol = 1e-12;
    c.t_end = 300.0;
    return c;
}

}  // namespace neuromem
