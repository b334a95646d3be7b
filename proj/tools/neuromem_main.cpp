// neuromem: memristive artificial-neuron and superconductor-ionic QME toolkit.
//
// Subcommands:
//   device iv|fn|sc|coherence     device-level curves and analyses
//   neuron run                    single-neuron integration
//   network run|ring|hybrid       coupled networks
//   quantum evolve|g1|g2|converge Lindblad evolution and correlations
//   analyze ...                   post-processing of trajectory CSVs
//   sweep <config>                parameter sweeps (parallel)
//   rerun <manifest>              reproduce a previous run bit-exactly
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "neuromem/analysis.hpp"
#include "neuromem/config.hpp"
#include "neuromem/csv.hpp"
#include "neuromem/device.hpp"
#include "neuromem/errors.hpp"
#include "neuromem/plot.hpp"
#include "neuromem/quantum.hpp"

namespace fs = std::filesystem;
using namespace neuromem;

namespace {

struct GlobalOpts {
    std::string out_dir;
    bool plot = false;
    std::uint64_t seed = 0;
};

fs::path resolve_out(const GlobalOpts& g, const std::string& fallback) {
    fs::path base;
    if (!g.out_dir.empty()) {
        base = g.out_dir;
    } else if (const char* env = std::getenv("NEUROMEM_OUT")) {
        base = fs::path(env) / fallback;
    } else {
        base = fallback;
    }
    fs::create_directories(base);
    return base;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& argv, const Json& resolved,
                    std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    m.argv = argv;
    m.resolved_config = resolved;
    m.seed = seed;
    m.output_directory = dir.string();
    save_json_file((dir / "manifest.json").string(), to_json(m));
}

std::map<std::string, std::vector<double>> read_columns(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty csv: " + path);
    std::vector<std::string> names;
    {
        std::istringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) names.push_back(tok);
    }
    std::map<std::string, std::vector<double>> cols;
    std::vector<std::vector<double>*> order;
    for (const auto& n : names) order.push_back(&cols[n]);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        std::size_t k = 0;
        while (std::getline(ss, tok, ',') && k < order.size())
            order[k++]->push_back(std::stod(tok));
    }
    return cols;
}

Series column_as_series(const std::map<std::string, std::vector<double>>& cols,
                        const std::string& time_col, const std::string& value_col) {
    if (!cols.count(value_col)) throw ConfigError("csv has no column: " + value_col);
    if (!cols.count(time_col)) throw ConfigError("csv has no column: " + time_col);
    const auto& t = cols.at(time_col);
    Series s;
    if (t.size() >= 2) {
        s.dt = t[1] - t[0];
        for (std::size_t i = 2; i < t.size(); ++i)
            if (std::abs(t[i] - t[i - 1] - s.dt) > 1e-6 * std::max(s.dt, 1.0))
                throw ConfigError("column " + time_col + " is not a uniform grid");
    }
    s.values = cols.at(value_col);
    return s;
}

CircuitParams builtin_deck(const std::string& name) {
    if (name == "default") return default_warm_deck();
    if (name == "adaptation") return adaptation_deck();
    if (name == "cryo") return cryo_deck();
    throw ConfigError("unknown builtin deck: " + name +
                      " (expected default|adaptation|cryo)");
}

NeuronRunConfig builtin_run(const std::string& name) {
    if (name == "default") return default_neuron_run();
    if (name == "adaptation") return adaptation_neuron_run();
    if (name == "multitone") return multitone_neuron_run();
    if (name == "cryo") return cryo_neuron_run();
    throw ConfigError("unknown builtin run: " + name);
}

// --- command implementations (each takes the resolved config and runs) --------

void run_neuron_config(const NeuronRunConfig& cfg, const fs::path& out, bool plot) {
    const Trajectory tr =
        integrate_neuron(cfg.circuit, cfg.stimulus, cfg.t_end, cfg.solver, cfg.initial);
    write_trajectory_csv((out / "trajectory.csv").string(), tr);
    if (plot) {
        plot_series((out / "v_o.svg").string(), tr.t, tr.v, "output voltage", "t [us]",
                    "v_o [V]");
        plot_xy((out / "phase.svg").string(), phase_portrait(tr.v, tr.vmem2),
                "phase portrait", "v_o [V]", "V_mem2 [V]");
    }
}

void run_network_config(const NetworkRunConfig& cfg, const fs::path& out, bool plot) {
    const NetworkTrajectory tr = integrate_network(cfg.network, cfg.t_end, cfg.solver);
    write_network_csv((out / "network.csv").string(), tr);
    if (plot) {
        for (std::size_t i = 0; i < tr.neurons.size(); ++i)
            plot_series((out / ("n" + std::to_string(i) + "_v.svg")).string(), tr.t,
                        tr.neurons[i].v, "neuron " + std::to_string(i), "t [us]",
                        "v_o [V]");
    }
}

void run_qme_evolve(const QmeSpec& spec, const fs::path& out, bool plot, int snapshots) {
    EvolveOptions opts;
    opts.store_states = snapshots > 0;
    const EvolveResult res = evolve(ground_state(spec.n_levels), spec, opts);
    auto as_complex = [](const std::vector<double>& v) {
        std::vector<std::complex<double>> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
        return out;
    };
    write_complex_series_csv((out / "n_expect.csv").string(), res.t,
                             as_complex(res.n_expect));
    write_complex_series_csv((out / "q_expect.csv").string(), res.t,
                             as_complex(res.q_expect));
    {
        std::ofstream f(out / "portrait.csv");
        f << "n_expect,q_expect\n";
        for (std::size_t i = 0; i < res.t.size(); ++i)
            f << format_double(res.n_expect[i]) << ',' << format_double(res.q_expect[i])
              << '\n';
    }
    if (snapshots > 0) {
        const std::size_t stride = std::max<std::size_t>(1, res.states.size() /
                                                                std::size_t(snapshots));
        for (std::size_t i = 0; i < res.states.size(); i += stride)
            write_rho_snapshot((out / ("rho_" + std::to_string(i) + ".csv")).string(),
                               res.states[i], res.t[i]);
    }
    if (plot) {
        plot_series((out / "n_expect.svg").string(), res.t, res.n_expect,
                    "cavity population", "t", "<a^dag a>");
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < res.t.size(); ++i)
            pts.emplace_back(res.n_expect[i], res.q_expect[i]);
        plot_xy((out / "portrait.svg").string(), pts, "population phase portrait",
                "<a^dag a>", "<sigma^dag sigma>");
    }
}

void run_qme_correlation(const QmeSpec& spec, const fs::path& out, bool second_order) {
    const EvolveResult run = evolve(ground_state(spec.n_levels), spec);
    const std::size_t k0 = correlation_origin_index(run, spec.pop_floor);
    EvolveOptions opts;
    opts.store_states = true;
    QmeSpec head = spec;
    head.t_grid.assign(spec.t_grid.begin(), spec.t_grid.begin() + long(k0) + 1);
    QOperator rho_t0;
    if (head.t_grid.size() >= 2) {
        const EvolveResult to_origin = evolve(ground_state(spec.n_levels), head, opts);
        rho_t0 = to_origin.states.back();
    } else {
        rho_t0 = ground_state(spec.n_levels);
    }
    std::vector<double> tail(spec.t_grid.begin() + long(k0), spec.t_grid.end());
    const CorrelationSeries cs =
        second_order ? correlation_g2(spec, rho_t0, tail)
                     : correlation_g1(spec, rho_t0, tail);
    write_complex_series_csv((out / (second_order ? "g2.csv" : "g1.csv")).string(), cs.t,
                             cs.values);
}

void run_qme_converge(double intensity, const std::vector<int>& levels,
                      const fs::path& out) {
    std::ofstream f(out / "convergence.csv");
    f << "n_levels,max_n_expect\n";
    double prev = -1.0;
    std::vector<double> maxima;
    for (int n : levels) {
        const QmeSpec spec = [&] {
            QmeSpec s = QmeSpec::scenario(intensity, n);
            return s;
        }();
        const EvolveResult res = evolve(ground_state(n), spec);
        double mx = 0.0;
        for (double v : res.n_expect) mx = std::max(mx, v);
        f << n << ',' << format_double(mx) << '\n';
        maxima.push_back(mx);
        if (prev >= 0.0)
            std::cout << "N " << n << ": max<n> = " << mx << " (change "
                      << 100.0 * std::abs(mx - prev) / mx << "%)\n";
        else
            std::cout << "N " << n << ": max<n> = " << mx << "\n";
        prev = mx;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memristive artificial-neuron simulation toolkit"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--out", g.out_dir, "output directory");
    app.add_flag("--plot", g.plot, "emit SVG charts next to the CSVs");
    app.add_option("--seed", g.seed, "seed recorded in the manifest");

    std::vector<std::string> raw_args(argv + 1, argv + argc);

    // --- device ---------------------------------------------------------------
    auto* device = app.add_subcommand("device", "device-level curves");
    auto* dev_iv = device->add_subcommand("iv", "memristor IV sweep");
    std::string dev_deck;
    double iv_x = 0.5, iv_vmin = -1.0, iv_vmax = 1.0, iv_rate = 0.0;
    int iv_points = 201;
    dev_iv->add_option("--deck", dev_deck, "memristor params JSON file");
    dev_iv->add_option("--x", iv_x, "frozen state value");
    dev_iv->add_option("--vmin", iv_vmin);
    dev_iv->add_option("--vmax", iv_vmax);
    dev_iv->add_option("--points", iv_points);
    dev_iv->add_option("--sweep-rate", iv_rate,
                       "V/us triangular sweep with live state dynamics (0 = static)");

    auto* dev_fn = device->add_subcommand("fn", "Fowler-Nordheim regime analysis");
    std::string fn_input;
    double fn_height = 2.2, fn_thick = 4.2, fn_temp = 300.0, fn_vmax = 8.0;
    dev_fn->add_option("--input", fn_input, "IV csv to analyze (else generated)");
    dev_fn->add_option("--height", fn_height, "barrier height [eV]");
    dev_fn->add_option("--thickness", fn_thick, "barrier thickness [nm]");
    dev_fn->add_option("--temp", fn_temp, "temperature [K]");
    dev_fn->add_option("--vmax", fn_vmax, "sweep limit [V]");

    auto* dev_sc = device->add_subcommand("sc", "superconducting branch IV");
    double sc_x = 0.0, sc_vmax_mv = 1.0;
    int sc_points = 401;
    dev_sc->add_option("--x", sc_x);
    dev_sc->add_option("--vmax-mv", sc_vmax_mv);
    dev_sc->add_option("--points", sc_points);

    auto* dev_coh = device->add_subcommand("coherence", "proximity coherence length");
    double coh_vf = 1000.0, coh_ln = 5.0, coh_tmin = 1.0, coh_tmax = 20.0;
    int coh_points = 96;
    dev_coh->add_option("--vf", coh_vf, "Fermi velocity [nm/ps]");
    dev_coh->add_option("--ln", coh_ln, "mean free path [nm]");
    dev_coh->add_option("--tmin", coh_tmin);
    dev_coh->add_option("--tmax", coh_tmax);
    dev_coh->add_option("--points", coh_points);

    // --- neuron -----------------------------------------------------------------
    auto* neuron = app.add_subcommand("neuron", "single-neuron runs");
    auto* neuron_run = neuron->add_subcommand("run", "integrate one neuron");
    std::string neuron_deck, neuron_builtin = "default";
    double neuron_tend = 0.0;
    neuron_run->add_option("--deck", neuron_deck, "NeuronRunConfig JSON file");
    neuron_run->add_option("--builtin", neuron_builtin,
                       "default|adaptation|multitone|cryo");
    neuron_run->add_option("--t-end", neuron_tend, "override horizon [us]");

    // --- network -----------------------------------------------------------------
    auto* network = app.add_subcommand("network", "coupled networks");
    auto* net_run = network->add_subcommand("run", "integrate a network spec");
    std::string net_spec_path;
    net_run->add_option("--spec", net_spec_path, "NetworkRunConfig JSON")->required();

    auto* net_ring = network->add_subcommand("ring", "directed ring of identical neurons");
    std::size_t ring_n = 4;
    double ring_gain = -0.3, ring_tend = 120000.0, ring_detune = 0.02;
    std::string ring_builtin = "default";
    net_ring->add_option("--n", ring_n);
    net_ring->add_option("--gain", ring_gain);
    net_ring->add_option("--t-end", ring_tend);
    net_ring->add_option("--builtin", ring_builtin);
    net_ring->add_option("--detune", ring_detune,
                         "per-node fractional stimulus detune (breaks symmetry)");

    auto* net_hybrid = network->add_subcommand("hybrid", "warm/cryo mutual pair");
    double hyb_gwc = 1.3e-4, hyb_gcw = 300.0, hyb_tend = 16000.0;
    net_hybrid->add_option("--gain-wc", hyb_gwc, "warm -> cryo gain");
    net_hybrid->add_option("--gain-cw", hyb_gcw, "cryo -> warm gain");
    net_hybrid->add_option("--t-end", hyb_tend);

    // --- quantum ------------------------------------------------------------------
    auto* quantum = app.add_subcommand("quantum", "Lindblad evolution");
    double q_A = 10.0, q_e = 0.6, q_decay = 0.15, q_tend = 10.0;
    int q_N = 4, q_samples = 501, q_snapshots = 0;
    auto add_qme_opts = [&](CLI::App* cmd) {
        cmd->add_option("--A", q_A, "drive intensity");
        cmd->add_option("--N", q_N, "cavity truncation levels");
        cmd->add_option("--decay", q_decay, "decay rate for both channels");
        cmd->add_option("--e", q_e, "drive timescale");
        cmd->add_option("--t-end", q_tend);
        cmd->add_option("--samples", q_samples);
    };
    auto* q_evolve = quantum->add_subcommand("evolve", "expectation time series");
    add_qme_opts(q_evolve);
    q_evolve->add_option("--snapshots", q_snapshots, "store this many rho snapshots");
    auto* q_g1 = quantum->add_subcommand("g1", "first-order correlation");
    add_qme_opts(q_g1);
    auto* q_g2 = quantum->add_subcommand("g2", "second-order correlation");
    add_qme_opts(q_g2);
    auto* q_conv = quantum->add_subcommand("converge", "truncation sweep");
    std::vector<int> conv_levels{4, 8, 12};
    q_conv->add_option("--A", q_A, "drive intensity");
    q_conv->add_option("--levels", conv_levels, "cavity truncations to compare");

    // --- analyze --------------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "post-processing");
    std::string an_input, an_channel = "v_o", an_time = "t_us", an_x = "v_o",
                an_y = "V_mem2";
    double an_threshold = 0.0, an_band = 0.0, an_refractory = 0.0, an_window = 50.0;
    int an_dim = 2, an_lag = 1;
    double an_fc = 20.0, an_fs = 200.0;
    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("--input", an_input, "input CSV")->required();
        cmd->add_option("--time-col", an_time, "time column name");
    };
    auto* an_spikes = analyze->add_subcommand("spikes", "Schmitt-trigger spike detection");
    add_input(an_spikes);
    an_spikes->add_option("--channel", an_channel);
    an_spikes->add_option("--threshold", an_threshold);
    an_spikes->add_option("--band", an_band);
    an_spikes->add_option("--refractory", an_refractory);
    auto* an_rate = analyze->add_subcommand("rate", "windowed spike rate");
    add_input(an_rate);
    an_rate->add_option("--channel", an_channel);
    an_rate->add_option("--window", an_window, "window [us]");
    auto* an_phase = analyze->add_subcommand("phase", "phase portrait pairing");
    add_input(an_phase);
    an_phase->add_option("--x", an_x);
    an_phase->add_option("--y", an_y);
    auto* an_embed = analyze->add_subcommand("embed", "delay embedding");
    add_input(an_embed);
    an_embed->add_option("--channel", an_channel);
    an_embed->add_option("--dim", an_dim);
    an_embed->add_option("--lag", an_lag);
    auto* an_spectrum = analyze->add_subcommand("spectrum", "power spectrum");
    add_input(an_spectrum);
    an_spectrum->add_option("--channel", an_channel);
    auto* an_segments = analyze->add_subcommand("segments", "itinerancy segmentation");
    add_input(an_segments);
    an_segments->add_option("--channel", an_channel);
    double seg_window = 0.0;
    an_segments->add_option("--window", seg_window, "feature window [us]");
    auto* an_mod = analyze->add_subcommand("modulate", "IQ modulation round trip");
    add_input(an_mod);
    an_mod->add_option("--channel", an_channel);
    an_mod->add_option("--fc", an_fc, "carrier [MHz]");
    an_mod->add_option("--fs", an_fs, "sampling rate [MHz]");

    // --- sweep / rerun -----------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "parameter sweep from a config file");
    std::string sweep_config;
    int sweep_jobs = int(std::thread::hardware_concurrency());
    sweep->add_option("config", sweep_config, "sweep JSON")->required();
    sweep->add_option("--jobs", sweep_jobs, "parallel workers");

    auto* rerun = app.add_subcommand("rerun", "reproduce a run from its manifest");
    std::string rerun_manifest;
    rerun->add_option("manifest", rerun_manifest, "manifest.json path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        // ---- device --------------------------------------------------------
        if (dev_iv->parsed()) {
            const fs::path out = resolve_out(g, "out_device_iv");
            MemristorParams p;
            if (!dev_deck.empty()) p = memristor_from_json(load_json_file(dev_deck));
            Json cfgj{{"deck", to_json(p)},   {"x", iv_x},
                      {"vmin", iv_vmin},      {"vmax", iv_vmax},
                      {"points", iv_points},  {"sweep_rate", iv_rate}};
            write_manifest(out, "device iv", raw_args, cfgj, g.seed);
            IvCurve curve;
            if (iv_rate <= 0.0) {
                for (int i = 0; i < iv_points; ++i) {
                    const double v =
                        iv_vmin + (iv_vmax - iv_vmin) * double(i) / double(iv_points - 1);
                    curve.voltage.push_back(v);
                    curve.current.push_back(chang_current(v, iv_x, p));
                }
            } else {
                curve = swept_iv(p, iv_vmax, iv_vmin, iv_rate, iv_x);
            }
            write_iv_csv((out / "iv.csv").string(), curve);
            if (g.plot) {
                std::vector<std::pair<double, double>> pts;
                for (std::size_t i = 0; i < curve.voltage.size(); ++i)
                    pts.emplace_back(curve.voltage[i], curve.current[i]);
                plot_xy((out / "iv.svg").string(), pts, "memristor IV", "V [volts]",
                        "I [mA]");
            }
        } else if (dev_fn->parsed()) {
            const fs::path out = resolve_out(g, "out_device_fn");
            Json cfgj{{"input", fn_input},
                      {"height", fn_height},
                      {"thickness", fn_thick},
                      {"temperature", fn_temp},
                      {"vmax", fn_vmax}};
            write_manifest(out, "device fn", raw_args, cfgj, g.seed);
            IvCurve curve;
            if (!fn_input.empty()) {
                curve = read_iv_csv(fn_input);
            } else {
                BarrierSpec b;
                b.height = fn_height;
                b.thickness = fn_thick;
                for (double v = 0.5; v <= fn_vmax + 1e-9; v += 0.125) {
                    curve.voltage.push_back(v);
                    curve.current.push_back(nin_tunnel_current(v, b, fn_temp));
                }
                write_iv_csv((out / "iv.csv").string(), curve);
            }
            const FnReport rep = fn_analysis(curve);
            Json repj{{"fe_detected", rep.fe_detected},
                      {"fe_slope", rep.fe_slope},
                      {"fe_v_min", rep.fe_v_min},
                      {"fe_v_max", rep.fe_v_max},
                      {"dt_v_min", rep.dt_v_min},
                      {"dt_v_max", rep.dt_v_max},
                      {"r_squared", rep.r_squared},
                      {"fe_points", rep.fe_points}};
            save_json_file((out / "fn_report.json").string(), repj);
            std::cout << (rep.fe_detected
                              ? "field-emission regime detected, slope " +
                                    std::to_string(rep.fe_slope)
                              : std::string("no field-emission regime detected"))
                      << "\n";
        } else if (dev_sc->parsed()) {
            const fs::path out = resolve_out(g, "out_device_sc");
            SuperconductingParams p;
            Json cfgj{{"params", to_json(p)}, {"x", sc_x}, {"vmax_mv", sc_vmax_mv},
                      {"points", sc_points}};
            write_manifest(out, "device sc", raw_args, cfgj, g.seed);
            IvCurve curve;
            for (int i = 0; i < sc_points; ++i) {
                const double vm =
                    -sc_vmax_mv + 2.0 * sc_vmax_mv * double(i) / double(sc_points - 1);
                curve.voltage.push_back(vm * 1e-3);
                curve.current.push_back(sc_current(vm * 1e-3, sc_x, p));
            }
            write_iv_csv((out / "sc_iv.csv").string(), curve);
        } else if (dev_coh->parsed()) {
            const fs::path out = resolve_out(g, "out_device_coherence");
            Json cfgj{{"vf", coh_vf}, {"ln", coh_ln}, {"tmin", coh_tmin},
                      {"tmax", coh_tmax}, {"points", coh_points}};
            write_manifest(out, "device coherence", raw_args, cfgj, g.seed);
            std::vector<double> t(coh_points), xi(coh_points);
            for (int i = 0; i < coh_points; ++i) {
                t[i] = coh_tmin + (coh_tmax - coh_tmin) * double(i) / double(coh_points - 1);
                xi[i] = coherence_length(coh_vf, coh_ln, t[i]);
            }
            write_real_series_csv((out / "coherence.csv").string(), t, xi, "xi_nm");
        }
        // ---- neuron --------------------------------------------------------
        else if (neuron_run->parsed()) {
            const fs::path out = resolve_out(g, "out_neuron_run");
            NeuronRunConfig cfg = neuron_deck.empty()
                                      ? builtin_run(neuron_builtin)
                                      : neuron_run_from_json(load_json_file(neuron_deck));
            if (neuron_tend > 0.0) cfg.t_end = neuron_tend;
            write_manifest(out, "neuron run", raw_args, to_json(cfg), g.seed);
            run_neuron_config(cfg, out, g.plot);
        }
        // ---- network -------------------------------------------------------
        else if (net_run->parsed()) {
            const fs::path out = resolve_out(g, "out_network_run");
            const NetworkRunConfig cfg = network_run_from_json(load_json_file(net_spec_path));
            write_manifest(out, "network run", raw_args, to_json(cfg), g.seed);
            run_network_config(cfg, out, g.plot);
        } else if (net_ring->parsed()) {
            const fs::path out = resolve_out(g, "out_network_ring");
            NetworkRunConfig cfg;
            cfg.network = build_ring(ring_n, ring_gain, builtin_deck(ring_builtin),
                                     StimulusSpec::dc(1.5));
            for (std::size_t i = 0; i < ring_n; ++i) {
                cfg.network.stimuli[i] =
                    StimulusSpec::dc(1.5 * (1.0 + ring_detune * double(i)));
                NeuronState ini;
                ini.v = 1e-3 * double(i + 1);
                ini.x2 = 0.05 + 0.1 * double(i);
                cfg.network.initial.push_back(ini);
            }
            cfg.t_end = ring_tend;
            write_manifest(out, "network ring", raw_args, to_json(cfg), g.seed);
            run_network_config(cfg, out, g.plot);
        } else if (net_hybrid->parsed()) {
            const fs::path out = resolve_out(g, "out_network_hybrid");
            NetworkRunConfig cfg;
            cfg.network = hybrid_pair(default_warm_deck(), cryo_deck(), hyb_gwc, hyb_gcw,
                                      StimulusSpec::dc(1.5), StimulusSpec::dc(0.5e-3));
            NeuronState cryo_init;
            cryo_init.v = 1e-6;
            cfg.network.initial = {NeuronState{}, cryo_init};
            cfg.t_end = hyb_tend;
            cfg.solver.sample_dt = 0.25;
            write_manifest(out, "network hybrid", raw_args, to_json(cfg), g.seed);
            run_network_config(cfg, out, g.plot);
        }
        // ---- quantum -------------------------------------------------------
        else if (q_evolve->parsed() || q_g1->parsed() || q_g2->parsed()) {
            QmeSpec spec;
            spec.drive_intensity = q_A;
            spec.n_levels = q_N;
            spec.drive_timescale = q_e;
            spec.decay_rates = {{DecayChannel::cavity_a, q_decay},
                                {DecayChannel::qubit_sigma, q_decay}};
            spec.t_grid.resize(std::size_t(q_samples));
            for (int i = 0; i < q_samples; ++i)
                spec.t_grid[std::size_t(i)] = q_tend * double(i) / double(q_samples - 1);
            const std::string name = q_evolve->parsed() ? "evolve"
                                     : q_g1->parsed()   ? "g1"
                                                        : "g2";
            const fs::path out = resolve_out(g, "out_quantum_" + name);
            write_manifest(out, "quantum " + name, raw_args, to_json(spec), g.seed);
            if (q_evolve->parsed())
                run_qme_evolve(spec, out, g.plot, q_snapshots);
            else
                run_qme_correlation(spec, out, q_g2->parsed());
        } else if (q_conv->parsed()) {
            const fs::path out = resolve_out(g, "out_quantum_converge");
            Json cfgj{{"A", q_A}, {"levels", conv_levels}};
            write_manifest(out, "quantum converge", raw_args, cfgj, g.seed);
            run_qme_converge(q_A, conv_levels, out);
        }
        // ---- analyze -------------------------------------------------------
        else if (an_spikes->parsed() || an_rate->parsed()) {
            const auto cols = read_columns(an_input);
            const Series s = column_as_series(cols, an_time, an_channel);
            SpikeConfig sc;
            sc.threshold = an_threshold;
            sc.hysteresis_band = an_band;
            sc.refractory = an_refractory;
            const SpikeTrain train = detect_spikes(s, sc);
            if (an_spikes->parsed()) {
                const fs::path out = resolve_out(g, "out_analyze_spikes");
                Json cfgj{{"input", an_input}, {"channel", an_channel}};
                write_manifest(out, "analyze spikes", raw_args, cfgj, g.seed);
                write_spikes_csv((out / "spikes.csv").string(), train);
                std::cout << train.times.size() << " spikes\n";
            } else {
                const fs::path out = resolve_out(g, "out_analyze_rate");
                Json cfgj{{"input", an_input},
                          {"channel", an_channel},
                          {"window", an_window}};
                write_manifest(out, "analyze rate", raw_args, cfgj, g.seed);
                const RateCurve rc = rate_curve(train, an_window, s.duration());
                write_rate_csv((out / "rate.csv").string(), rc);
                std::cout << "first-window " << rc.first_window_rate << " kHz, last-window "
                          << rc.last_window_rate << " kHz\n";
                if (g.plot)
                    plot_series((out / "rate.svg").string(), rc.t, rc.rate, "spike rate",
                                "t [us]", "rate [kHz]");
            }
        } else if (an_phase->parsed()) {
            const fs::path out = resolve_out(g, "out_analyze_phase");
            const auto cols = read_columns(an_input);
            Json cfgj{{"input", an_input}, {"x", an_x}, {"y", an_y}};
            write_manifest(out, "analyze phase", raw_args, cfgj, g.seed);
            if (!cols.count(an_x) || !cols.count(an_y))
                throw ConfigError("csv missing requested columns");
            const auto pts = phase_portrait(cols.at(an_x), cols.at(an_y));
            std::ofstream f(out / "phase.csv");
            f << an_x << ',' << an_y << '\n';
            for (const auto& p : pts)
                f << format_double(p.first) << ',' << format_double(p.second) << '\n';
            if (g.plot)
                plot_xy((out / "phase.svg").string(), pts, "phase portrait", an_x, an_y);
        } else if (an_embed->parsed()) {
            const fs::path out = resolve_out(g, "out_analyze_embed");
            const auto cols = read_columns(an_input);
            const Series s = column_as_series(cols, an_time, an_channel);
            Json cfgj{{"input", an_input}, {"dim", an_dim}, {"lag", an_lag}};
            write_manifest(out, "analyze embed", raw_args, cfgj, g.seed);
            const auto emb = delay_embed(s.values, an_dim, an_lag);
            std::ofstream f(out / "embedding.csv");
            for (int d = 0; d < an_dim; ++d) f << (d ? "," : "") << "e" << d;
            f << '\n';
            for (const auto& row : emb) {
                for (int d = 0; d < an_dim; ++d)
                    f << (d ? "," : "") << format_double(row[std::size_t(d)]);
                f << '\n';
            }
            if (emb.size() >= 256)
                std::cout << "correlation dimension estimate: "
                          << correlation_dimension(emb) << "\n";
        } else if (an_spectrum->parsed()) {
            const fs::path out = resolve_out(g, "out_analyze_spectrum");
            const auto cols = read_columns(an_input);
            const Series s = column_as_series(cols, an_time, an_channel);
            Json cfgj{{"input", an_input}, {"channel", an_channel}};
            write_manifest(out, "analyze spectrum", raw_args, cfgj, g.seed);
            const Spectrum sp = power_spectrum(s);
            write_spectrum_csv((out / "spectrum.csv").string(), sp);
            if (g.plot)
                plot_series((out / "spectrum.svg").string(), sp.freq, sp.power,
                            "power spectrum", "f [MHz]", "|X|^2");
        } else if (an_segments->parsed()) {
            const fs::path out = resolve_out(g, "out_analyze_segments");
            const auto cols = read_columns(an_input);
            const Series s = column_as_series(cols, an_time, an_channel);
            Json cfgj{{"input", an_input}, {"channel", an_channel}, {"window", seg_window}};
            write_manifest(out, "analyze segments", raw_args, cfgj, g.seed);
            SegmentConfig sc;
            sc.window = seg_window;
            const auto segs = itinerancy_segments(s, sc);
            write_segments_csv((out / "segments.csv").string(), segs);
            int modes = 0;
            for (const auto& sg : segs) modes = std::max(modes, sg.mode_label + 1);
            std::cout << segs.size() << " segments, " << modes << " modes\n";
            if (g.plot) plot_segments((out / "segments.svg").string(), segs, "itinerancy");
        } else if (an_mod->parsed()) {
            const fs::path out = resolve_out(g, "out_analyze_modulate");
            const auto cols = read_columns(an_input);
            Series base = column_as_series(cols, an_time, an_channel);
            Json cfgj{{"input", an_input}, {"fc", an_fc}, {"fs", an_fs}};
            write_manifest(out, "analyze modulate", raw_args, cfgj, g.seed);
            // normalize and resample the baseband onto the passband grid
            double peak = 0.0;
            for (double v : base.values) peak = std::max(peak, std::abs(v));
            if (peak > 0.0)
                for (double& v : base.values) v /= peak;
            Series resampled;
            resampled.dt = 1.0 / an_fs;
            const double dur = base.duration();
            const std::size_t n = std::size_t(dur / resampled.dt);
            resampled.values.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double t = double(i) * resampled.dt;
                const double idx = t / base.dt;
                const std::size_t i0 = std::min(std::size_t(idx), base.values.size() - 2);
                const double frac = idx - double(i0);
                resampled.values[i] =
                    base.values[i0] * (1.0 - frac) + base.values[i0 + 1] * frac;
            }
            const Series pass = iq_modulate(resampled, an_fc, an_fs);
            const Series demod = envelope_demod(pass, an_fc, an_fs);
            std::vector<double> tt(n);
            for (std::size_t i = 0; i < n; ++i) tt[i] = double(i) * resampled.dt;
            write_real_series_csv((out / "passband.csv").string(), tt, pass.values,
                                  "passband");
            write_real_series_csv((out / "demodulated.csv").string(), tt, demod.values,
                                  "baseband_estimate");
            std::cout << "round-trip correlation: "
                      << pearson_correlation(resampled.values, demod.values) << "\n";
        }
        // ---- sweep ----------------------------------------------------------
        else if (sweep->parsed()) {
            const Json cfg = load_json_file(sweep_config);
            if (!cfg.contains("kind") || !cfg.contains("base") || !cfg.contains("path") ||
                !cfg.contains("values"))
                throw ConfigError("sweep config needs kind, base, path, values");
            const std::string kind = cfg["kind"].get<std::string>();
            const fs::path out = resolve_out(g, "out_sweep");
            write_manifest(out, "sweep", raw_args, cfg, g.seed);
            const auto& values = cfg["values"];
            std::vector<std::thread> workers;
            std::atomic<std::size_t> cursor{0};
            std::atomic<bool> failed{false};
            const int jobs = std::max(1, sweep_jobs);
            auto work = [&]() {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= values.size() || failed.load()) return;
                    try {
                        Json point = cfg["base"];
                        point[Json::json_pointer(cfg["path"].get<std::string>())] =
                            values[std::size_t(i)];
                        const fs::path sub = out / ("point_" + std::to_string(i));
                        fs::create_directories(sub);
                        Json pm{{"index", i}, {"value", values[std::size_t(i)]},
                                {"config", point}};
                        save_json_file((sub / "manifest.json").string(),
                                       Json{{"command", "sweep point"},
                                            {"argv", raw_args},
                                            {"config", pm},
                                            {"seed", g.seed},
                                            {"tool_version", kToolVersion},
                                            {"output_directory", sub.string()}});
                        if (kind == "neuron")
                            run_neuron_config(neuron_run_from_json(point), sub, false);
                        else if (kind == "network")
                            run_network_config(network_run_from_json(point), sub, false);
                        else
                            throw ConfigError("sweep kind must be neuron or network");
                    } catch (...) {
                        failed.store(true);
                        throw;
                    }
                }
            };
            for (int j = 0; j < jobs; ++j) workers.emplace_back(work);
            for (auto& w : workers) w.join();
            if (failed.load()) throw SolverError("sweep: a point failed");
        }
        // ---- rerun ----------------------------------------------------------
        else if (rerun->parsed()) {
            const RunManifest m = manifest_from_json(load_json_file(rerun_manifest));
            const fs::path out = resolve_out(g, "out_rerun");
            write_manifest(out, m.command, m.argv, m.resolved_config, m.seed);
            if (m.command == "neuron run")
                run_neuron_config(neuron_run_from_json(m.resolved_config), out, false);
            else if (m.command == "network run" || m.command == "network ring" ||
                     m.command == "network hybrid")
                run_network_config(network_run_from_json(m.resolved_config), out, false);
            else if (m.command == "quantum evolve")
                run_qme_evolve(qme_from_json(m.resolved_config), out, false, 0);
            else if (m.command == "quantum g1")
                run_qme_correlation(qme_from_json(m.resolved_config), out, false);
            else if (m.command == "quantum g2")
                run_qme_correlation(qme_from_json(m.resolved_config), out, true);
            else
                throw ConfigError("rerun does not support command: " + m.command);
        } else {
            std::cerr << "no subcommand action matched\n";
            return 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
