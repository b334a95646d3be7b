#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "neuromem/neuron.hpp"
#include "neuromem/network.hpp"
#include "neuromem/quantum.hpp"

namespace neuromem {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// JSON <-> struct converters. Loading fills defaults for missing keys,
// validates ranges and rejects unknown keys naming the offender; saving emits
// the fully-resolved form, so save(load(x)) is idempotent.
Json to_json(const MemristorParams& p);
MemristorParams memristor_from_json(const Json& j);

Json to_json(const SuperconductingParams& p);
SuperconductingParams superconducting_from_json(const Json& j);

Json to_json(const MemristorSlot& s);
MemristorSlot slot_from_json(const Json& j);

Json to_json(const CircuitParams& c);
CircuitParams circuit_from_json(const Json& j);

Json to_json(const StimulusSpec& s);
StimulusSpec stimulus_from_json(const Json& j);

Json to_json(const NeuronState& s);
NeuronState state_from_json(const Json& j);

Json to_json(const SolverConfig& s);
SolverConfig solver_from_json(const Json& j);

Json to_json(const NetworkSpec& s);
NetworkSpec network_from_json(const Json& j);

Json to_json(const QmeSpec& s);
QmeSpec qme_from_json(const Json& j);

// A neuron-run deck: circuit + stimulus + initial state + solver + horizon.
struct NeuronRunConfig {
    CircuitParams circuit;
    StimulusSpec stimulus;
    NeuronState initial;
    SolverConfig solver;
    double t_end = 120000.0;
};

Json to_json(const NeuronRunConfig& c);
NeuronRunConfig neuron_run_from_json(const Json& j);

struct NetworkRunConfig {
    NetworkSpec network;
    SolverConfig solver;
    double t_end = 120000.0;
};

Json to_json(const NetworkRunConfig& c);
NetworkRunConfig network_run_from_json(const Json& j);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

// Run manifest written into every output directory before any result file.
struct RunManifest {
    std::string command;                    // subcommand path, e.g. "neuron run"
    std::vector<std::string> argv;          // original arguments
    Json resolved_config;                   // fully-defaulted deck
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string output_directory;
};

Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

// Built-in calibrated decks (also shipped as JSON under decks/).
CircuitParams default_warm_deck();
CircuitParams adaptation_deck();
CircuitParams cryo_deck();
NeuronRunConfig default_neuron_run();
NeuronRunConfig adaptation_neuron_run();
NeuronRunConfig multitone_neuron_run();
NeuronRunConfig cryo_neuron_run();

}  // namespace neuromem
