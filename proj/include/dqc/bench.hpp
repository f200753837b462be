#pragma once

#include "dqc/circuit.hpp"
#include "dqc/network.hpp"
#include "dqc/workflows.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dqc {

// Each layer: H with probability 1-p per qubit, the rest paired at random
// with a CZ per pair. An odd leftover qubit idles for that layer.
Circuit gen_cz_fraction(int n, int d, double p, std::uint64_t seed);

// Each layer: random pairing, and per pair three CZs interleaved with random
// Euler triples Rz.H.Rz.H.Rz on both qubits (stands in for a Haar-random SU(4)).
Circuit gen_quantum_volume(int n, int d, std::uint64_t seed);

// Each layer: random Pauli string and angle alpha in [0, 2pi); all-identity
// strings are skipped. Adjacent H pairs on one qubit are cancelled.
Circuit gen_pauli_gadget(int n, int d, std::uint64_t seed);

// exp(i * alpha * P) up to global phase, P given as one letter of IXYZ per
// qubit; alpha in radians. CX ladder over the non-identity qubits.
void append_pauli_gadget(Circuit& c, std::string_view paulis, double alpha);

enum class CircuitClass { CzFraction, QuantumVolume, PauliGadget };

CircuitClass circuit_class_from_name(const std::string& s);   // throws InvalidParams
std::string circuit_class_name(CircuitClass c);

// layers == 0 means layers = qubits.
Circuit gen_circuit(CircuitClass cls, int qubits, int layers, std::uint64_t seed, double p = 0.5);

// ---------------------------------------------------------------- harness

struct CircuitSource {
    std::string label;
    Circuit circuit;
};

struct NetworkSource {
    std::string label;
    std::optional<Network> fixed;   // file or inline network
    NetworkKind kind = NetworkKind::Homogeneous;
    int modules = 2;
    int qubits = 0;                 // 0: sized to each circuit
    std::uint64_t seed = 0;
    std::optional<int> link;        // overrides the generated link register; -1 unbounded
};

struct ExperimentConfig {
    std::vector<CircuitSource> circuits;
    std::vector<NetworkSource> networks;
    std::vector<Workflow> workflows;
    std::vector<std::uint64_t> seeds{0};
    WorkflowOptions options;
    bool verify = false;
    int jobs = 1;
};

// Reads
//   {"circuits": [{"class": "pauli_gadget", "qubits": 6, "layers": 6, "seed": 1, "p": 0.5}
//                 | {"file": "c.json"} | {"inline": {...}}, ...],
//    "networks": [{"kind": "small_world", "modules": 3, "qubits": 0, "seed": 2, "link": 3}
//                 | {"file": "n.json"} | {"inline": {...}}, ...],
//    "workflows": [...], "seeds": [...], "anneal_iterations": n, "rounds": n,
//    "verify": bool, "jobs": n}
// Every list may be empty or absent; workflows default to all of them.
// Relative file paths resolve against `base_dir`.
ExperimentConfig config_from_json(const std::string& text, const std::string& base_dir = ".");

struct ExperimentRow {
    std::string workflow;
    std::string network;
    std::string circuit;
    std::uint64_t seed = 0;
    int ebits = 0;
    int detached = 0;
    int nonlocal = 0;
    int hyperedges = 0;
    int peak_links = 0;
    double wall_time = 0.0;   // seconds
    bool failed = false;
    std::string error;
};

// Rows in config order (circuit, network, workflow, seed), run on `jobs` workers.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

} // namespace dqc
