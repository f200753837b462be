#pragma once

#include "dqc/distribution.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace dqc {

struct AnnealParams {
    int iterations = 10000;
    double initial_temperature = 0.0;   // <= 0: mean |gain| of 50 probe moves
    double cooling = 0.995;
    std::uint64_t seed = 0;
};

// A proposed reallocation. Qubit moves into a full module carry a swap partner.
struct Move {
    Vertex vertex;
    int from = 0;
    int to = 0;
    std::optional<int> swap_with;
};

// Capacity-respecting random qubit allocation; gates sit with their first qubit.
Distribution random_allocation(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net,
                               std::uint64_t seed);

// Multi-start k-way Fiduccia-Mattheyses on the basic hypergraph, minimising
// the connectivity metric under computation-register capacities. Each gate
// then goes to whichever of its qubits' modules is cheaper. Throws Infeasible.
Distribution initial_partition(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net,
                               std::uint64_t seed, int starts = 8);

// Simulated annealing over random vertex moves, Steiner-aware costs; returns
// the best allocation seen.
Distribution anneal(Distribution d, const AnnealParams& p);

struct BoundaryOptions {
    int max_rounds = 20;
    bool gates_only = false;        // keep qubit-vertices where they are
    bool any_module = false;        // targets: every module instead of neighbour-occupied ones
    bool freeze_embedded = false;   // CZ gates embedded by a unit never move
    std::uint64_t seed = 0;
};

// Per round, every vertex of a costly hyperedge takes its best non-negative
// gain move (ties broken randomly). Stops after a round that gains nothing.
Distribution boundary_reallocate(Distribution d, const BoundaryOptions& opt);
Distribution boundary_reallocate(Distribution d, int max_rounds, std::uint64_t seed = 0);

// Throws Infeasible if the network cannot hold the circuit.
void check_capacity(const IndexedCircuit& ic, const Network& net);

} // namespace dqc
