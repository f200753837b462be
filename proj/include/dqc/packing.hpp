#pragma once

#include "dqc/distribution.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dqc {

using EmbeddingUnit = UnitSpan;

// Non-local CRz gates on `root` whose partners all sit on `remote`, with only
// diagonal gates on the root between them (or embedding units, once merged).
struct Packet {
    int root = 0;
    int remote = 0;
    std::vector<int> gates;      // distributed members, ascending
    std::vector<int> units;      // indices into the unit list this packet embeds
    std::vector<int> embedded;   // CZ gates embedded by those units

    int first() const;
    int last() const;
};

// Per qubit, per H-free segment, per remote module: one maximal packet.
// Every non-local CRz lands in exactly two packets, one per qubit.
std::vector<Packet> identify_packets(const IndexedCircuit& ic, const std::vector<int>& phi_q);

// Every H-delimited span satisfying the embedding conditions, ordered by
// (root, first H).
std::vector<EmbeddingUnit> identify_embedding_units(const IndexedCircuit& ic, const std::vector<int>& phi_q);

// Vertices are units used by merges; an edge joins two units on different
// roots that both embed some CZ.
struct ConflictGraph {
    std::vector<int> units;                   // indices into the unit list
    std::vector<std::pair<int, int>> edges;   // positions in `units`
    std::vector<int> edge_gate;               // the shared CZ of each edge
};

struct MergeResult {
    std::vector<Packet> packets;
    ConflictGraph conflicts;
};

// Chains consecutive packets of the same (root, remote) whenever every H on
// the root between them pairs into embedding units towards that remote.
// Units listed in `forbidden` are not used. If phi_g is given, units holding a
// detached CZ are refused. Throws NonBipartiteConflict if the conflict graph
// is not bipartite.
MergeResult merge_packets(const IndexedCircuit& ic, const std::vector<int>& phi_q, const std::vector<Packet>& packets,
                          const std::vector<EmbeddingUnit>& units, const std::vector<int>& forbidden = {},
                          const std::vector<int>* phi_g = nullptr);

// BFS two-colouring; false when the graph has an odd cycle.
bool two_colour(int n, const std::vector<std::pair<int, int>>& edges, std::vector<int>& colour);

std::string packets_to_json(const std::vector<Packet>& packets, const std::vector<EmbeddingUnit>& units, int indent = -1);

} // namespace dqc
