#pragma once

#include "dqc/distribution.hpp"
#include "dqc/packing.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace dqc {

// Minimum vertex cover of a bipartite graph via maximum matching and König's
// theorem. `seed` shuffles the augmenting order, which can yield a different
// (equally small) cover. Throws NotBipartite.
std::vector<int> min_vertex_cover_bipartite(int n, const std::vector<std::pair<int, int>>& edges,
                                            std::uint64_t seed = 0);

// Packet graph: merged packets as vertices, one edge per non-local CRz that
// both of its packets could distribute. Packets whose partner side embeds one
// of their gates are forced into every cover.
struct PacketGraph {
    std::vector<Packet> packets;
    std::vector<EmbeddingUnit> units;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> edge_gate;
    std::vector<int> forced;
    std::vector<int> given_up;   // units dropped to resolve embedding conflicts
};

PacketGraph build_packet_graph(const IndexedCircuit& ic, const std::vector<int>& phi_q, std::uint64_t seed = 0);

struct CoverOptions {
    int attempts = 8;
    std::uint64_t seed = 0;
};

// Qubit allocation is kept; gate-vertices and hyperedges follow the cheapest
// of several minimum covers of the packet graph.
Distribution distribute_by_cover(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net,
                                 const std::vector<int>& phi_q, const CoverOptions& opt = {});

// Distribution realising the chosen packets (indices into g.packets).
Distribution distribution_from_packets(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net,
                                       const std::vector<int>& phi_q, const PacketGraph& g,
                                       const std::vector<int>& chosen);

} // namespace dqc
