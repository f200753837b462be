#pragma once

#include "dqc/distribution.hpp"

#include <memory>
#include <string>
#include <vector>

namespace dqc {

// One ebit: the tree edge from -> to was activated to serve `gate`.
struct Activation {
    int from = 0;
    int to = 0;
    int gate = 0;
};

// Link on `module` disentangled right before the unit opened by `before_gate`.
struct Teardown {
    int before_gate = 0;
    int module = 0;
};

struct HedgeCostBreakdown {
    int hedge = 0;
    std::shared_ptr<const SteinerTree> tree;
    std::vector<Activation> activations;
    std::vector<Teardown> teardowns;
    int total = 0;
};

// Tree path from the linked module nearest to `target` (inclusive) to
// `target`. BFS over tree edges in name order, so ties are deterministic.
std::vector<int> path_from_linked(const Network& net, const SteinerTree& tree, int target,
                                  const std::vector<char>& linked);

// Sweep of the hyperedge's subcircuit: distributing a gate to an unlinked
// module activates the tree path to it; an embedding unit first tears down
// every link except the one on its remote module (kept only if already
// linked; units without CZ keep all links).
HedgeCostBreakdown hyperedge_cost(const Distribution& d, int h);
int hyperedge_ebits(const Distribution& d, int h);
int total_cost(const Distribution& d);

// Large sentinel cost for hyperedges that fail validation inside move
// evaluation, so that invalidating moves are never profitable.
constexpr int kInvalidPenalty = 1000000;

// Hyperedges whose cost can change when v moves.
std::vector<int> affected_hedges(const Distribution& d, const Vertex& v);

// cost_before - cost_after over affected hyperedges (positive = improvement).
// The distribution is restored before returning.
int move_gain(Distribution& d, const Vertex& v, int target);
int swap_gain(Distribution& d, int qa, int qb);

// Per-hyperedge cost cache for optimizers.
class CostCache {
public:
    explicit CostCache(const Distribution& d);
    int total() const { return total_; }
    int hedge(int h) const { return costs_[static_cast<std::size_t>(h)]; }
    // Recompute the given hyperedges after the caller mutated the distribution.
    void refresh(const Distribution& d, const std::vector<int>& hedges);
    void rebuild(const Distribution& d);

private:
    std::vector<int> costs_;
    int total_ = 0;
};

int hedge_cost_or_penalty(const Distribution& d, int h);

std::string cost_report_json(const Distribution& d, int indent = -1);

} // namespace dqc
