#include "dqc/cost.hpp"

#include "dqc/error.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "json.hpp"

namespace dqc {

std::vector<int> path_from_linked(const Network& net, const SteinerTree& tree, int target,
                                  const std::vector<char>& linked) {
    const int n = net.size();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : tree.edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& v : adj)
        std::sort(v.begin(), v.end(), [&](int x, int y) { return net.name_rank(x) < net.name_rank(y); });
    std::vector<int> parent(static_cast<std::size_t>(n), -2);
    std::queue<int> q;
    parent[static_cast<std::size_t>(target)] = -1;
    q.push(target);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (linked[static_cast<std::size_t>(u)]) {
            std::vector<int> path;
            for (int x = u; x != -1; x = parent[static_cast<std::size_t>(x)]) path.push_back(x);
            return path;   // linked ... target
        }
        for (int v : adj[static_cast<std::size_t>(u)])
            if (parent[static_cast<std::size_t>(v)] == -2) {
                parent[static_cast<std::size_t>(v)] = u;
                q.push(v);
            }
    }
    throw InvalidHyperedge("module " + net.module(target).name + " not reachable from a linked module in the tree");
}

HedgeCostBreakdown hyperedge_cost(const Distribution& d, int h) {
    HedgeWalk w = analyze_hyperedge(d, h);
    const Network& net = d.network();
    HedgeCostBreakdown out;
    out.hedge = h;
    out.tree = net.steiner_tree(w.terminals);
    if (w.terminals.size() == 1) return out;

    std::vector<char> linked(static_cast<std::size_t>(net.size()), 0);
    linked[static_cast<std::size_t>(w.home)] = 1;
    for (const auto& step : w.steps) {
        if (!step.unit) {
            int m = d.phi_g[static_cast<std::size_t>(step.index)];
            if (linked[static_cast<std::size_t>(m)]) continue;
            auto path = path_from_linked(net, *out.tree, m, linked);
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                out.activations.push_back({path[i], path[i + 1], step.index});
                linked[static_cast<std::size_t>(path[i + 1])] = 1;
            }
            continue;
        }
        const UnitSpan& u = w.units[static_cast<std::size_t>(step.index)];
        if (u.remote < 0) continue;   // no CZ inside: every link survives with local corrections
        const bool keep = linked[static_cast<std::size_t>(u.remote)] != 0;
        for (int m = 0; m < net.size(); ++m) {
            if (!linked[static_cast<std::size_t>(m)] || m == w.home || (keep && m == u.remote)) continue;
            out.teardowns.push_back({u.first_h, m});
            linked[static_cast<std::size_t>(m)] = 0;
        }
    }
    out.total = static_cast<int>(out.activations.size());
    return out;
}

int hyperedge_ebits(const Distribution& d, int h) { return hyperedge_cost(d, h).total; }

int total_cost(const Distribution& d) {
    int t = 0;
    for (std::size_t h = 0; h < d.hedges.size(); ++h) t += hyperedge_ebits(d, static_cast<int>(h));
    return t;
}

int hedge_cost_or_penalty(const Distribution& d, int h) {
    try {
        return hyperedge_ebits(d, h);
    } catch (const InvalidHyperedge&) {
        return kInvalidPenalty;
    }
}

std::vector<int> affected_hedges(const Distribution& d, const Vertex& v) {
    d.module_of(v);   // throws UnknownVertex
    std::set<int> hs;
    if (v.gate) {
        const Gate& g = d.circuit()[static_cast<std::size_t>(v.id)];
        for (int q : {g.q0, g.q1}) {
            int h = d.hedge_of(v.id, q);
            if (h >= 0) hs.insert(h);
        }
    } else {
        // Rooted hyperedges change home; partners' units see a new remote module.
        for (int h : d.hedges_on(v.id)) hs.insert(h);
        for (int g : d.ic().timeline[static_cast<std::size_t>(v.id)]) {
            const Gate& gate = d.circuit()[static_cast<std::size_t>(g)];
            if (gate.kind != GateKind::CRz) continue;
            int h = d.hedge_of(g, gate.other(v.id));
            if (h >= 0) hs.insert(h);
        }
    }
    return {hs.begin(), hs.end()};
}

namespace {

int sum_costs(const Distribution& d, const std::vector<int>& hs) {
    int s = 0;
    for (int h : hs) s += hedge_cost_or_penalty(d, h);
    return s;
}

} // namespace

int move_gain(Distribution& d, const Vertex& v, int target) {
    int from = d.module_of(v);
    if (target < 0 || target >= d.network().size()) throw UnknownModule("module id " + std::to_string(target));
    if (from == target) return 0;
    auto hs = affected_hedges(d, v);
    int before = sum_costs(d, hs);
    d.set_module(v, target);
    int after = sum_costs(d, hs);
    d.set_module(v, from);
    return before - after;
}

int swap_gain(Distribution& d, int qa, int qb) {
    int ma = d.module_of({false, qa}), mb = d.module_of({false, qb});
    if (ma == mb) return 0;
    auto ha = affected_hedges(d, {false, qa});
    auto hb = affected_hedges(d, {false, qb});
    std::set<int> all(ha.begin(), ha.end());
    all.insert(hb.begin(), hb.end());
    std::vector<int> hs(all.begin(), all.end());
    int before = sum_costs(d, hs);
    d.phi_q[static_cast<std::size_t>(qa)] = mb;
    d.phi_q[static_cast<std::size_t>(qb)] = ma;
    int after = sum_costs(d, hs);
    d.phi_q[static_cast<std::size_t>(qa)] = ma;
    d.phi_q[static_cast<std::size_t>(qb)] = mb;
    return before - after;
}

CostCache::CostCache(const Distribution& d) { rebuild(d); }

void CostCache::rebuild(const Distribution& d) {
    costs_.assign(d.hedges.size(), 0);
    total_ = 0;
    for (std::size_t h = 0; h < d.hedges.size(); ++h) {
        costs_[h] = hedge_cost_or_penalty(d, static_cast<int>(h));
        total_ += costs_[h];
    }
}

void CostCache::refresh(const Distribution& d, const std::vector<int>& hedges) {
    for (int h : hedges) {
        int c = hedge_cost_or_penalty(d, h);
        total_ += c - costs_[static_cast<std::size_t>(h)];
        costs_[static_cast<std::size_t>(h)] = c;
    }
}

std::string cost_report_json(const Distribution& d, int indent) {
    using nlohmann::json;
    const auto& net = d.network();
    json rows = json::array();
    int total = 0;
    for (std::size_t h = 0; h < d.hedges.size(); ++h) {
        auto b = hyperedge_cost(d, static_cast<int>(h));
        total += b.total;
        json acts = json::array(), tears = json::array(), edges = json::array();
        for (const auto& a : b.activations)
            acts.push_back({{"from", net.module(a.from).name}, {"to", net.module(a.to).name}, {"gate", a.gate}});
        for (const auto& t : b.teardowns) tears.push_back({{"before_gate", t.before_gate}, {"module", net.module(t.module).name}});
        for (auto [x, y] : b.tree->edges) edges.push_back({net.module(x).name, net.module(y).name});
        rows.push_back({{"hyperedge", h}, {"root", "q" + std::to_string(d.hedges[h].root)}, {"tree", edges},
                        {"activations", acts}, {"teardowns", tears}, {"ebits", b.total}});
    }
    return json{{"ebits", total}, {"hyperedges", rows}}.dump(indent);
}

} // namespace dqc
