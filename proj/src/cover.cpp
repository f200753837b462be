#include "dqc/cover.hpp"

#include "dqc/cost.hpp"
#include "dqc/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <optional>
#include <set>

#include <spdlog/spdlog.h>

namespace dqc {

std::vector<int> min_vertex_cover_bipartite(int n, const std::vector<std::pair<int, int>>& edges, std::uint64_t seed) {
    for (auto [a, b] : edges)
        if (a < 0 || b < 0 || a >= n || b >= n) throw InvalidParams("edge endpoint out of range");
    std::vector<int> colour;
    if (!two_colour(n, edges, colour)) throw NotBipartite("graph has an odd cycle");

    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) {
        if (a == b) continue;
        int l = colour[static_cast<std::size_t>(a)] == 0 ? a : b;
        int r = l == a ? b : a;
        adj[static_cast<std::size_t>(l)].push_back(r);
    }
    std::vector<int> left;
    for (int v = 0; v < n; ++v)
        if (colour[static_cast<std::size_t>(v)] == 0) left.push_back(v);
    if (seed != 0) {
        std::shuffle(left.begin(), left.end(), rng);
        for (auto& a : adj) std::shuffle(a.begin(), a.end(), rng);
    }

    std::vector<int> match(static_cast<std::size_t>(n), -1);   // partner of each vertex
    std::vector<int> seen(static_cast<std::size_t>(n), -1);
    // Kuhn's augmenting paths, iterative to avoid deep recursion.
    auto augment = [&](int root, int stamp) {
        std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
        std::vector<int> via;   // right vertices on the current path
        while (!stack.empty()) {
            auto& [u, i] = stack.back();
            const auto& nb = adj[static_cast<std::size_t>(u)];
            if (i >= nb.size()) {
                stack.pop_back();
                if (!via.empty() && via.size() > stack.size()) via.pop_back();
                continue;
            }
            int r = nb[i++];
            if (seen[static_cast<std::size_t>(r)] == stamp) continue;
            seen[static_cast<std::size_t>(r)] = stamp;
            int m = match[static_cast<std::size_t>(r)];
            via.resize(stack.size() - 1);
            via.push_back(r);
            if (m < 0) {
                // Flip the path: stack[k].first is matched to via[k].
                for (std::size_t k = 0; k < stack.size(); ++k) {
                    match[static_cast<std::size_t>(stack[k].first)] = via[k];
                    match[static_cast<std::size_t>(via[k])] = stack[k].first;
                }
                return true;
            }
            stack.push_back({m, 0});
        }
        return false;
    };
    int stamp = 0;
    for (int l : left) augment(l, stamp++);

    // König: Z = reachable from free left vertices by alternating paths.
    std::vector<char> inz(static_cast<std::size_t>(n), 0);
    std::vector<int> todo;
    for (int l : left)
        if (match[static_cast<std::size_t>(l)] < 0) {
            inz[static_cast<std::size_t>(l)] = 1;
            todo.push_back(l);
        }
    while (!todo.empty()) {
        int u = todo.back();
        todo.pop_back();
        for (int r : adj[static_cast<std::size_t>(u)]) {
            if (inz[static_cast<std::size_t>(r)] || match[static_cast<std::size_t>(u)] == r) continue;
            inz[static_cast<std::size_t>(r)] = 1;
            int m = match[static_cast<std::size_t>(r)];
            if (m >= 0 && !inz[static_cast<std::size_t>(m)]) {
                inz[static_cast<std::size_t>(m)] = 1;
                todo.push_back(m);
            }
        }
    }
    std::vector<int> cover;
    for (int v = 0; v < n; ++v) {
        bool l = colour[static_cast<std::size_t>(v)] == 0;
        if (l ? !inz[static_cast<std::size_t>(v)] : inz[static_cast<std::size_t>(v)]) {
            // Unmatched left vertices outside Z can only be isolated ones.
            if (l && match[static_cast<std::size_t>(v)] < 0) continue;
            cover.push_back(v);
        }
    }
    return cover;
}

PacketGraph build_packet_graph(const IndexedCircuit& ic, const std::vector<int>& phi_q, std::uint64_t seed) {
    PacketGraph g;
    auto packets = identify_packets(ic, phi_q);
    g.units = identify_embedding_units(ic, phi_q);
    // Give up the fewest embeddings that removes every conflict.
    auto first = merge_packets(ic, phi_q, packets, g.units);
    const auto& k = first.conflicts;
    for (int v : min_vertex_cover_bipartite(static_cast<int>(k.units.size()), k.edges, seed))
        g.given_up.push_back(k.units[static_cast<std::size_t>(v)]);
    std::sort(g.given_up.begin(), g.given_up.end());
    auto merged = merge_packets(ic, phi_q, packets, g.units, g.given_up);
    if (!merged.conflicts.edges.empty()) throw ConflictDetected("embedding conflicts left after resolution");
    g.packets = std::move(merged.packets);

    // gate -> (packet, embedded?) per side
    std::map<int, std::vector<std::pair<int, bool>>> sides;
    for (std::size_t i = 0; i < g.packets.size(); ++i) {
        for (int x : g.packets[i].gates) sides[x].push_back({static_cast<int>(i), false});
        for (int x : g.packets[i].embedded) sides[x].push_back({static_cast<int>(i), true});
    }
    std::set<int> forced;
    for (const auto& [gate, ps] : sides) {
        if (ps.size() != 2) continue;
        auto [a, ea] = ps[0];
        auto [b, eb] = ps[1];
        if (ea && eb) throw ConflictDetected("gate " + std::to_string(gate) + " embedded on both sides");
        if (ea) forced.insert(b);
        else if (eb) forced.insert(a);
        else {
            g.edges.push_back({a, b});
            g.edge_gate.push_back(gate);
        }
    }
    g.forced.assign(forced.begin(), forced.end());
    return g;
}

Distribution distribution_from_packets(std::shared_ptr<const IndexedCircuit> icp, std::shared_ptr<const Network> net,
                                       const std::vector<int>& phi_q, const PacketGraph& pg,
                                       const std::vector<int>& chosen) {
    const IndexedCircuit& ic = *icp;
    Distribution d = make_distribution(icp, net);
    d.phi_q = phi_q;
    // Gate placement: the first chosen packet that handles a gate decides.
    std::vector<char> placed(ic.circuit.size(), 0);
    for (int pi : chosen) {
        const Packet& p = pg.packets[static_cast<std::size_t>(pi)];
        for (int x : p.gates)
            if (!placed[static_cast<std::size_t>(x)]) {
                d.phi_g[static_cast<std::size_t>(x)] = p.remote;
                placed[static_cast<std::size_t>(x)] = 1;
            }
        for (int x : p.embedded) {
            d.phi_g[static_cast<std::size_t>(x)] = phi_q[static_cast<std::size_t>(p.root)];
            placed[static_cast<std::size_t>(x)] = 1;
        }
    }
    for (int x : d.gate_vertices()) {
        if (placed[static_cast<std::size_t>(x)]) continue;
        // Local gates sit with their qubits; an uncovered non-local gate cannot
        // occur for a cover, but stay deterministic anyway.
        d.phi_g[static_cast<std::size_t>(x)] = phi_q[static_cast<std::size_t>(ic.gate(x).q0)];
    }

    // Hyperedges: chosen spans (overlaps merged) plus basic runs elsewhere.
    d.hedges.clear();
    for (int q = 0; q < ic.qubits(); ++q) {
        std::vector<std::pair<int, int>> spans;
        for (int pi : chosen) {
            const Packet& p = pg.packets[static_cast<std::size_t>(pi)];
            if (p.root == q) spans.push_back({p.first(), p.last()});
        }
        std::sort(spans.begin(), spans.end());
        std::vector<std::pair<int, int>> joined;
        for (auto s : spans) {
            if (!joined.empty() && s.first <= joined.back().second) joined.back().second = std::max(joined.back().second, s.second);
            else joined.push_back(s);
        }
        std::size_t si = 0;
        Hyperedge cur{q, {}};
        int cur_span = -1;
        auto close = [&]() {
            if (!cur.gates.empty()) d.hedges.push_back(cur);
            cur.gates.clear();
        };
        for (int x : ic.timeline[static_cast<std::size_t>(q)]) {
            while (si < joined.size() && joined[si].second < x) ++si;
            bool inside = si < joined.size() && joined[si].first <= x;
            int span = inside ? static_cast<int>(si) : -1;
            const Gate& gate = ic.gate(x);
            if (gate.kind == GateKind::H) {
                if (!inside) close();
                continue;
            }
            if (gate.kind != GateKind::CRz) continue;
            if (span != cur_span) close();
            cur_span = span;
            cur.gates.push_back(x);
        }
        close();
    }
    d.reindex();
    return d;
}

Distribution distribute_by_cover(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net,
                                 const std::vector<int>& phi_q, const CoverOptions& opt) {
    PacketGraph g = build_packet_graph(*ic, phi_q, opt.seed);
    std::set<int> forced(g.forced.begin(), g.forced.end());
    std::vector<std::pair<int, int>> rest;
    for (auto e : g.edges)
        if (!forced.count(e.first) && !forced.count(e.second)) rest.push_back(e);

    std::optional<Distribution> best;
    int best_cost = 0;
    std::set<std::vector<int>> tried;
    for (int a = 0; a < std::max(1, opt.attempts); ++a) {
        std::vector<int> chosen = g.forced;
        auto c = min_vertex_cover_bipartite(static_cast<int>(g.packets.size()), rest,
                                            a == 0 ? 0 : opt.seed * 1000003ULL + static_cast<std::uint64_t>(a));
        chosen.insert(chosen.end(), c.begin(), c.end());
        std::sort(chosen.begin(), chosen.end());
        if (!tried.insert(chosen).second) continue;
        Distribution d = distribution_from_packets(ic, net, phi_q, g, chosen);
        auto viol = check_validity(d);
        if (!viol.empty()) {
            spdlog::warn("cover distribution invalid ({}); retrying without embedding", viol.front().message);
            PacketGraph plain = g;
            auto packets = identify_packets(*ic, phi_q);
            std::vector<int> all(g.units.size());
            std::iota(all.begin(), all.end(), 0);
            plain.packets = merge_packets(*ic, phi_q, packets, g.units, all).packets;
            // Unmerged packets never span an H, so any cover of them is valid.
            std::vector<std::pair<int, int>> es;
            std::map<int, std::vector<int>> by_gate;
            for (std::size_t i = 0; i < plain.packets.size(); ++i)
                for (int x : plain.packets[i].gates) by_gate[x].push_back(static_cast<int>(i));
            for (const auto& [x, ps] : by_gate)
                if (ps.size() == 2) es.push_back({ps[0], ps[1]});
            auto pc = min_vertex_cover_bipartite(static_cast<int>(plain.packets.size()), es, 0);
            d = distribution_from_packets(ic, net, phi_q, plain, pc);
        }
        int cost = total_cost(d);
        if (!best || cost < best_cost) {
            best = std::move(d);
            best_cost = cost;
        }
    }
    return std::move(*best);
}

} // namespace dqc
