#include "dqc/packing.hpp"

#include "dqc/error.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "json.hpp"

namespace dqc {

int Packet::first() const {
    int f = gates.empty() ? embedded.front() : gates.front();
    if (!embedded.empty()) f = std::min(f, embedded.front());
    return f;
}

int Packet::last() const {
    int l = gates.empty() ? embedded.back() : gates.back();
    if (!embedded.empty()) l = std::max(l, embedded.back());
    return l;
}

std::vector<Packet> identify_packets(const IndexedCircuit& ic, const std::vector<int>& phi_q) {
    std::vector<Packet> out;
    for (int q = 0; q < ic.qubits(); ++q) {
        const int home = phi_q[static_cast<std::size_t>(q)];
        std::map<int, Packet> open;   // remote -> packet in the current segment
        auto flush = [&]() {
            std::vector<Packet> seg;
            for (auto& [m, p] : open) seg.push_back(std::move(p));
            std::sort(seg.begin(), seg.end(), [](const Packet& a, const Packet& b) { return a.gates.front() < b.gates.front(); });
            for (auto& p : seg) out.push_back(std::move(p));
            open.clear();
        };
        for (int g : ic.timeline[static_cast<std::size_t>(q)]) {
            const Gate& gate = ic.gate(g);
            if (gate.kind == GateKind::H) {
                flush();
            } else if (gate.kind == GateKind::CRz) {
                int remote = phi_q[static_cast<std::size_t>(gate.other(q))];
                if (remote == home) continue;
                auto& p = open[remote];
                p.root = q;
                p.remote = remote;
                p.gates.push_back(g);
            }
        }
        flush();
    }
    return out;
}

std::vector<EmbeddingUnit> identify_embedding_units(const IndexedCircuit& ic, const std::vector<int>& phi_q) {
    std::vector<EmbeddingUnit> out;
    for (int q = 0; q < ic.qubits(); ++q) {
        const auto& tl = ic.timeline[static_cast<std::size_t>(q)];
        for (int p = 0; p < static_cast<int>(tl.size()); ++p) {
            if (ic.gate(tl[static_cast<std::size_t>(p)]).kind != GateKind::H) continue;
            if (auto u = embedding_unit_at(ic, phi_q, q, p)) out.push_back(std::move(*u));
        }
    }
    return out;
}

bool two_colour(int n, const std::vector<std::pair<int, int>>& edges, std::vector<int>& colour) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    colour.assign(static_cast<std::size_t>(n), -1);
    for (int s = 0; s < n; ++s) {
        if (colour[static_cast<std::size_t>(s)] >= 0) continue;
        colour[static_cast<std::size_t>(s)] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (colour[static_cast<std::size_t>(v)] < 0) {
                    colour[static_cast<std::size_t>(v)] = 1 - colour[static_cast<std::size_t>(u)];
                    q.push(v);
                } else if (colour[static_cast<std::size_t>(v)] == colour[static_cast<std::size_t>(u)]) {
                    return false;
                }
            }
        }
    }
    return true;
}

MergeResult merge_packets(const IndexedCircuit& ic, const std::vector<int>& phi_q, const std::vector<Packet>& packets,
                          const std::vector<EmbeddingUnit>& units, const std::vector<int>& forbidden,
                          const std::vector<int>* phi_g) {
    std::map<int, int> unit_at;   // opening H gate -> unit index
    for (std::size_t i = 0; i < units.size(); ++i) unit_at[units[i].first_h] = static_cast<int>(i);
    const std::set<int> banned(forbidden.begin(), forbidden.end());

    auto usable = [&](int ui, int remote) {
        if (banned.count(ui)) return false;
        const auto& u = units[static_cast<std::size_t>(ui)];
        if (u.remote >= 0 && u.remote != remote) return false;
        if (phi_g) {
            for (int cz : u.czs) {
                const Gate& g = ic.gate(cz);
                int m = (*phi_g)[static_cast<std::size_t>(cz)];
                if (m != phi_q[static_cast<std::size_t>(g.q0)] && m != phi_q[static_cast<std::size_t>(g.q1)]) return false;
            }
        }
        return true;
    };

    // Units bridging a -> b on the root, or empty with ok=false.
    auto bridge = [&](const Packet& a, const Packet& b, std::vector<int>& used) {
        used.clear();
        const auto& tl = ic.timeline[static_cast<std::size_t>(a.root)];
        std::vector<int> hs;
        for (int p = ic.pos_on(a.last(), a.root) + 1; p < ic.pos_on(b.first(), a.root); ++p)
            if (ic.gate(tl[static_cast<std::size_t>(p)]).kind == GateKind::H) hs.push_back(tl[static_cast<std::size_t>(p)]);
        if (hs.empty() || hs.size() % 2) return false;
        for (std::size_t i = 0; i < hs.size(); i += 2) {
            auto it = unit_at.find(hs[i]);
            if (it == unit_at.end()) return false;
            const auto& u = units[static_cast<std::size_t>(it->second)];
            if (u.last_h != hs[i + 1] || !usable(it->second, a.remote)) return false;
            used.push_back(it->second);
        }
        return true;
    };

    // Group by (root, remote), keeping time order.
    std::map<std::pair<int, int>, std::vector<const Packet*>> groups;
    for (const auto& p : packets) groups[{p.root, p.remote}].push_back(&p);

    MergeResult res;
    std::set<int> used_units;
    for (auto& [key, list] : groups) {
        std::sort(list.begin(), list.end(), [](const Packet* a, const Packet* b) { return a->first() < b->first(); });
        // Packets of CZs lying inside a unit on this root are absorbed when
        // that unit is used to bridge the packets around it.
        auto interior = [&](const Packet* p) {
            for (const auto& u : units)
                if (u.root == p->root && u.first_h < p->first() && p->last() < u.last_h) return true;
            return false;
        };
        Packet cur = *list.front();
        std::vector<int> used;
        for (std::size_t i = 1; i < list.size(); ++i) {
            std::size_t j = i;
            while (j < list.size() && interior(list[j])) ++j;
            if (j < list.size() && j > i && bridge(cur, *list[j], used)) i = j;
            if (bridge(cur, *list[i], used)) {
                for (int ui : used) {
                    cur.units.push_back(ui);
                    const auto& czs = units[static_cast<std::size_t>(ui)].czs;
                    cur.embedded.insert(cur.embedded.end(), czs.begin(), czs.end());
                    used_units.insert(ui);
                }
                cur.gates.insert(cur.gates.end(), list[i]->gates.begin(), list[i]->gates.end());
                cur.units.insert(cur.units.end(), list[i]->units.begin(), list[i]->units.end());
                cur.embedded.insert(cur.embedded.end(), list[i]->embedded.begin(), list[i]->embedded.end());
            } else {
                res.packets.push_back(std::move(cur));
                cur = *list[i];
            }
        }
        res.packets.push_back(std::move(cur));
    }
    std::sort(res.packets.begin(), res.packets.end(), [](const Packet& a, const Packet& b) {
        return std::make_pair(a.root, a.first()) < std::make_pair(b.root, b.first());
    });

    // Conflicts: CZ embedded by used units on two different roots.
    auto& cg = res.conflicts;
    cg.units.assign(used_units.begin(), used_units.end());
    std::map<int, int> pos;
    for (std::size_t i = 0; i < cg.units.size(); ++i) pos[cg.units[i]] = static_cast<int>(i);
    std::map<int, std::vector<int>> by_gate;
    for (int ui : cg.units)
        for (int cz : units[static_cast<std::size_t>(ui)].czs) by_gate[cz].push_back(ui);
    for (const auto& [g, us] : by_gate)
        for (std::size_t i = 0; i < us.size(); ++i)
            for (std::size_t j = i + 1; j < us.size(); ++j)
                if (units[static_cast<std::size_t>(us[i])].root != units[static_cast<std::size_t>(us[j])].root) {
                    cg.edges.push_back({pos[us[i]], pos[us[j]]});
                    cg.edge_gate.push_back(g);
                }
    std::vector<int> colour;
    if (!two_colour(static_cast<int>(cg.units.size()), cg.edges, colour))
        throw NonBipartiteConflict("embedding conflict graph has an odd cycle");
    return res;
}

std::string packets_to_json(const std::vector<Packet>& packets, const std::vector<EmbeddingUnit>& units, int indent) {
    using nlohmann::json;
    json ps = json::array();
    for (const auto& p : packets)
        ps.push_back({{"root", p.root}, {"remote", p.remote}, {"gates", p.gates}, {"units", p.units}, {"embedded", p.embedded}});
    json us = json::array();
    for (const auto& u : units)
        us.push_back({{"root", u.root}, {"first_h", u.first_h}, {"last_h", u.last_h}, {"remote", u.remote}, {"czs", u.czs}});
    return json{{"packets", ps}, {"units", us}}.dump(indent);
}

} // namespace dqc
